// kmetamodes: ensemble k-modes outlier detection on mixed CSV data.
//
//   schema    infer and save the dataset schema (dictionaries + bin edges)
//   fit       two-stage ensemble clustering, writes the model file
//   score     per-record outlier scores from a saved model
//   evaluate  ROC / PR / AUC from a scores file
//   run       full pipeline from a JSON config

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "kmetamodes/error.hpp"
#include "kmetamodes/kernels.hpp"
#include "kmetamodes/model_io.hpp"
#include "kmetamodes/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonDataArgs {
  std::vector<std::string> inputs;
  std::string recipe = "generic";
  std::string label_column;
  std::uint64_t row_limit = 0;

  kmm::DatasetRecipe make_recipe() const {
    const auto kind = kmm::recipe_from_string(recipe);
    if (!kind) kmm::raise(kmm::Errc::config, "unknown recipe '" + recipe + "'");
    kmm::DatasetRecipe r;
    switch (*kind) {
      case kmm::RecipeKind::kdd99: r = kmm::DatasetRecipe::kdd99(); break;
      case kmm::RecipeKind::unsw_nb15: r = kmm::DatasetRecipe::unsw_nb15(); break;
      case kmm::RecipeKind::generic: r = kmm::DatasetRecipe::generic(label_column); break;
    }
    if (row_limit > 0) r.row_limit = row_limit;
    return r;
  }
};

void add_data_options(CLI::App* cmd, CommonDataArgs& args) {
  cmd->add_option("--input", args.inputs, "input CSV file(s), plain or gzip")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--recipe", args.recipe, "dataset recipe: generic|kdd99|unsw-nb15")
      ->default_val("generic");
  cmd->add_option("--label-column", args.label_column, "label column name (generic recipe)");
  cmd->add_option("--row-limit", args.row_limit, "override the recipe's row limit");
}

void apply_kernel_choice(const std::string& kernel) {
  if (kernel == "auto") {
    kmm::select_kernels_auto();
  } else if (kernel == "scalar") {
    kmm::select_kernels(kmm::KernelIsa::scalar);
  } else if (kernel == "avx2") {
    kmm::select_kernels(kmm::KernelIsa::avx2);
  } else {
    kmm::raise(kmm::Errc::config, "unknown kernel '" + kernel + "'");
  }
}

kmm::DistanceKind parse_distance_arg(const std::string& name, const char* flag) {
  const auto kind = kmm::distance_from_string(name);
  if (!kind) kmm::raise(kmm::Errc::config, std::string("unknown value for ") + flag);
  return *kind;
}

std::string out_file(const std::string& dir, const char* name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ensemble k-modes / k-metamodes outlier detection"};
  app.require_subcommand(1);
  std::string kernel = "auto";
  app.add_option("--kernel", kernel, "distance kernel: auto|scalar|avx2")->default_val("auto");

  // schema
  auto* schema_cmd = app.add_subcommand("schema", "infer and save the dataset schema");
  CommonDataArgs schema_data;
  add_data_options(schema_cmd, schema_data);
  std::uint32_t bins = 10;
  std::string missing_token;
  std::string out_dir = "out";
  schema_cmd->add_option("--bins", bins, "bins per numeric column")->default_val(10);
  schema_cmd->add_option("--missing-token", missing_token, "cell value treated as missing");
  schema_cmd->add_option("--out", out_dir, "output directory")->required();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit the two-stage ensemble model");
  CommonDataArgs fit_data;
  add_data_options(fit_cmd, fit_data);
  std::string fit_schema_path;
  std::string fit_out = "out";
  kmm::EnsembleConfig ensemble;
  std::string stage1_distance = "frequency";
  std::string stage2_distance = "frequency";
  std::uint32_t num_samples = 0;
  bool cover_all = false;
  std::uint32_t fit_bins_opt = 10;
  std::string fit_missing;
  fit_cmd->add_option("--schema", fit_schema_path, "reuse a saved schema.json")
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--bins", fit_bins_opt, "bins per numeric column (when inferring)");
  fit_cmd->add_option("--missing-token", fit_missing, "missing token (when inferring)");
  fit_cmd->add_option("--sample-size", ensemble.sample_size, "records per sample")
      ->default_val(10000);
  fit_cmd->add_option("--num-samples", num_samples, "number of samples (without replacement)");
  fit_cmd->add_flag("--cover-all", cover_all, "partition the whole dataset");
  fit_cmd->add_option("--k", ensemble.k, "stage-1 modes per sample")->default_val(22);
  fit_cmd->add_option("--k-meta", ensemble.k_meta, "metamodes (defaults to --k)");
  fit_cmd
      ->add_option("--stage1-distance", stage1_distance, "stage-1 distance: hamming|frequency")
      ->default_val("frequency");
  fit_cmd
      ->add_option("--distance", stage2_distance,
                   "stage-2 / scoring distance: frequency|meta-frequency")
      ->default_val("frequency");
  fit_cmd->add_option("--seed", ensemble.seed, "RNG seed")->default_val(0);
  fit_cmd->add_option("--workers", ensemble.workers, "parallel stage-1 lanes")->default_val(1);
  fit_cmd->add_option("--max-iterations", ensemble.max_iterations, "iteration cap")
      ->default_val(100);
  fit_cmd->add_option("--out", fit_out, "output directory")->required();

  // score
  auto* score_cmd = app.add_subcommand("score", "score records with a saved model");
  CommonDataArgs score_data;
  add_data_options(score_cmd, score_data);
  std::string score_schema_path;
  std::string score_model_path;
  std::string score_variant = "mode";
  std::string score_agg = "sum";
  std::string score_out = "out";
  std::uint32_t score_workers = 1;
  score_cmd->add_option("--schema", score_schema_path, "schema.json from the fit run")
      ->required()
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--model", score_model_path, "model.json from the fit run")
      ->required()
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--variant", score_variant, "outlier score: record|mode")
      ->default_val("mode");
  score_cmd->add_option("--score-agg", score_agg, "aggregate over metamodes: sum|min")
      ->default_val("sum");
  score_cmd->add_option("--workers", score_workers, "parallel scoring lanes")->default_val(1);
  score_cmd->add_option("--out", score_out, "output directory")->required();

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "ROC/PR/AUC from a scores file");
  std::string eval_scores;
  std::string eval_out = "out";
  eval_cmd->add_option("--scores", eval_scores, "scores.csv from a score run")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_out, "output directory")->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "full pipeline from a JSON config");
  std::string run_config_path;
  std::string run_out;
  run_cmd->add_option("--config", run_config_path, "run config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run_out, "output directory (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_kernel_choice(kernel);

    if (*schema_cmd) {
      const auto recipe = schema_data.make_recipe();
      const auto loaded = kmm::load_dataset(schema_data.inputs, recipe);
      const auto dc = kmm::make_discretize_config(recipe, bins, missing_token);
      const auto schema = kmm::infer_schema(loaded.header, loaded.rows, dc);
      const auto path = out_file(out_dir, "schema.json");
      kmm::save_schema(schema, path);
      std::cout << "schema: " << schema.m() << " attributes, hash " << schema.hash() << " -> "
                << path << "\n";
      return 0;
    }

    if (*fit_cmd) {
      ensemble.cover_all = cover_all || num_samples == 0;
      ensemble.num_samples = num_samples;
      ensemble.stage1_distance = parse_distance_arg(stage1_distance, "--stage1-distance");
      ensemble.stage2_distance = parse_distance_arg(stage2_distance, "--distance");
      if (fit_cmd->count("--k-meta") == 0) ensemble.k_meta = ensemble.k;
      ensemble.validate();

      const auto recipe = fit_data.make_recipe();
      const auto loaded = kmm::load_dataset(fit_data.inputs, recipe);
      kmm::Schema schema;
      if (!fit_schema_path.empty()) {
        schema = kmm::load_schema(fit_schema_path);
      } else {
        const auto dc = kmm::make_discretize_config(recipe, fit_bins_opt, fit_missing);
        schema = kmm::infer_schema(loaded.header, loaded.rows, dc);
      }
      kmm::Dataset records(schema.m());
      records.reserve(loaded.rows.size());
      std::vector<kmm::CategoryId> ids;
      for (const auto& raw : loaded.rows) {
        if (kmm::discretize_row(raw, schema, ids)) records.append(ids);
      }
      if (records.size() != loaded.rows.size()) {
        kmm::raise(kmm::Errc::schema, "schema does not match the loaded rows");
      }

      kmm::MetaResult fitted = kmm::fit_ensemble(records, ensemble);
      const auto model = kmm::make_model(std::move(fitted), ensemble, schema.hash());
      kmm::save_schema(schema, out_file(fit_out, "schema.json"));
      const auto model_path = out_file(fit_out, "model.json");
      kmm::save_model(model, model_path);
      std::cout << "fit: " << model.modes.size() << " modes, " << model.metamodes.size()
                << " metamodes -> " << model_path << "\n";
      return 0;
    }

    if (*score_cmd) {
      const auto variant = kmm::variant_from_string(score_variant);
      if (!variant) kmm::raise(kmm::Errc::config, "unknown variant '" + score_variant + "'");
      const auto agg = kmm::agg_from_string(score_agg);
      if (!agg) kmm::raise(kmm::Errc::config, "unknown score-agg '" + score_agg + "'");

      const auto schema = kmm::load_schema(score_schema_path);
      const auto model = kmm::load_model(score_model_path);
      if (model.schema_hash != schema.hash()) {
        kmm::raise(kmm::Errc::model, "model was fitted under schema " + model.schema_hash +
                                         ", given schema " + schema.hash());
      }
      const auto recipe = score_data.make_recipe();
      const auto loaded = kmm::load_dataset(score_data.inputs, recipe);
      kmm::Dataset records(schema.m());
      records.reserve(loaded.rows.size());
      std::vector<kmm::CategoryId> ids;
      for (const auto& raw : loaded.rows) {
        if (kmm::discretize_row(raw, schema, ids)) records.append(ids);
      }
      if (records.size() != loaded.rows.size()) {
        kmm::raise(kmm::Errc::schema, "schema does not match the loaded rows");
      }

      kmm::ScoreParams params{*variant, *agg, score_workers};
      auto scored = kmm::score_records(records, model, schema.domain_sizes(), params);
      scored.labels = loaded.labels;
      const auto path = out_file(score_out, "scores.csv");
      kmm::write_scores_csv(path, scored);
      std::cout << "score: " << scored.scores.size() << " records -> " << path << "\n";
      return 0;
    }

    if (*eval_cmd) {
      const auto scored = kmm::read_scores_csv(eval_scores);
      const auto roc = kmm::roc_curve(scored);
      const auto pr = kmm::pr_curve(scored);
      const double area = kmm::auc(scored);
      kmm::write_auc_txt(out_file(eval_out, "auc.txt"), area);
      kmm::write_roc_csv(out_file(eval_out, "roc.csv"), roc);
      kmm::write_pr_csv(out_file(eval_out, "pr.csv"), pr);
      std::cout << "auc: " << kmm::format_double(area) << "\n";
      return 0;
    }

    if (*run_cmd) {
      auto config = kmm::load_run_config(run_config_path);
      if (!run_out.empty()) config.out_dir = run_out;
      const auto summary = kmm::run_pipeline(config);
      std::cout << "records: " << summary.records << "\n";
      if (summary.auc) std::cout << "auc: " << kmm::format_double(*summary.auc) << "\n";
      std::cout << "outputs: " << config.out_dir << "\n";
      return 0;
    }
  } catch (const kmm::Error& e) {
    std::cerr << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
