#include "kmetamodes/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "kmetamodes/csv.hpp"
#include "kmetamodes/error.hpp"
#include "kmetamodes/model_io.hpp"

namespace kmm {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_scores_csv(const std::string& path, const ScoredDataset& scored) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io, "cannot write " + path);
  const bool labeled = !scored.labels.empty();
  out << (labeled ? "index,score,label\n" : "index,score\n");
  for (std::size_t i = 0; i < scored.scores.size(); ++i) {
    out << i << ',' << format_double(scored.scores[i]);
    if (labeled) out << ',' << static_cast<int>(scored.labels[i]);
    out << '\n';
  }
  if (!out) raise(Errc::io, "write failed for " + path);
}

ScoredDataset read_scores_csv(const std::string& path) {
  CsvReader reader(path);
  std::vector<std::string> row;
  if (!reader.next(row)) raise(Errc::io, path + " is empty");
  const bool labeled = row.size() >= 3 && row[2] == "label";
  if (row.size() < 2 || row[0] != "index" || row[1] != "score") {
    raise(Errc::io, path + " is not a scores CSV");
  }
  ScoredDataset scored;
  while (reader.next(row)) {
    if (row.size() != (labeled ? 3u : 2u)) raise(Errc::io, "malformed scores row in " + path);
    double score = 0.0;
    if (!parse_double(row[1], score)) raise(Errc::io, "bad score value in " + path);
    scored.scores.push_back(score);
    if (labeled) {
      double label = 0.0;
      if (!parse_double(row[2], label)) raise(Errc::io, "bad label value in " + path);
      scored.labels.push_back(label != 0.0 ? 1 : 0);
    }
  }
  return scored;
}

void write_roc_csv(const std::string& path, const std::vector<RocPoint>& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io, "cannot write " + path);
  out << "fpr,tpr,threshold\n";
  for (const RocPoint& p : curve) {
    out << format_double(p.fpr) << ',' << format_double(p.tpr) << ','
        << format_double(p.threshold) << '\n';
  }
  if (!out) raise(Errc::io, "write failed for " + path);
}

void write_pr_csv(const std::string& path, const std::vector<PrPoint>& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io, "cannot write " + path);
  out << "recall,precision,threshold\n";
  for (const PrPoint& p : curve) {
    out << format_double(p.recall) << ',' << format_double(p.precision) << ','
        << format_double(p.threshold) << '\n';
  }
  if (!out) raise(Errc::io, "write failed for " + path);
}

void write_auc_txt(const std::string& path, double value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io, "cannot write " + path);
  out << format_double(value) << '\n';
  if (!out) raise(Errc::io, "write failed for " + path);
}

double threshold_at_fpr(const std::vector<RocPoint>& curve, double max_fpr) {
  double threshold = std::numeric_limits<double>::infinity();
  for (const RocPoint& p : curve) {  // fpr ascends along the staircase
    if (p.fpr <= max_fpr) {
      threshold = p.threshold;
    } else {
      break;
    }
  }
  return threshold;
}

namespace {

class StageClock {
 public:
  explicit StageClock(std::map<std::string, double>& sink) : sink_(sink) {}

  template <typename F>
  auto time(const std::string& stage, F&& body) -> decltype(body()) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        record(stage, start);
        return;
      } else {
        auto result = body();
        record(stage, start);
        return result;
      }
    } catch (const Error& e) {
      throw Error(e.code(), "stage " + stage + ": " + e.what());
    }
  }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    sink_[stage] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count();
  }

  std::map<std::string, double>& sink_;
};

// Removes this run's outputs if a stage throws.
class OutputTracker {
 public:
  ~OutputTracker() {
    if (!armed_) return;
    for (const std::string& path : created_) {
      std::error_code ec;
      fs::remove(path, ec);
    }
  }
  std::string track(const std::string& path) {
    created_.push_back(path);
    return path;
  }
  void disarm() { armed_ = false; }

 private:
  std::vector<std::string> created_;
  bool armed_ = true;
};

}  // namespace

RunSummary run_pipeline(const RunConfig& config) {
  RunSummary summary;
  StageClock clock(summary.timings_ms);

  if (config.out_dir.empty()) raise(Errc::config, "output directory not set");
  fs::create_directories(config.out_dir);
  const auto out_path = [&](const char* name) {
    return (fs::path(config.out_dir) / name).string();
  };
  OutputTracker outputs;

  // load
  LoadedDataset loaded = clock.time("load", [&] { return load_dataset(config.inputs, config.recipe); });
  summary.records = loaded.rows.size();
  summary.malformed_rows = loaded.malformed_rows;
  for (std::uint8_t y : loaded.labels) summary.positives += y != 0 ? 1u : 0u;

  // schema
  Schema schema = clock.time("schema", [&] {
    if (config.schema_path) {
      Schema loaded_schema = load_schema(*config.schema_path);
      if (loaded_schema.header != loaded.header) {
        raise(Errc::schema, "saved schema header does not match the input data");
      }
      return loaded_schema;
    }
    const DiscretizeConfig dc =
        make_discretize_config(config.recipe, config.bins, config.missing_token);
    return infer_schema(loaded.header, loaded.rows, dc);
  });
  clock.time("write-schema",
             [&] { save_schema(schema, outputs.track(out_path("schema.json"))); });

  // discretize
  Dataset records = clock.time("discretize", [&] {
    Dataset data(schema.m());
    data.reserve(loaded.rows.size());
    std::vector<CategoryId> ids;
    std::uint64_t skipped = 0;
    for (const auto& raw : loaded.rows) {
      if (discretize_row(raw, schema, ids)) {
        data.append(ids);
      } else {
        ++skipped;  // cannot happen for rows load_dataset accepted
      }
    }
    if (skipped != 0) raise(Errc::schema, "schema does not match the loaded rows");
    return data;
  });
  loaded.rows.clear();
  loaded.rows.shrink_to_fit();

  // fit
  Model model = clock.time("fit", [&] {
    MetaResult fitted = fit_ensemble(records, config.ensemble);
    summary.num_samples = fitted.partitions.size();
    return make_model(std::move(fitted), config.ensemble, schema.hash());
  });
  clock.time("write-model", [&] { save_model(model, outputs.track(out_path("model.json"))); });

  // score
  ScoredDataset scored = clock.time("score", [&] {
    ScoreParams params{config.variant, config.agg, config.ensemble.workers};
    const auto domains = schema.domain_sizes();
    ScoredDataset s = score_records(records, model, domains, params);
    s.labels = loaded.labels;
    return s;
  });
  clock.time("write-scores",
             [&] { write_scores_csv(outputs.track(out_path("scores.csv")), scored); });

  // evaluate
  if (!scored.labels.empty()) {
    clock.time("evaluate", [&] {
      const auto roc = roc_curve(scored);
      const auto pr = pr_curve(scored);
      const double area = auc(scored);
      summary.auc = area;
      write_auc_txt(outputs.track(out_path("auc.txt")), area);
      write_roc_csv(outputs.track(out_path("roc.csv")), roc);
      write_pr_csv(outputs.track(out_path("pr.csv")), pr);

      if (!loaded.attack_categories.empty()) {
        const double threshold = threshold_at_fpr(roc, 0.10);
        std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> hits;  // flagged, total
        for (std::size_t i = 0; i < scored.scores.size(); ++i) {
          if (scored.labels[i] == 0) continue;
          auto& entry = hits[loaded.attack_categories[i]];
          ++entry.second;
          if (scored.scores[i] >= threshold) ++entry.first;
        }
        for (const auto& [category, counts] : hits) {
          summary.per_category_recall[category] =
              static_cast<double>(counts.first) / static_cast<double>(counts.second);
        }
      }
    });
  }

  // summary
  {
    ordered_json doc;
    if (summary.auc) {
      doc["auc"] = *summary.auc;
    } else {
      doc["auc"] = nullptr;
    }
    doc["records"] = summary.records;
    doc["positives"] = summary.positives;
    doc["malformed_rows"] = summary.malformed_rows;
    doc["num_samples"] = summary.num_samples;
    doc["modes"] = model.modes.size();
    doc["metamodes"] = model.metamodes.size();
    ordered_json params;
    params["recipe"] = std::string(to_string(config.recipe.kind));
    params["bins"] = config.bins;
    params["sample_size"] = config.ensemble.sample_size;
    params["cover_all"] = config.ensemble.cover_all;
    params["num_samples"] = config.ensemble.num_samples;
    params["k"] = config.ensemble.k;
    params["k_meta"] = config.ensemble.k_meta;
    params["stage1_distance"] = std::string(to_string(config.ensemble.stage1_distance));
    params["stage2_distance"] = std::string(to_string(config.ensemble.stage2_distance));
    params["seed"] = config.ensemble.seed;
    params["workers"] = config.ensemble.workers;
    params["variant"] = std::string(to_string(config.variant));
    params["agg"] = std::string(to_string(config.agg));
    doc["params"] = std::move(params);
    ordered_json timings;
    for (const auto& [stage, ms] : summary.timings_ms) timings[stage] = ms;
    doc["timings_ms"] = std::move(timings);
    if (!summary.per_category_recall.empty()) {
      ordered_json recalls;
      for (const auto& [category, recall] : summary.per_category_recall) {
        recalls[category] = recall;
      }
      doc["per_category_recall_at_fpr10"] = std::move(recalls);
    } else {
      doc["per_category_recall_at_fpr10"] = nullptr;
    }
    std::ofstream out(outputs.track(out_path("summary.json")), std::ios::binary);
    if (!out) raise(Errc::io, "cannot write summary.json");
    out << doc.dump(2) << '\n';
  }

  outputs.disarm();
  return summary;
}

RunConfig run_config_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& ex) {
    raise(Errc::config, std::string("unparseable run config: ") + ex.what());
  }
  try {
    RunConfig config;
    config.inputs = doc.at("inputs").get<std::vector<std::string>>();
    const auto recipe_name = doc.value("recipe", std::string("generic"));
    const auto kind = recipe_from_string(recipe_name);
    if (!kind) raise(Errc::config, "unknown recipe '" + recipe_name + "'");
    switch (*kind) {
      case RecipeKind::kdd99: config.recipe = DatasetRecipe::kdd99(); break;
      case RecipeKind::unsw_nb15: config.recipe = DatasetRecipe::unsw_nb15(); break;
      case RecipeKind::generic:
        config.recipe = DatasetRecipe::generic(doc.value("label_column", std::string()));
        break;
    }
    if (doc.contains("row_limit") && !doc.at("row_limit").is_null()) {
      config.recipe.row_limit = doc.at("row_limit").get<std::uint64_t>();
    }
    config.bins = doc.value("bins", 10u);
    config.missing_token = doc.value("missing_token", std::string());
    config.ensemble.sample_size = doc.value("sample_size", 10000u);
    config.ensemble.cover_all = doc.value("cover_all", !doc.contains("num_samples"));
    config.ensemble.num_samples = doc.value("num_samples", 0u);
    config.ensemble.k = doc.value("k", 22u);
    config.ensemble.k_meta = doc.value("k_meta", config.ensemble.k);
    const auto stage1_name = doc.value("stage1_distance", std::string("frequency"));
    const auto stage1 = distance_from_string(stage1_name);
    if (!stage1) raise(Errc::config, "unknown stage1_distance '" + stage1_name + "'");
    config.ensemble.stage1_distance = *stage1;
    const auto stage2_name = doc.value("distance", std::string("frequency"));
    const auto stage2 = distance_from_string(stage2_name);
    if (!stage2) raise(Errc::config, "unknown distance '" + stage2_name + "'");
    config.ensemble.stage2_distance = *stage2;
    config.ensemble.seed = doc.value("seed", 0ull);
    config.ensemble.workers = doc.value("workers", 1u);
    config.ensemble.max_iterations = doc.value("max_iterations", 100u);
    const auto variant_name = doc.value("variant", std::string("mode"));
    const auto variant = variant_from_string(variant_name);
    if (!variant) raise(Errc::config, "unknown variant '" + variant_name + "'");
    config.variant = *variant;
    const auto agg_name = doc.value("agg", std::string("sum"));
    const auto agg = agg_from_string(agg_name);
    if (!agg) raise(Errc::config, "unknown agg '" + agg_name + "'");
    config.agg = *agg;
    config.out_dir = doc.value("out_dir", std::string());
    if (doc.contains("schema") && !doc.at("schema").is_null()) {
      config.schema_path = doc.at("schema").get<std::string>();
    }
    return config;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    raise(Errc::config, std::string("malformed run config: ") + ex.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return run_config_from_json(text);
}

}  // namespace kmm
