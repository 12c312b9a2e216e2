#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kmetamodes/dataset.hpp"
#include "kmetamodes/metrics.hpp"
#include "kmetamodes/scoring.hpp"

namespace kmm {

struct RunConfig {
  std::vector<std::string> inputs;
  DatasetRecipe recipe = DatasetRecipe::generic();
  std::uint32_t bins = 10;
  std::string missing_token;
  EnsembleConfig ensemble;
  ScoreVariant variant = ScoreVariant::mode_to_metamodes;
  ScoreAgg agg = ScoreAgg::sum;
  std::string out_dir;
  std::optional<std::string> schema_path;  // reuse a saved schema instead of inferring
};

struct RunSummary {
  std::optional<double> auc;          // absent when the input is unlabeled
  std::size_t records = 0;
  std::size_t positives = 0;
  std::uint64_t malformed_rows = 0;
  std::size_t num_samples = 0;
  std::map<std::string, double> per_category_recall;  // at FPR <= 10%
  std::map<std::string, double> timings_ms;
};

// load -> schema -> discretize -> fit -> score -> evaluate -> write. Writes
// schema.json, model.json, scores.csv, auc.txt, roc.csv, pr.csv and
// summary.json under out_dir. Any stage error aborts with the stage name and
// removes the outputs created by this run.
RunSummary run_pipeline(const RunConfig& config);

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Output writers shared with the CLI subcommands. Doubles are rendered
// shortest-round-trip, so equal runs give byte-identical files.
void write_scores_csv(const std::string& path, const ScoredDataset& scored);
ScoredDataset read_scores_csv(const std::string& path);
void write_roc_csv(const std::string& path, const std::vector<RocPoint>& curve);
void write_pr_csv(const std::string& path, const std::vector<PrPoint>& curve);
void write_auc_txt(const std::string& path, double value);

// Smallest-FPR-compliant operating point: the staircase point with the
// highest TPR subject to fpr <= max_fpr; returns its threshold.
double threshold_at_fpr(const std::vector<RocPoint>& curve, double max_fpr);

std::string format_double(double value);

}  // namespace kmm
