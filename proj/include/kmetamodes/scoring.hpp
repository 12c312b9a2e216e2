#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kmetamodes/model_io.hpp"

namespace kmm {

// record_to_metamodes: aggregate of the record's distance to every metamode.
// mode_to_metamodes: every record inherits the aggregate distance of its
// stage-1 mode to all metamodes; requires a cover-all fit so each record
// carries a cluster id.
enum class ScoreVariant { record_to_metamodes, mode_to_metamodes };
enum class ScoreAgg { sum, min };

std::string_view to_string(ScoreVariant v);
std::optional<ScoreVariant> variant_from_string(std::string_view name);
std::string_view to_string(ScoreAgg a);
std::optional<ScoreAgg> agg_from_string(std::string_view name);

struct ScoredDataset {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;  // empty when unlabeled; 1 = attack
  ScoreVariant variant = ScoreVariant::record_to_metamodes;
};

struct ScoreParams {
  ScoreVariant variant = ScoreVariant::mode_to_metamodes;
  ScoreAgg agg = ScoreAgg::sum;
  std::uint32_t workers = 1;
};

// Scores every record against the model's metamodes with the model's
// stage-2 distance. `domain_sizes` must bound every record id (use
// Schema::domain_sizes(); tests may derive them from the data).
ScoredDataset score_records(const Dataset& records, const Model& model,
                            std::span<const std::uint32_t> domain_sizes,
                            const ScoreParams& params);

std::vector<std::uint32_t> domain_sizes_from(const Dataset& records, const Model& model);

}  // namespace kmm
