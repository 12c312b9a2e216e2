#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "kmetamodes/model.hpp"

namespace kmm {

// hamming: count of differing attributes against the classical (top-value)
//   mode projection. Stage 1 only.
// frequency: a match at attribute j costs 1 minus the top value's relative
//   frequency, a mismatch costs 1. Stage 1, stage 2 (via top-value
//   projection of the clustered modes) and record scoring.
// meta_frequency: per attribute, the Euclidean distance between the two
//   normalized frequency distributions over the union of their supports,
//   summed over attributes. Stage 2 and record scoring.
enum class DistanceKind { hamming, frequency, meta_frequency };

std::string_view to_string(DistanceKind kind);
std::optional<DistanceKind> distance_from_string(std::string_view name);

double hamming_distance(std::span<const CategoryId> record, const Mode& mode);

double frequency_distance(std::span<const CategoryId> record, const Mode& mode);
double frequency_distance(std::span<const CategoryId> record, const Metamode& metamode);

double meta_frequency_distance(const Mode& mode, const Metamode& metamode);

// Record-to-metamode distance used for outlier scores: the frequency kind
// applies the match/mismatch rule against the metamode's top values; the
// meta-frequency kind lifts the record to a singleton mode. hamming is
// rejected here.
double record_to_metamode(std::span<const CategoryId> record, const Metamode& metamode,
                          DistanceKind kind);

}  // namespace kmm
