#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kmetamodes/scoring.hpp"

namespace kmm {

struct RocPoint {
  double fpr;
  double tpr;
  double threshold;
};

struct PrPoint {
  double recall;
  double precision;
  double threshold;
};

// Staircase over descending unique scores, from (0,0) to (1,1). Requires
// labels with both classes present.
std::vector<RocPoint> roc_curve(const ScoredDataset& scored);

// Rank-based (Mann-Whitney) AUC with average ranks for ties; equals the
// trapezoidal area under roc_curve.
double auc(const ScoredDataset& scored);

double trapezoid_area(std::span<const RocPoint> curve);

// Precision at recall 0 is defined as 1.
std::vector<PrPoint> pr_curve(const ScoredDataset& scored);

}  // namespace kmm
