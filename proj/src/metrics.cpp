#include "kmetamodes/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kmetamodes/error.hpp"

namespace kmm {

namespace {

struct ClassCounts {
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
};

ClassCounts check_labels(const ScoredDataset& scored) {
  if (scored.labels.empty()) raise(Errc::metric, "no labels attached to the scored dataset");
  if (scored.labels.size() != scored.scores.size()) {
    raise(Errc::metric, "label/score length mismatch");
  }
  ClassCounts counts;
  for (std::uint8_t y : scored.labels) {
    if (y != 0) {
      ++counts.positives;
    } else {
      ++counts.negatives;
    }
  }
  if (counts.positives == 0 || counts.negatives == 0) {
    raise(Errc::metric, "labels contain a single class; curves are undefined");
  }
  return counts;
}

// Indices sorted by score descending; equal scores keep input order (the
// curves group ties, so the within-tie order never matters).
std::vector<std::uint32_t> descending_order(const std::vector<double>& scores) {
  std::vector<std::uint32_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

std::vector<RocPoint> roc_curve(const ScoredDataset& scored) {
  const ClassCounts counts = check_labels(scored);
  const auto order = descending_order(scored.scores);
  const double np = static_cast<double>(counts.positives);
  const double nn = static_cast<double>(counts.negatives);

  std::vector<RocPoint> curve;
  curve.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::uint64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scored.scores[order[i]];
    while (i < order.size() && scored.scores[order[i]] == threshold) {
      if (scored.labels[order[i]] != 0) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    curve.push_back({static_cast<double>(fp) / nn, static_cast<double>(tp) / np, threshold});
  }
  return curve;
}

double trapezoid_area(std::span<const RocPoint> curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) * 0.5;
  }
  return area;
}

double auc(const ScoredDataset& scored) {
  const ClassCounts counts = check_labels(scored);
  const std::size_t n = scored.scores.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return scored.scores[a] < scored.scores[b]; });

  // Sum of positive ranks, ascending order, average rank across each tie group.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    std::uint64_t pos_in_group = 0;
    while (j < n && scored.scores[order[j]] == scored.scores[order[i]]) {
      if (scored.labels[order[j]] != 0) ++pos_in_group;
      ++j;
    }
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    rank_sum += avg_rank * static_cast<double>(pos_in_group);
    i = j;
  }
  const double np = static_cast<double>(counts.positives);
  const double nn = static_cast<double>(counts.negatives);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

std::vector<PrPoint> pr_curve(const ScoredDataset& scored) {
  const ClassCounts counts = check_labels(scored);
  const auto order = descending_order(scored.scores);
  const double np = static_cast<double>(counts.positives);

  std::vector<PrPoint> curve;
  curve.push_back({0.0, 1.0, std::numeric_limits<double>::infinity()});
  std::uint64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scored.scores[order[i]];
    while (i < order.size() && scored.scores[order[i]] == threshold) {
      if (scored.labels[order[i]] != 0) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    curve.push_back({static_cast<double>(tp) / np,
                     static_cast<double>(tp) / static_cast<double>(tp + fp), threshold});
  }
  return curve;
}

}  // namespace kmm
