#include "kmetamodes/distance.hpp"

#include <cmath>

#include "kmetamodes/error.hpp"

namespace kmm {

std::string_view to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::hamming: return "hamming";
    case DistanceKind::frequency: return "frequency";
    case DistanceKind::meta_frequency: return "meta-frequency";
  }
  return "?";
}

std::optional<DistanceKind> distance_from_string(std::string_view name) {
  if (name == "hamming") return DistanceKind::hamming;
  if (name == "frequency") return DistanceKind::frequency;
  if (name == "meta-frequency" || name == "meta_frequency") return DistanceKind::meta_frequency;
  return std::nullopt;
}

namespace {

void check_length(std::size_t record_m, std::size_t mode_m) {
  if (record_m != mode_m) {
    raise(Errc::distance, "attribute count mismatch: record has " + std::to_string(record_m) +
                              ", representative has " + std::to_string(mode_m));
  }
}

CategoryId top_of(const CountMap& counts, std::uint64_t n, double& top_freq) {
  std::uint64_t best = 0;
  CategoryId value = 0;
  for (const auto& [cat, count] : counts) {
    if (count > best) {
      best = count;
      value = cat;
    }
  }
  top_freq = static_cast<double>(best) / static_cast<double>(n);
  return value;
}

// Match/mismatch sum against a count-carrying representative.
double frequency_distance_impl(std::span<const CategoryId> record,
                               const std::vector<CountMap>& counts, std::uint64_t n) {
  check_length(record.size(), counts.size());
  double total = 0.0;
  for (std::size_t j = 0; j < record.size(); ++j) {
    double top_freq = 0.0;
    const CategoryId top = top_of(counts[j], n, top_freq);
    total += record[j] == top ? 1.0 - top_freq : 1.0;
  }
  return total;
}

// Euclidean distance between two frequency distributions, walked over the
// union of their sorted supports; absent ids contribute frequency 0.
double attribute_euclidean(const CountMap& a, std::uint64_t na, const CountMap& b,
                           std::uint64_t nb) {
  double sum_sq = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() || ib < b.size()) {
    double fa = 0.0, fb = 0.0;
    CategoryId ca = ia < a.size() ? a[ia].first : 0;
    CategoryId cb = ib < b.size() ? b[ib].first : 0;
    if (ib >= b.size() || (ia < a.size() && ca < cb)) {
      fa = static_cast<double>(a[ia].second) / static_cast<double>(na);
      ++ia;
    } else if (ia >= a.size() || cb < ca) {
      fb = static_cast<double>(b[ib].second) / static_cast<double>(nb);
      ++ib;
    } else {
      fa = static_cast<double>(a[ia].second) / static_cast<double>(na);
      fb = static_cast<double>(b[ib].second) / static_cast<double>(nb);
      ++ia;
      ++ib;
    }
    const double diff = fa - fb;
    sum_sq += diff * diff;
  }
  return std::sqrt(sum_sq);
}

}  // namespace

double hamming_distance(std::span<const CategoryId> record, const Mode& mode) {
  check_length(record.size(), mode.m());
  double total = 0.0;
  for (std::size_t j = 0; j < record.size(); ++j) {
    if (record[j] != top_value(mode, j)) total += 1.0;
  }
  return total;
}

double frequency_distance(std::span<const CategoryId> record, const Mode& mode) {
  return frequency_distance_impl(record, mode.counts, mode.n_members);
}

double frequency_distance(std::span<const CategoryId> record, const Metamode& metamode) {
  return frequency_distance_impl(record, metamode.counts, metamode.n_total);
}

double meta_frequency_distance(const Mode& mode, const Metamode& metamode) {
  check_length(mode.m(), metamode.m());
  if (mode.n_members == 0 || metamode.n_total == 0) {
    raise(Errc::distance, "meta_frequency_distance on empty representative");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < mode.m(); ++j) {
    total += attribute_euclidean(mode.counts[j], mode.n_members, metamode.counts[j],
                                 metamode.n_total);
  }
  return total;
}

double record_to_metamode(std::span<const CategoryId> record, const Metamode& metamode,
                          DistanceKind kind) {
  switch (kind) {
    case DistanceKind::frequency:
      return frequency_distance(record, metamode);
    case DistanceKind::meta_frequency:
      return meta_frequency_distance(record_as_mode(record), metamode);
    case DistanceKind::hamming:
      break;
  }
  raise(Errc::config, "hamming distance is not defined against metamodes");
}

}  // namespace kmm
