#include "kmetamodes/solver.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <unordered_set>

#include "kmetamodes/error.hpp"
#include "kmetamodes/kernels.hpp"
#include "kmetamodes/rng.hpp"

namespace kmm {

namespace {

struct RowHash {
  const Dataset* data;
  std::size_t operator()(std::uint32_t i) const {
    const auto row = data->row(i);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (CategoryId v : row) {
      h ^= v;
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct RowEq {
  const Dataset* data;
  bool operator()(std::uint32_t a, std::uint32_t b) const {
    const auto ra = data->row(a);
    const auto rb = data->row(b);
    return std::memcmp(ra.data(), rb.data(), ra.size_bytes()) == 0;
  }
};

void check_stage1_distance(DistanceKind distance) {
  if (distance != DistanceKind::hamming && distance != DistanceKind::frequency) {
    raise(Errc::config, "stage-1 distance must be hamming or frequency");
  }
}

std::vector<ModeProjection> project_all(const std::vector<Mode>& modes) {
  std::vector<ModeProjection> out;
  out.reserve(modes.size());
  for (const Mode& mode : modes) out.push_back(project_mode(mode));
  return out;
}

double record_mode_distance(std::span<const CategoryId> row, const ModeProjection& p,
                            DistanceKind distance) {
  return distance == DistanceKind::hamming ? kernel_hamming(row, p) : kernel_frequency(row, p);
}

// Argmin assignment; optionally reports each record's winning distance.
Assignment assign_impl(const Dataset& records, const std::vector<Mode>& modes,
                       DistanceKind distance, std::vector<double>* best_out) {
  const auto projections = project_all(modes);
  Assignment assignment(records.size());
  if (best_out != nullptr) best_out->resize(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto row = records.row(i);
    double best = record_mode_distance(row, projections[0], distance);
    std::uint32_t best_l = 0;
    for (std::uint32_t l = 1; l < projections.size(); ++l) {
      const double d = record_mode_distance(row, projections[l], distance);
      if (d < best) {  // strict: ties stay with the lowest mode id
        best = d;
        best_l = l;
      }
    }
    assignment[i] = best_l;
    if (best_out != nullptr) (*best_out)[i] = best;
  }
  return assignment;
}

// Dense per-cluster tally; domains sized from the partition itself.
std::vector<Mode> tally_modes(const Dataset& records, const Assignment& assignment,
                              std::uint32_t k, std::span<const std::uint32_t> domain) {
  const std::size_t m = records.m();
  std::vector<std::uint32_t> offsets(m + 1, 0);
  for (std::size_t j = 0; j < m; ++j) offsets[j + 1] = offsets[j] + domain[j];
  const std::size_t stride = offsets[m];

  std::vector<std::uint64_t> tally(static_cast<std::size_t>(k) * stride, 0);
  std::vector<std::uint64_t> sizes(k, 0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::uint32_t l = assignment[i];
    ++sizes[l];
    std::uint64_t* base = tally.data() + static_cast<std::size_t>(l) * stride;
    const CategoryId* row = records.row_ptr(i);
    for (std::size_t j = 0; j < m; ++j) ++base[offsets[j] + row[j]];
  }

  std::vector<Mode> modes(k);
  for (std::uint32_t l = 0; l < k; ++l) {
    Mode& mode = modes[l];
    mode.id = l;
    mode.n_members = sizes[l];
    mode.counts.resize(m);
    const std::uint64_t* base = tally.data() + static_cast<std::size_t>(l) * stride;
    for (std::size_t j = 0; j < m; ++j) {
      CountMap& cm = mode.counts[j];
      for (std::uint32_t c = 0; c < domain[j]; ++c) {
        const std::uint64_t count = base[offsets[j] + c];
        if (count != 0) cm.emplace_back(c, count);
      }
    }
  }
  return modes;
}

std::vector<std::uint32_t> partition_domain(const Dataset& records) {
  std::vector<std::uint32_t> domain(records.m(), 1);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const CategoryId* row = records.row_ptr(i);
    for (std::size_t j = 0; j < records.m(); ++j) {
      if (row[j] + 1 > domain[j]) domain[j] = row[j] + 1;
    }
  }
  return domain;
}

// Moves the record farthest from its own mode into each empty cluster.
void repair_empty_clusters(const Dataset& records, Assignment& assignment,
                           std::vector<Mode>& modes, DistanceKind distance) {
  for (;;) {
    std::vector<std::uint64_t> sizes(modes.size(), 0);
    for (std::uint32_t l : assignment) ++sizes[l];
    std::uint32_t empty = kNoIndex;
    for (std::uint32_t l = 0; l < modes.size(); ++l) {
      if (sizes[l] == 0) {
        empty = l;
        break;
      }
    }
    if (empty == kNoIndex) return;

    const auto projections = project_all(modes);
    double worst = -1.0;
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (sizes[assignment[i]] <= 1) continue;  // do not empty another cluster
      const double d =
          record_mode_distance(records.row(i), projections[assignment[i]], distance);
      if (d > worst) {
        worst = d;
        worst_i = i;
      }
    }
    if (worst < 0.0) raise(Errc::init, "cannot repair empty cluster: no movable record");

    const std::uint32_t from = assignment[worst_i];
    assignment[worst_i] = empty;
    modes[empty] = record_as_mode(records.row(worst_i));
    modes[empty].id = empty;
    // Retally the donor cluster without the moved record.
    std::vector<std::uint32_t> members;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (assignment[i] == from) members.push_back(static_cast<std::uint32_t>(i));
    }
    modes[from] = mode_from_records(records, members);
    modes[from].id = from;
  }
}

}  // namespace

std::vector<Mode> init_modes(const Dataset& records, const SolverConfig& config) {
  check_stage1_distance(config.distance);
  if (config.k == 0) raise(Errc::config, "k must be >= 1");
  if (records.empty()) raise(Errc::init, "empty partition");

  std::vector<std::uint32_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  rng.shuffle(order);

  std::unordered_set<std::uint32_t, RowHash, RowEq> seen(16, RowHash{&records}, RowEq{&records});
  std::vector<Mode> modes;
  modes.reserve(config.k);
  for (std::uint32_t i : order) {
    if (modes.size() == config.k) break;
    if (!seen.insert(i).second) continue;
    Mode mode = record_as_mode(records.row(i));
    mode.id = static_cast<std::uint32_t>(modes.size());
    modes.push_back(std::move(mode));
  }
  if (modes.size() < config.k) {
    // Count the full distinct total for the error message.
    for (std::uint32_t i : order) seen.insert(i);
    raise(Errc::init, "partition has " + std::to_string(seen.size()) +
                          " distinct records, cannot initialise k=" + std::to_string(config.k) +
                          " modes");
  }
  return modes;
}

Assignment assign_step(const Dataset& records, const std::vector<Mode>& modes,
                       DistanceKind distance) {
  check_stage1_distance(distance);
  if (modes.empty()) raise(Errc::config, "assign_step with no modes");
  return assign_impl(records, modes, distance, nullptr);
}

std::vector<Mode> update_step(const Dataset& records, Assignment& assignment, std::uint32_t k,
                              DistanceKind distance) {
  check_stage1_distance(distance);
  if (assignment.size() != records.size()) {
    raise(Errc::config, "assignment does not cover all records");
  }
  const auto domain = partition_domain(records);
  auto modes = tally_modes(records, assignment, k, domain);
  bool any_empty = false;
  for (const Mode& mode : modes) any_empty |= mode.n_members == 0;
  if (any_empty) repair_empty_clusters(records, assignment, modes, distance);
  return modes;
}

ClusteringResult fit_partition(const Dataset& records, const SolverConfig& config) {
  if (config.max_iterations == 0) raise(Errc::config, "max_iterations must be >= 1");
  ClusteringResult result;
  result.modes = init_modes(records, config);
  const auto domain = partition_domain(records);

  Assignment previous;
  std::vector<double> best_dist;
  for (std::uint32_t iter = 0; iter < config.max_iterations; ++iter) {
    Assignment assignment = assign_impl(records, result.modes, config.distance, &best_dist);
    ++result.iterations;
    result.cost_trace.push_back(std::accumulate(best_dist.begin(), best_dist.end(), 0.0));

    const bool converged = !previous.empty() && assignment == previous;
    if (converged || iter + 1 == config.max_iterations) {
      result.hit_iteration_cap = !converged;
      result.assignment = std::move(assignment);
      result.cost = result.cost_trace.back();
      return result;
    }

    auto modes = tally_modes(records, assignment, config.k, domain);
    bool any_empty = false;
    for (const Mode& mode : modes) any_empty |= mode.n_members == 0;
    if (any_empty) repair_empty_clusters(records, assignment, modes, config.distance);
    result.modes = std::move(modes);
    previous = std::move(assignment);
  }
  return result;  // unreachable: max_iterations >= 1 guaranteed by config validation
}

}  // namespace kmm
