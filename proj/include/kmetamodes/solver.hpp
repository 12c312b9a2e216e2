#pragma once

#include <cstdint>
#include <vector>

#include "kmetamodes/distance.hpp"
#include "kmetamodes/model.hpp"

namespace kmm {

struct SolverConfig {
  std::uint32_t k = 2;
  std::uint32_t max_iterations = 100;  // safety valve; convergence is zero reassignments
  std::uint64_t seed = 0;
  DistanceKind distance = DistanceKind::frequency;  // hamming or frequency
};

struct ClusteringResult {
  std::vector<Mode> modes;      // k modes, ids 0..k-1
  Assignment assignment;        // record -> cluster
  double cost = 0.0;            // final objective: sum of assigned distances
  std::uint32_t iterations = 0; // assignment steps executed
  bool hit_iteration_cap = false;
  std::vector<double> cost_trace;  // objective after each assignment step

  bool operator==(const ClusteringResult&) const = default;
};

// Seeds k pairwise-distinct records (uniformly at random, seeded) as
// singleton modes. Raises init-error naming the shortfall when the partition
// has fewer than k distinct records.
std::vector<Mode> init_modes(const Dataset& records, const SolverConfig& config);

// Fix Q, optimize W: every record moves to its argmin-distance mode, ties to
// the lowest mode id.
Assignment assign_step(const Dataset& records, const std::vector<Mode>& modes,
                       DistanceKind distance);

// Fix W, optimize Q: each mode is retallied from its cluster. A cluster left
// empty is re-seeded from the record farthest from its own mode (the record
// moves, both modes are retallied); `assignment` reflects any such moves.
std::vector<Mode> update_step(const Dataset& records, Assignment& assignment, std::uint32_t k,
                              DistanceKind distance);

// Alternates assign/update until an assignment step moves no record, or
// max_iterations. (records, config) fully determine the result.
ClusteringResult fit_partition(const Dataset& records, const SolverConfig& config);

}  // namespace kmm
