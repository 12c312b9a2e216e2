#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kmetamodes/solver.hpp"

namespace kmm {

struct EnsembleConfig {
  std::uint32_t sample_size = 10000;
  std::uint32_t num_samples = 0;   // ignored when cover_all
  bool cover_all = true;           // seeded shuffle, partition the whole dataset
  std::uint32_t k = 22;            // stage-1 modes per sample
  std::uint32_t k_meta = 22;       // metamodes
  DistanceKind stage1_distance = DistanceKind::frequency;   // hamming or frequency
  DistanceKind stage2_distance = DistanceKind::frequency;   // frequency or meta-frequency
  std::uint64_t seed = 0;
  std::uint32_t workers = 1;
  std::uint32_t max_iterations = 100;

  void validate() const;
};

struct Stage2Result {
  std::vector<Metamode> metamodes;             // k_meta, ids 0..k_meta-1
  std::vector<std::uint32_t> mode_to_metamode; // object mode index -> metamode id
  std::uint32_t iterations = 0;
  bool hit_iteration_cap = false;
};

struct MetaResult {
  std::vector<std::vector<std::uint32_t>> partitions;  // record indices per sample
  std::vector<ClusteringResult> stage1;                // one per partition
  std::vector<Mode> modes;             // all stage-1 modes, global id = p*k + local
  std::vector<Metamode> metamodes;
  std::vector<std::uint32_t> mode_to_metamode;
  std::vector<std::uint32_t> record_mode;  // record -> global mode id; kNoIndex if unsampled
};

// Disjoint index partitions drawn uniformly without replacement (seeded).
// cover_all shuffles and chunks the whole index range; the last partition may
// be smaller.
std::vector<std::vector<std::uint32_t>> draw_samples(std::size_t dataset_size,
                                                     const EnsembleConfig& config);

// Clusters every partition independently across `workers` lanes. Results are
// ordered by partition index and bitwise-independent of the worker count.
std::vector<ClusteringResult> stage1(const Dataset& records,
                                     const std::vector<std::vector<std::uint32_t>>& partitions,
                                     const EnsembleConfig& config);

// k-modes over the collected stage-1 modes. frequency: objects are projected
// to their top values and matched against the metamode's top-value frequency;
// meta-frequency: full distribution distance. Update always re-merges counts.
Stage2Result stage2(const std::vector<Mode>& modes, const EnsembleConfig& config);

MetaResult fit_ensemble(const Dataset& records, const EnsembleConfig& config);

// Mean intra-cluster similarity, 1 - frequency_distance(record, its mode)/m,
// averaged per partition then across partitions, for each candidate k.
std::vector<std::pair<std::uint32_t, double>> k_sweep(
    const Dataset& records, const std::vector<std::vector<std::uint32_t>>& partitions,
    std::span<const std::uint32_t> k_candidates, const EnsembleConfig& config);

}  // namespace kmm
