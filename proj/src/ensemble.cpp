#include "kmetamodes/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <optional>
#include <thread>

#include "kmetamodes/error.hpp"
#include "kmetamodes/kernels.hpp"
#include "kmetamodes/rng.hpp"

namespace kmm {

namespace {

// Seed streams; keeps partition solvers and the two sampling stages independent.
constexpr std::uint64_t kSamplingStream = 1;
constexpr std::uint64_t kStage2Stream = 2;
constexpr std::uint64_t kStage1StreamBase = 1000;

double mode_metamode_distance(const Mode& mode, std::span<const CategoryId> mode_top,
                              const Metamode& metamode, DistanceKind kind) {
  if (kind == DistanceKind::frequency) {
    return frequency_distance(mode_top, metamode);
  }
  return meta_frequency_distance(mode, metamode);
}

}  // namespace

void EnsembleConfig::validate() const {
  if (sample_size == 0) raise(Errc::config, "sample_size must be >= 1");
  if (!cover_all && num_samples == 0) {
    raise(Errc::config, "num_samples must be >= 1 (or use cover-all)");
  }
  if (k == 0 || k_meta == 0) raise(Errc::config, "k and k_meta must be >= 1");
  if (workers == 0) raise(Errc::config, "workers must be >= 1");
  if (max_iterations == 0) raise(Errc::config, "max_iterations must be >= 1");
  if (stage1_distance != DistanceKind::hamming && stage1_distance != DistanceKind::frequency) {
    raise(Errc::config, "stage-1 distance must be hamming or frequency");
  }
  if (stage2_distance != DistanceKind::frequency &&
      stage2_distance != DistanceKind::meta_frequency) {
    raise(Errc::config, "stage-2 distance must be frequency or meta-frequency");
  }
}

std::vector<std::vector<std::uint32_t>> draw_samples(std::size_t dataset_size,
                                                     const EnsembleConfig& config) {
  config.validate();
  if (dataset_size == 0) raise(Errc::sampling, "empty dataset");
  if (dataset_size < config.sample_size) {
    raise(Errc::sampling, "dataset has " + std::to_string(dataset_size) +
                              " records, sample_size is " + std::to_string(config.sample_size));
  }
  if (!config.cover_all) {
    const std::uint64_t need =
        static_cast<std::uint64_t>(config.sample_size) * config.num_samples;
    if (need > dataset_size) {
      raise(Errc::sampling, "cannot draw " + std::to_string(config.num_samples) + " samples of " +
                                std::to_string(config.sample_size) + " from " +
                                std::to_string(dataset_size) + " records without replacement");
    }
  }

  std::vector<std::uint32_t> order(dataset_size);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(config.seed, kSamplingStream));
  rng.shuffle(order);

  const std::size_t count =
      config.cover_all ? (dataset_size + config.sample_size - 1) / config.sample_size
                       : config.num_samples;
  std::vector<std::vector<std::uint32_t>> partitions(count);
  std::size_t pos = 0;
  for (std::size_t p = 0; p < count; ++p) {
    const std::size_t take = std::min<std::size_t>(config.sample_size, dataset_size - pos);
    partitions[p].assign(order.begin() + pos, order.begin() + pos + take);
    std::sort(partitions[p].begin(), partitions[p].end());
    pos += take;
  }
  return partitions;
}

std::vector<ClusteringResult> stage1(const Dataset& records,
                                     const std::vector<std::vector<std::uint32_t>>& partitions,
                                     const EnsembleConfig& config) {
  config.validate();
  const std::size_t count = partitions.size();
  std::vector<ClusteringResult> results(count);
  std::vector<std::optional<Error>> errors(count);

  const auto run_one = [&](std::size_t p) {
    SolverConfig solver;
    solver.k = config.k;
    solver.max_iterations = config.max_iterations;
    solver.seed = derive_seed(config.seed, kStage1StreamBase + p);
    solver.distance = config.stage1_distance;
    try {
      results[p] = fit_partition(records.gather(partitions[p]), solver);
    } catch (const Error& e) {
      errors[p] = e;
    }
  };

  const std::size_t lanes = std::min<std::size_t>(config.workers, count);
  if (lanes <= 1) {
    for (std::size_t p = 0; p < count; ++p) run_one(p);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(lanes);
    for (std::size_t t = 0; t < lanes; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t p = cursor.fetch_add(1);
          if (p >= count) return;
          run_one(p);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t p = 0; p < count; ++p) {
    if (errors[p]) {
      throw Error(errors[p]->code(),
                  "partition " + std::to_string(p) + ": " + errors[p]->what());
    }
  }
  return results;
}

Stage2Result stage2(const std::vector<Mode>& modes, const EnsembleConfig& config) {
  config.validate();
  if (modes.size() < config.k_meta) {
    raise(Errc::init, "have " + std::to_string(modes.size()) + " modes, cannot initialise k'=" +
                          std::to_string(config.k_meta) + " metamodes");
  }
  const DistanceKind kind = config.stage2_distance;

  // Objects never change during stage 2; project once.
  std::vector<std::vector<CategoryId>> tops(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) tops[i] = top_values(modes[i]);

  // Seed with pairwise-distinct modes under the active distance.
  std::vector<std::uint32_t> order(modes.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(config.seed, kStage2Stream));
  rng.shuffle(order);

  std::vector<Metamode> metamodes;
  metamodes.reserve(config.k_meta);
  for (std::uint32_t i : order) {
    if (metamodes.size() == config.k_meta) break;
    bool distinct = true;
    for (const Metamode& seeded : metamodes) {
      if (mode_metamode_distance(modes[i], tops[i], seeded, kind) <= 0.0) {
        distinct = false;
        break;
      }
    }
    if (!distinct) continue;
    Metamode seed = metamode_from_mode(modes[i]);
    seed.id = static_cast<std::uint32_t>(metamodes.size());
    metamodes.push_back(std::move(seed));
  }
  if (metamodes.size() < config.k_meta) {
    raise(Errc::init, "only " + std::to_string(metamodes.size()) +
                          " pairwise-distinct modes under " + std::string(to_string(kind)) +
                          ", cannot initialise k'=" + std::to_string(config.k_meta));
  }

  Stage2Result result;
  std::vector<std::uint32_t> assignment(modes.size(), 0);
  std::vector<std::uint32_t> previous;
  for (std::uint32_t iter = 0; iter < config.max_iterations; ++iter) {
    // Assign: each mode to its closest metamode, ties to the lowest id.
    for (std::size_t i = 0; i < modes.size(); ++i) {
      double best = mode_metamode_distance(modes[i], tops[i], metamodes[0], kind);
      std::uint32_t best_t = 0;
      for (std::uint32_t t = 1; t < metamodes.size(); ++t) {
        const double d = mode_metamode_distance(modes[i], tops[i], metamodes[t], kind);
        if (d < best) {
          best = d;
          best_t = t;
        }
      }
      assignment[i] = best_t;
    }
    ++result.iterations;
    const bool converged = !previous.empty() && assignment == previous;
    if (converged || iter + 1 == config.max_iterations) {
      result.hit_iteration_cap = !converged;
      break;
    }

    // Update: re-merge member counts; repair empty meta-clusters from the
    // farthest mode, as in stage 1.
    std::vector<std::vector<std::uint32_t>> members(config.k_meta);
    for (std::size_t i = 0; i < modes.size(); ++i) members[assignment[i]].push_back(i);
    for (std::uint32_t t = 0; t < config.k_meta; ++t) {
      if (members[t].empty()) continue;
      metamodes[t] = merge_modes(modes, members[t]);
      metamodes[t].id = t;
    }
    for (std::uint32_t t = 0; t < config.k_meta; ++t) {
      if (!members[t].empty()) continue;
      double worst = -1.0;
      std::size_t worst_i = 0;
      for (std::size_t i = 0; i < modes.size(); ++i) {
        if (members[assignment[i]].size() <= 1) continue;
        const double d =
            mode_metamode_distance(modes[i], tops[i], metamodes[assignment[i]], kind);
        if (d > worst) {
          worst = d;
          worst_i = i;
        }
      }
      if (worst < 0.0) raise(Errc::init, "cannot repair empty meta-cluster");
      const std::uint32_t from = assignment[worst_i];
      auto& donors = members[from];
      donors.erase(std::find(donors.begin(), donors.end(), static_cast<std::uint32_t>(worst_i)));
      members[t].push_back(static_cast<std::uint32_t>(worst_i));
      assignment[worst_i] = t;
      metamodes[t] = merge_modes(modes, members[t]);
      metamodes[t].id = t;
      metamodes[from] = merge_modes(modes, donors);
      metamodes[from].id = from;
    }
    previous = assignment;
  }

  result.metamodes = std::move(metamodes);
  result.mode_to_metamode = std::move(assignment);
  return result;
}

MetaResult fit_ensemble(const Dataset& records, const EnsembleConfig& config) {
  MetaResult result;
  result.partitions = draw_samples(records.size(), config);
  result.stage1 = stage1(records, result.partitions, config);

  result.modes.reserve(result.partitions.size() * config.k);
  for (std::size_t p = 0; p < result.stage1.size(); ++p) {
    for (const Mode& mode : result.stage1[p].modes) {
      Mode global = mode;
      global.id = static_cast<std::uint32_t>(p * config.k + mode.id);
      result.modes.push_back(std::move(global));
    }
  }

  Stage2Result second = stage2(result.modes, config);
  result.metamodes = std::move(second.metamodes);
  result.mode_to_metamode = std::move(second.mode_to_metamode);

  result.record_mode.assign(records.size(), kNoIndex);
  for (std::size_t p = 0; p < result.partitions.size(); ++p) {
    const auto& partition = result.partitions[p];
    const auto& assignment = result.stage1[p].assignment;
    for (std::size_t i = 0; i < partition.size(); ++i) {
      result.record_mode[partition[i]] =
          static_cast<std::uint32_t>(p * config.k + assignment[i]);
    }
  }
  return result;
}

std::vector<std::pair<std::uint32_t, double>> k_sweep(
    const Dataset& records, const std::vector<std::vector<std::uint32_t>>& partitions,
    std::span<const std::uint32_t> k_candidates, const EnsembleConfig& config) {
  if (k_candidates.empty()) raise(Errc::config, "k_sweep with no candidates");
  std::vector<std::pair<std::uint32_t, double>> table;
  table.reserve(k_candidates.size());
  for (std::uint32_t k : k_candidates) {
    EnsembleConfig candidate = config;
    candidate.k = k;
    const auto results = stage1(records, partitions, candidate);
    double sum = 0.0;
    for (std::size_t p = 0; p < partitions.size(); ++p) {
      const Dataset part = records.gather(partitions[p]);
      const auto& res = results[p];
      double part_sum = 0.0;
      for (std::size_t i = 0; i < part.size(); ++i) {
        const double d = frequency_distance(part.row(i), res.modes[res.assignment[i]]);
        part_sum += 1.0 - d / static_cast<double>(part.m());
      }
      sum += part_sum / static_cast<double>(part.size());
    }
    table.emplace_back(k, sum / static_cast<double>(partitions.size()));
  }
  return table;
}

}  // namespace kmm
