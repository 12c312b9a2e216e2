#include "kmetamodes/scoring.hpp"

#include <algorithm>
#include <thread>

#include "kmetamodes/error.hpp"
#include "kmetamodes/kernels.hpp"

namespace kmm {

std::string_view to_string(ScoreVariant v) {
  return v == ScoreVariant::record_to_metamodes ? "record-to-metamodes" : "mode-to-metamodes";
}

std::optional<ScoreVariant> variant_from_string(std::string_view name) {
  if (name == "record" || name == "record-to-metamodes" || name == "record_to_metamodes") {
    return ScoreVariant::record_to_metamodes;
  }
  if (name == "mode" || name == "mode-to-metamodes" || name == "mode_to_metamodes") {
    return ScoreVariant::mode_to_metamodes;
  }
  return std::nullopt;
}

std::string_view to_string(ScoreAgg a) { return a == ScoreAgg::sum ? "sum" : "min"; }

std::optional<ScoreAgg> agg_from_string(std::string_view name) {
  if (name == "sum") return ScoreAgg::sum;
  if (name == "min") return ScoreAgg::min;
  return std::nullopt;
}

std::vector<std::uint32_t> domain_sizes_from(const Dataset& records, const Model& model) {
  std::vector<std::uint32_t> sizes(records.m(), 1);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const CategoryId* row = records.row_ptr(i);
    for (std::size_t j = 0; j < records.m(); ++j) {
      sizes[j] = std::max(sizes[j], row[j] + 1);
    }
  }
  for (const Metamode& meta : model.metamodes) {
    for (std::size_t j = 0; j < meta.m(); ++j) {
      if (!meta.counts[j].empty()) {
        sizes[j] = std::max(sizes[j], meta.counts[j].back().first + 1);
      }
    }
  }
  return sizes;
}

namespace {

void run_chunked(std::size_t n, std::uint32_t workers, const auto& body) {
  if (workers <= 1 || n < 1024) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t lanes = std::min<std::size_t>(workers, (n + 1023) / 1024);
  const std::size_t chunk = (n + lanes - 1) / lanes;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < lanes; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

ScoredDataset score_records(const Dataset& records, const Model& model,
                            std::span<const std::uint32_t> domain_sizes,
                            const ScoreParams& params) {
  if (model.metamodes.empty()) raise(Errc::scoring, "model has no metamodes");
  const DistanceKind kind = model.params.stage2_distance;
  if (kind == DistanceKind::hamming) {
    raise(Errc::config, "hamming distance is not defined against metamodes");
  }
  for (const Metamode& meta : model.metamodes) {
    if (meta.m() != records.m()) {
      raise(Errc::scoring, "record width does not match the model's attribute count");
    }
  }

  ScoredDataset scored;
  scored.variant = params.variant;
  scored.scores.resize(records.size());

  if (params.variant == ScoreVariant::record_to_metamodes) {
    if (kind == DistanceKind::frequency) {
      std::vector<ModeProjection> projections;
      projections.reserve(model.metamodes.size());
      for (const Metamode& meta : model.metamodes) {
        projections.push_back(project_metamode(meta));
      }
      run_chunked(records.size(), params.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const auto row = records.row(i);
          double agg = params.agg == ScoreAgg::sum ? 0.0 : kernel_frequency(row, projections[0]);
          for (std::size_t t = 0; t < projections.size(); ++t) {
            const double d = kernel_frequency(row, projections[t]);
            agg = params.agg == ScoreAgg::sum ? agg + d : std::min(agg, d);
          }
          scored.scores[i] = agg;
        }
      });
    } else {
      std::vector<MetamodeTable> tables;
      tables.reserve(model.metamodes.size());
      for (const Metamode& meta : model.metamodes) {
        tables.push_back(build_metamode_table(meta, domain_sizes));
      }
      run_chunked(records.size(), params.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const auto row = records.row(i);
          double agg = params.agg == ScoreAgg::sum ? 0.0 : kernel_meta_frequency(row, tables[0]);
          for (std::size_t t = 0; t < tables.size(); ++t) {
            const double d = kernel_meta_frequency(row, tables[t]);
            agg = params.agg == ScoreAgg::sum ? agg + d : std::min(agg, d);
          }
          scored.scores[i] = agg;
        }
      });
    }
    return scored;
  }

  // mode_to_metamodes: one shared score per stage-1 cluster.
  if (model.record_mode.size() != records.size()) {
    raise(Errc::scoring,
          "mode-to-metamodes scoring needs a cover-all fit of this exact dataset (model carries " +
              std::to_string(model.record_mode.size()) + " record assignments, dataset has " +
              std::to_string(records.size()) + ")");
  }
  std::vector<double> mode_scores(model.modes.size());
  for (std::size_t g = 0; g < model.modes.size(); ++g) {
    const Mode& mode = model.modes[g];
    const auto top = top_values(mode);
    double agg = 0.0;
    bool first = true;
    for (const Metamode& meta : model.metamodes) {
      const double d = kind == DistanceKind::frequency
                           ? frequency_distance(top, meta)
                           : meta_frequency_distance(mode, meta);
      if (params.agg == ScoreAgg::sum) {
        agg += d;
      } else {
        agg = first ? d : std::min(agg, d);
      }
      first = false;
    }
    mode_scores[g] = agg;
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::uint32_t g = model.record_mode[i];
    if (g == kNoIndex || g >= mode_scores.size()) {
      raise(Errc::scoring, "record " + std::to_string(i) + " has no stage-1 cluster");
    }
    scored.scores[i] = mode_scores[g];
  }
  return scored;
}

}  // namespace kmm
