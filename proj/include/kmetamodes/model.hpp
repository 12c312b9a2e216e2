#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kmetamodes/types.hpp"

namespace kmm {

// Row-major matrix of category ids; one row per record, m columns.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t m) : m_(m) {}

  std::size_t m() const { return m_; }
  std::size_t size() const { return m_ == 0 ? 0 : cells_.size() / m_; }
  bool empty() const { return cells_.empty(); }

  std::span<const CategoryId> row(std::size_t i) const {
    return {cells_.data() + i * m_, m_};
  }
  const CategoryId* row_ptr(std::size_t i) const { return cells_.data() + i * m_; }

  void append(std::span<const CategoryId> row);
  void reserve(std::size_t rows) { cells_.reserve(rows * m_); }
  Dataset gather(std::span<const std::uint32_t> indices) const;

 private:
  std::size_t m_ = 0;
  std::vector<CategoryId> cells_;
};

// Sparse per-attribute tally, sorted by category id; absent id means count 0.
using CountMap = std::vector<std::pair<CategoryId, std::uint64_t>>;

// Fuzzy cluster representative: per attribute the occurrence count of every
// value seen in the cluster, plus the member count the frequencies divide by.
struct Mode {
  std::vector<CountMap> counts;  // size m
  std::uint64_t n_members = 0;
  std::uint32_t id = 0;

  std::size_t m() const { return counts.size(); }
  bool operator==(const Mode&) const = default;
};

// Stage-2 representative: counts aggregated over all records of all member
// modes, so frequencies stay record-weighted.
struct Metamode {
  std::vector<CountMap> counts;  // size m
  std::uint64_t n_total = 0;
  std::uint32_t id = 0;

  std::size_t m() const { return counts.size(); }
  bool operator==(const Metamode&) const = default;
};

// Partition: record index -> cluster id, every entry in [0, k).
using Assignment = std::vector<std::uint32_t>;

Mode mode_from_records(const Dataset& records);
Mode mode_from_records(const Dataset& records, std::span<const std::uint32_t> members);
Mode record_as_mode(std::span<const CategoryId> record);

// Most frequent value at one attribute; ties break to the smallest id.
CategoryId top_value(const Mode& mode, std::size_t attribute);
CategoryId top_value(const Metamode& metamode, std::size_t attribute);
std::vector<CategoryId> top_values(const Mode& mode);  // classical-mode projection

std::vector<std::pair<CategoryId, double>> frequencies(const Mode& mode, std::size_t attribute);
std::vector<std::pair<CategoryId, double>> frequencies(const Metamode& metamode,
                                                       std::size_t attribute);

Metamode merge_modes(std::span<const Mode> modes);
Metamode merge_modes(const std::vector<Mode>& modes, std::span<const std::uint32_t> members);

// Lifts one mode to a metamode (counts copied, n_total = n_members).
Metamode metamode_from_mode(const Mode& mode);

}  // namespace kmm
