#include "kmetamodes/model.hpp"

#include <algorithm>
#include <cassert>

#include "kmetamodes/error.hpp"

namespace kmm {

void Dataset::append(std::span<const CategoryId> row) {
  if (m_ == 0) m_ = row.size();
  assert(row.size() == m_);
  cells_.insert(cells_.end(), row.begin(), row.end());
}

Dataset Dataset::gather(std::span<const std::uint32_t> indices) const {
  Dataset out(m_);
  out.reserve(indices.size());
  for (std::uint32_t i : indices) out.append(row(i));
  return out;
}

namespace {

// Sorts and run-length-encodes one attribute column.
CountMap tally_column(std::vector<CategoryId>& scratch) {
  std::sort(scratch.begin(), scratch.end());
  CountMap out;
  for (std::size_t i = 0; i < scratch.size();) {
    std::size_t j = i;
    while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
    out.emplace_back(scratch[i], static_cast<std::uint64_t>(j - i));
    i = j;
  }
  return out;
}

CategoryId top_of(const CountMap& counts) {
  std::uint64_t best = 0;
  CategoryId value = 0;
  for (const auto& [cat, count] : counts) {  // ascending ids: '>' keeps the smallest on ties
    if (count > best) {
      best = count;
      value = cat;
    }
  }
  return value;
}

std::vector<std::pair<CategoryId, double>> normalize(const CountMap& counts, std::uint64_t n) {
  std::vector<std::pair<CategoryId, double>> out;
  out.reserve(counts.size());
  for (const auto& [cat, count] : counts) {
    out.emplace_back(cat, static_cast<double>(count) / static_cast<double>(n));
  }
  return out;
}

}  // namespace

Mode mode_from_records(const Dataset& records) {
  if (records.empty()) raise(Errc::model, "mode_from_records on empty record list");
  Mode mode;
  mode.n_members = records.size();
  mode.counts.resize(records.m());
  std::vector<CategoryId> scratch(records.size());
  for (std::size_t j = 0; j < records.m(); ++j) {
    for (std::size_t i = 0; i < records.size(); ++i) scratch[i] = records.row_ptr(i)[j];
    mode.counts[j] = tally_column(scratch);
  }
  return mode;
}

Mode mode_from_records(const Dataset& records, std::span<const std::uint32_t> members) {
  if (members.empty()) raise(Errc::model, "mode_from_records on empty member list");
  Mode mode;
  mode.n_members = members.size();
  mode.counts.resize(records.m());
  std::vector<CategoryId> scratch(members.size());
  for (std::size_t j = 0; j < records.m(); ++j) {
    for (std::size_t i = 0; i < members.size(); ++i) scratch[i] = records.row_ptr(members[i])[j];
    mode.counts[j] = tally_column(scratch);
  }
  return mode;
}

Mode record_as_mode(std::span<const CategoryId> record) {
  Mode mode;
  mode.n_members = 1;
  mode.counts.reserve(record.size());
  for (CategoryId value : record) mode.counts.push_back({{value, 1}});
  return mode;
}

CategoryId top_value(const Mode& mode, std::size_t attribute) {
  return top_of(mode.counts[attribute]);
}

CategoryId top_value(const Metamode& metamode, std::size_t attribute) {
  return top_of(metamode.counts[attribute]);
}

std::vector<CategoryId> top_values(const Mode& mode) {
  std::vector<CategoryId> out(mode.m());
  for (std::size_t j = 0; j < mode.m(); ++j) out[j] = top_of(mode.counts[j]);
  return out;
}

std::vector<std::pair<CategoryId, double>> frequencies(const Mode& mode, std::size_t attribute) {
  return normalize(mode.counts[attribute], mode.n_members);
}

std::vector<std::pair<CategoryId, double>> frequencies(const Metamode& metamode,
                                                       std::size_t attribute) {
  return normalize(metamode.counts[attribute], metamode.n_total);
}

namespace {

Metamode merge_impl(const Mode* const* modes, std::size_t count) {
  Metamode meta;
  const std::size_t m = modes[0]->m();
  meta.counts.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    // Concatenate the member maps, then combine equal ids.
    CountMap merged;
    for (std::size_t i = 0; i < count; ++i) {
      if (modes[i]->m() != m) raise(Errc::model, "merge_modes: attribute count mismatch");
      const CountMap& part = modes[i]->counts[j];
      merged.insert(merged.end(), part.begin(), part.end());
    }
    std::sort(merged.begin(), merged.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    CountMap combined;
    for (std::size_t i = 0; i < merged.size();) {
      std::size_t k = i;
      std::uint64_t total = 0;
      while (k < merged.size() && merged[k].first == merged[i].first) total += merged[k++].second;
      combined.emplace_back(merged[i].first, total);
      i = k;
    }
    meta.counts[j] = std::move(combined);
  }
  for (std::size_t i = 0; i < count; ++i) meta.n_total += modes[i]->n_members;
  return meta;
}

}  // namespace

Metamode merge_modes(std::span<const Mode> modes) {
  if (modes.empty()) raise(Errc::model, "merge_modes on empty mode list");
  std::vector<const Mode*> ptrs(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) ptrs[i] = &modes[i];
  return merge_impl(ptrs.data(), ptrs.size());
}

Metamode merge_modes(const std::vector<Mode>& modes, std::span<const std::uint32_t> members) {
  if (members.empty()) raise(Errc::model, "merge_modes on empty member list");
  std::vector<const Mode*> ptrs(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) ptrs[i] = &modes[members[i]];
  return merge_impl(ptrs.data(), ptrs.size());
}

Metamode metamode_from_mode(const Mode& mode) {
  Metamode meta;
  meta.counts = mode.counts;
  meta.n_total = mode.n_members;
  meta.id = mode.id;
  return meta;
}

}  // namespace kmm
