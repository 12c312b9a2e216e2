#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "kmetamodes/error.hpp"
#include "kmetamodes/model.hpp"
#include "support/test_util.hpp"

using namespace kmm;

namespace {

Dataset make_dataset(std::initializer_list<std::vector<CategoryId>> rows) {
  Dataset data(rows.begin()->size());
  for (const auto& row : rows) data.append(row);
  return data;
}

double frequency_sum(const std::vector<std::pair<CategoryId, double>>& freqs) {
  double total = 0.0;
  for (const auto& [cat, f] : freqs) total += f;
  return total;
}

}  // namespace

TEST_CASE("mode_from_records: direct tally") {
  const auto mode = mode_from_records(make_dataset({{0}, {0}, {1}}));
  CHECK(mode.n_members == 3);
  REQUIRE(mode.counts[0].size() == 2);
  CHECK(mode.counts[0][0] == std::pair<CategoryId, std::uint64_t>{0, 2});
  CHECK(mode.counts[0][1] == std::pair<CategoryId, std::uint64_t>{1, 1});
}

TEST_CASE("mode_from_records: singleton") {
  const auto mode = mode_from_records(make_dataset({{0, 1}}));
  CHECK(mode.n_members == 1);
  CHECK(mode.counts[0] == CountMap{{0, 1}});
  CHECK(mode.counts[1] == CountMap{{1, 1}});
}

TEST_CASE("mode_from_records: frequency of a 3:1 split is 0.75") {
  const auto mode = mode_from_records(make_dataset({{0}, {0}, {0}, {1}}));
  const auto freqs = frequencies(mode, 0);
  REQUIRE(freqs.size() == 2);
  CHECK(freqs[0].second == doctest::Approx(0.75));
  CHECK(freqs[1].second == doctest::Approx(0.25));
}

TEST_CASE("mode_from_records: empty input raises model-error") {
  Dataset empty(2);
  CHECK_THROWS_WITH_AS(mode_from_records(empty), doctest::Contains("model-error"), Error);
  CHECK_THROWS_AS(merge_modes(std::span<const Mode>{}), Error);
}

TEST_CASE("top_value: majority, tie to smallest id, singleton") {
  Mode mode;
  mode.n_members = 4;
  mode.counts = {{{0, 3}, {1, 1}}};
  CHECK(top_value(mode, 0) == 0);

  mode.counts = {{{2, 2}, {5, 2}}};
  CHECK(top_value(mode, 0) == 2);  // equal counts: smallest id wins

  mode.counts = {{{7, 1}}};
  CHECK(top_value(mode, 0) == 7);
}

TEST_CASE("frequencies: division by member count") {
  Mode mode;
  mode.n_members = 4;
  mode.counts = {{{0, 1}, {1, 1}, {2, 2}}};
  const auto freqs = frequencies(mode, 0);
  CHECK(freqs[0].second == doctest::Approx(0.25));
  CHECK(freqs[1].second == doctest::Approx(0.25));
  CHECK(freqs[2].second == doctest::Approx(0.5));

  Mode pure;
  pure.n_members = 5;
  pure.counts = {{{3, 5}}};
  CHECK(frequencies(pure, 0)[0].second == doctest::Approx(1.0));
}

TEST_CASE("merge_modes: sum-then-divide") {
  Mode a;
  a.n_members = 2;
  a.counts = {{{0, 2}}};
  Mode b;
  b.n_members = 2;
  b.counts = {{{0, 1}, {1, 1}}};
  const std::vector<Mode> modes = {a, b};
  const auto meta = merge_modes(modes);
  CHECK(meta.n_total == 4);
  CHECK(meta.counts[0] == CountMap{{0, 3}, {1, 1}});
  const auto freqs = frequencies(meta, 0);
  CHECK(freqs[0].second == doctest::Approx(0.75));
  CHECK(freqs[1].second == doctest::Approx(0.25));
}

TEST_CASE("merge_modes: identity and purity preservation") {
  Mode a;
  a.n_members = 3;
  a.counts = {{{4, 3}}};
  const std::vector<Mode> single = {a};
  const auto meta1 = merge_modes(single);
  CHECK(meta1.counts == a.counts);
  CHECK(meta1.n_total == 3);

  const std::vector<Mode> twice = {a, a};
  const auto meta2 = merge_modes(twice);
  CHECK(meta2.counts[0] == CountMap{{4, 6}});
  CHECK(frequencies(meta2, 0)[0].second == doctest::Approx(1.0));
}

TEST_CASE("record_as_mode: singleton counts and unit frequencies") {
  const std::vector<CategoryId> record = {3, 1};
  const auto mode = record_as_mode(record);
  CHECK(mode.n_members == 1);
  CHECK(mode.counts[0] == CountMap{{3, 1}});
  CHECK(mode.counts[1] == CountMap{{1, 1}});
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(frequencies(mode, j)[0].second == doctest::Approx(1.0));
  }
}

TEST_CASE("merging singleton modes reproduces mode_from_records") {
  Rng rng(42);
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 1 + rng.bounded(100);
    const std::size_t m = 1 + rng.bounded(6);
    const Dataset data = test::random_dataset(rng, n, m, 8);

    std::vector<Mode> singletons;
    for (std::size_t i = 0; i < n; ++i) singletons.push_back(record_as_mode(data.row(i)));
    const Metamode merged = merge_modes(singletons);
    const Mode tallied = mode_from_records(data);

    CHECK(merged.n_total == tallied.n_members);
    CHECK(merged.counts == tallied.counts);
  }
}

TEST_CASE("frequencies sum to 1 within 1e-9 for random modes and metamodes") {
  Rng rng(43);
  for (int round = 0; round < 20; ++round) {
    const auto mode = test::random_mode(rng, 4, 10, 1 + rng.bounded(50));
    for (std::size_t j = 0; j < mode.m(); ++j) {
      CHECK(frequency_sum(frequencies(mode, j)) == doctest::Approx(1.0).epsilon(1e-9));
    }
    std::vector<Mode> group;
    for (int g = 0; g < 3; ++g) group.push_back(test::random_mode(rng, 4, 10, 1 + rng.bounded(30)));
    const auto meta = merge_modes(group);
    for (std::size_t j = 0; j < meta.m(); ++j) {
      CHECK(frequency_sum(frequencies(meta, j)) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("merge_modes is associative and permutation-invariant") {
  Rng rng(44);
  std::vector<Mode> modes;
  for (int g = 0; g < 5; ++g) modes.push_back(test::random_mode(rng, 3, 6, 1 + rng.bounded(20)));

  const auto all = merge_modes(modes);

  // Permutation.
  std::vector<Mode> shuffled = modes;
  rng.shuffle(shuffled);
  const auto permuted = merge_modes(shuffled);
  CHECK(permuted.counts == all.counts);
  CHECK(permuted.n_total == all.n_total);

  // Associativity: merge the merge of a prefix (lifted back to a mode) with the rest.
  const std::vector<Mode> prefix(modes.begin(), modes.begin() + 2);
  const auto left = merge_modes(prefix);
  Mode left_as_mode;
  left_as_mode.counts = left.counts;
  left_as_mode.n_members = left.n_total;
  std::vector<Mode> rest = {left_as_mode};
  rest.insert(rest.end(), modes.begin() + 2, modes.end());
  const auto nested = merge_modes(rest);
  CHECK(nested.counts == all.counts);
  CHECK(nested.n_total == all.n_total);
}
