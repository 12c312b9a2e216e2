#include <doctest.h>

#include <cmath>

#include "kmetamodes/distance.hpp"
#include "kmetamodes/error.hpp"
#include "support/test_util.hpp"

using namespace kmm;

namespace {

Mode make_mode(std::vector<CountMap> counts, std::uint64_t n) {
  Mode mode;
  mode.counts = std::move(counts);
  mode.n_members = n;
  return mode;
}

Metamode make_metamode(std::vector<CountMap> counts, std::uint64_t n) {
  Metamode meta;
  meta.counts = std::move(counts);
  meta.n_total = n;
  return meta;
}

Metamode as_metamode(const Mode& mode) {
  return make_metamode(mode.counts, mode.n_members);
}

Mode as_mode(const Metamode& meta) {
  return make_mode(meta.counts, meta.n_total);
}

}  // namespace

TEST_CASE("hamming: identical, all-different, one-different") {
  const auto mode = make_mode({{{0, 2}}, {{1, 2}}}, 2);
  const std::vector<CategoryId> same = {0, 1};
  CHECK(hamming_distance(same, mode) == 0.0);

  const std::vector<CategoryId> other = {5, 6};
  CHECK(hamming_distance(other, mode) == 2.0);

  const auto mode3 = make_mode({{{0, 1}}, {{3, 1}}, {{2, 1}}}, 1);
  const std::vector<CategoryId> record = {0, 1, 2};
  CHECK(hamming_distance(record, mode3) == 1.0);
}

TEST_CASE("frequency distance: match pays 1 - top frequency, mismatch pays 1") {
  const auto mode = make_mode({{{0, 3}, {1, 1}}}, 4);  // top 0 at f=0.75
  const std::vector<CategoryId> match = {0};
  CHECK(frequency_distance(match, mode) == doctest::Approx(0.25));

  const std::vector<CategoryId> miss = {1};
  CHECK(frequency_distance(miss, mode) == doctest::Approx(1.0));

  const auto pure = make_mode({{{0, 5}}}, 5);
  CHECK(frequency_distance(match, pure) == doctest::Approx(0.0));
}

TEST_CASE("meta-frequency distance: hand values") {
  // Identical pure distributions.
  const auto q1 = make_mode({{{0, 4}}}, 4);
  CHECK(meta_frequency_distance(q1, as_metamode(make_mode({{{0, 2}}}, 2))) ==
        doctest::Approx(0.0));

  // {0.5, 0.5} vs {1.0}: sqrt(0.5^2 + 0.5^2) = sqrt(0.5).
  const auto q2 = make_mode({{{0, 1}, {1, 1}}}, 2);
  const auto z2 = make_metamode({{{0, 3}}}, 3);
  CHECK(meta_frequency_distance(q2, z2) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  // Disjoint supports: sqrt(1 + 1) = sqrt(2), the per-attribute maximum.
  const auto q3 = make_mode({{{0, 2}}}, 2);
  const auto z3 = make_metamode({{{1, 5}}}, 5);
  CHECK(meta_frequency_distance(q3, z3) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("record_to_metamode: both kinds, hamming rejected") {
  const auto z = make_metamode({{{0, 3}, {1, 1}}}, 4);  // freqs {0:0.75, 1:0.25}
  const std::vector<CategoryId> a = {0};
  const std::vector<CategoryId> b = {1};

  CHECK(record_to_metamode(a, z, DistanceKind::frequency) == doctest::Approx(0.25));

  const auto pure = make_metamode({{{0, 7}}}, 7);
  CHECK(record_to_metamode(a, pure, DistanceKind::meta_frequency) == doctest::Approx(0.0));

  // Record {1} vs {0.75, 0.25}: sqrt((1-0.25)^2 + 0.75^2).
  const double expected = std::sqrt(0.75 * 0.75 + 0.75 * 0.75);
  CHECK(record_to_metamode(b, z, DistanceKind::meta_frequency) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(record_to_metamode(b, z, DistanceKind::meta_frequency) ==
        doctest::Approx(1.06066).epsilon(1e-4));

  CHECK_THROWS_WITH_AS(record_to_metamode(a, z, DistanceKind::hamming),
                       doctest::Contains("config-error"), Error);
}

TEST_CASE("distances: length mismatch raises distance-error") {
  const auto mode = make_mode({{{0, 1}}, {{1, 1}}}, 1);
  const std::vector<CategoryId> record = {0};
  CHECK_THROWS_WITH_AS(hamming_distance(record, mode), doctest::Contains("distance-error"),
                       Error);
  CHECK_THROWS_AS(frequency_distance(record, mode), Error);
  CHECK_THROWS_AS(meta_frequency_distance(mode, make_metamode({{{0, 1}}}, 1)), Error);
}

TEST_CASE("distance bounds on randomized inputs") {
  Rng rng(77);
  for (int round = 0; round < 50; ++round) {
    const std::size_t m = 1 + rng.bounded(8);
    const auto mode = test::random_mode(rng, m, 6, 1 + rng.bounded(40));
    const auto meta = as_metamode(test::random_mode(rng, m, 6, 1 + rng.bounded(40)));
    std::vector<CategoryId> record(m);
    for (auto& v : record) v = static_cast<CategoryId>(rng.bounded(8));

    const double h = hamming_distance(record, mode);
    CHECK(h >= 0.0);
    CHECK(h <= static_cast<double>(m));

    const double f = frequency_distance(record, mode);
    CHECK(f >= 0.0);
    CHECK(f <= static_cast<double>(m));

    const double mf = meta_frequency_distance(mode, meta);
    CHECK(mf >= 0.0);
    CHECK(mf <= static_cast<double>(m) * std::sqrt(2.0) + 1e-12);
  }
}

TEST_CASE("meta-frequency is zero iff the frequency maps agree") {
  Rng rng(78);
  for (int round = 0; round < 30; ++round) {
    const std::size_t m = 1 + rng.bounded(5);
    const auto mode = test::random_mode(rng, m, 5, 1 + rng.bounded(30));

    // Same distribution at a different scale: distance 0.
    Mode doubled;
    doubled.n_members = mode.n_members * 2;
    doubled.counts = mode.counts;
    for (auto& cm : doubled.counts) {
      for (auto& [cat, count] : cm) count *= 2;
    }
    CHECK(meta_frequency_distance(mode, as_metamode(doubled)) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // Perturb one attribute's distribution: distance strictly positive.
    Mode perturbed = mode;
    perturbed.n_members += 1;
    perturbed.counts[0].back().second += 1;
    CHECK(meta_frequency_distance(mode, as_metamode(perturbed)) > 0.0);
  }
}

TEST_CASE("meta-frequency is symmetric in its two distributions") {
  Rng rng(79);
  for (int round = 0; round < 30; ++round) {
    const std::size_t m = 1 + rng.bounded(5);
    const auto a = test::random_mode(rng, m, 6, 1 + rng.bounded(30));
    const auto b = test::random_mode(rng, m, 6, 1 + rng.bounded(30));
    const double ab = meta_frequency_distance(a, as_metamode(b));
    const double ba = meta_frequency_distance(as_mode(as_metamode(b)), as_metamode(a));
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
  }
}

TEST_CASE("frequency distance reduces to hamming on pure modes") {
  Rng rng(80);
  for (int round = 0; round < 30; ++round) {
    const std::size_t m = 1 + rng.bounded(8);
    const std::uint64_t members = 1 + rng.bounded(20);
    Mode pure;
    pure.n_members = members;
    pure.counts.resize(m);
    for (auto& cm : pure.counts) {
      cm = {{static_cast<CategoryId>(rng.bounded(6)), members}};
    }
    std::vector<CategoryId> record(m);
    for (auto& v : record) v = static_cast<CategoryId>(rng.bounded(8));
    CHECK(frequency_distance(record, pure) == hamming_distance(record, pure));
  }
}

TEST_CASE("record equal to a pure metamode's support scores zero") {
  const auto z = make_metamode({{{2, 5}}, {{4, 5}}}, 5);
  const std::vector<CategoryId> record = {2, 4};
  CHECK(record_to_metamode(record, z, DistanceKind::meta_frequency) == doctest::Approx(0.0));
  CHECK(record_to_metamode(record, z, DistanceKind::frequency) == doctest::Approx(0.0));
}
