#include <doctest.h>

#include <cmath>

#include "kmetamodes/kernels.hpp"
#include "support/test_util.hpp"

using namespace kmm;

namespace {

std::vector<std::uint32_t> domains_for(const Metamode& meta, std::uint32_t alphabet) {
  std::vector<std::uint32_t> sizes(meta.m(), alphabet);
  for (std::size_t j = 0; j < meta.m(); ++j) {
    if (!meta.counts[j].empty()) {
      sizes[j] = std::max(sizes[j], meta.counts[j].back().first + 1);
    }
  }
  return sizes;
}

}  // namespace

TEST_CASE("scalar kernels match the sparse reference distances") {
  Rng rng(101);
  const KernelOps& ops = scalar_kernels();
  for (int round = 0; round < 60; ++round) {
    const std::size_t m = 1 + rng.bounded(64);
    const std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(rng.bounded(9));
    const auto mode = test::random_mode(rng, m, alphabet, 1 + rng.bounded(50));
    const auto projection = project_mode(mode);
    std::vector<CategoryId> record(m);
    for (auto& v : record) v = static_cast<CategoryId>(rng.bounded(alphabet));

    CHECK(ops.hamming(record.data(), projection.top.data(), m) ==
          doctest::Approx(hamming_distance(record, mode)).epsilon(1e-12));
    CHECK(ops.frequency(record.data(), projection.top.data(), projection.one_minus_freq.data(),
                        m) == doctest::Approx(frequency_distance(record, mode)).epsilon(1e-12));

    Metamode meta;
    meta.counts = mode.counts;
    meta.n_total = mode.n_members;
    const auto sizes = domains_for(meta, alphabet);
    const auto table = build_metamode_table(meta, sizes);
    CHECK(ops.meta_frequency(record.data(), table.offsets.data(), table.freq.data(),
                             table.ssq.data(), m) ==
          doctest::Approx(record_to_metamode(record, meta, DistanceKind::meta_frequency))
              .epsilon(1e-9));
  }
}

TEST_CASE("metamode table: dense lookups and squared sums") {
  Metamode meta;
  meta.n_total = 4;
  meta.counts = {{{1, 3}, {3, 1}}, {{0, 4}}};
  const std::vector<std::uint32_t> sizes = {5, 2};
  const auto table = build_metamode_table(meta, sizes);
  REQUIRE(table.offsets == std::vector<std::uint32_t>{0, 5, 7});
  CHECK(table.freq[1] == doctest::Approx(0.75));
  CHECK(table.freq[3] == doctest::Approx(0.25));
  CHECK(table.freq[0] == 0.0);
  CHECK(table.freq[5] == doctest::Approx(1.0));
  CHECK(table.ssq[0] == doctest::Approx(0.625));
  CHECK(table.ssq[1] == doctest::Approx(1.0));
}

TEST_CASE("avx2 kernels agree with scalar on random inputs") {
  const KernelOps* avx2 = avx2_kernels();
  if (avx2 == nullptr) {
    MESSAGE("avx2 unavailable on this build/CPU; skipping equivalence checks");
    return;
  }
  const KernelOps& scalar = scalar_kernels();
  Rng rng(202);
  for (int round = 0; round < 200; ++round) {
    const std::size_t m = 1 + rng.bounded(70);  // exercises all the tail paths
    const std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(rng.bounded(12));
    const auto mode = test::random_mode(rng, m, alphabet, 1 + rng.bounded(60));
    const auto projection = project_mode(mode);
    std::vector<CategoryId> record(m);
    for (auto& v : record) v = static_cast<CategoryId>(rng.bounded(alphabet));

    CHECK(avx2->hamming(record.data(), projection.top.data(), m) ==
          scalar.hamming(record.data(), projection.top.data(), m));
    CHECK(avx2->frequency(record.data(), projection.top.data(),
                          projection.one_minus_freq.data(), m) ==
          doctest::Approx(scalar.frequency(record.data(), projection.top.data(),
                                           projection.one_minus_freq.data(), m))
              .epsilon(1e-12));

    Metamode meta;
    meta.counts = mode.counts;
    meta.n_total = mode.n_members;
    const auto sizes = domains_for(meta, alphabet);
    const auto table = build_metamode_table(meta, sizes);
    CHECK(avx2->meta_frequency(record.data(), table.offsets.data(), table.freq.data(),
                               table.ssq.data(), m) ==
          doctest::Approx(scalar.meta_frequency(record.data(), table.offsets.data(),
                                                table.freq.data(), table.ssq.data(), m))
              .epsilon(1e-12));
  }
}

TEST_CASE("kernel selection: scalar always available, avx2 gated") {
  select_kernels(KernelIsa::scalar);
  CHECK(active_isa() == KernelIsa::scalar);
  CHECK(std::string(active_kernels().name) == "scalar");

  if (avx2_kernels() != nullptr) {
    select_kernels(KernelIsa::avx2);
    CHECK(active_isa() == KernelIsa::avx2);
    CHECK(std::string(active_kernels().name) == "avx2");
  }
  select_kernels_auto();
}
