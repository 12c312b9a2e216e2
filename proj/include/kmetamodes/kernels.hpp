#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kmetamodes/distance.hpp"
#include "kmetamodes/model.hpp"

namespace kmm {

// Dense per-representative arrays consumed by the batched record kernels.
// Assignment and scoring evaluate millions of record-to-representative
// distances; the sparse count maps are flattened once per step so the inner
// loop is straight-line arithmetic over contiguous arrays.

// Top value and its "match gain" (1 - relative frequency) per attribute.
// Covers both the hamming and the frequency record distances.
struct ModeProjection {
  std::vector<CategoryId> top;
  std::vector<double> one_minus_freq;
};

// Dense frequency table of a metamode, one slab per attribute, plus the
// per-attribute sum of squared frequencies. The record-to-metamode
// meta-frequency distance reduces to
//   sum_j sqrt(ssq[j] + 1 - 2 * freq[offset[j] + x[j]])
// because the record side is a singleton distribution.
struct MetamodeTable {
  std::vector<std::uint32_t> offsets;  // m + 1
  std::vector<double> freq;            // offsets[m] doubles, zero-filled
  std::vector<double> ssq;             // m
};

ModeProjection project_mode(const Mode& mode);
ModeProjection project_metamode(const Metamode& metamode);
MetamodeTable build_metamode_table(const Metamode& metamode,
                                   std::span<const std::uint32_t> domain_sizes);

// Record ids must stay below the domain size used to build the table.
struct KernelOps {
  double (*hamming)(const CategoryId* x, const CategoryId* top, std::size_t m);
  double (*frequency)(const CategoryId* x, const CategoryId* top, const double* one_minus_freq,
                      std::size_t m);
  double (*meta_frequency)(const CategoryId* x, const std::uint32_t* offsets, const double* freq,
                           const double* ssq, std::size_t m);
  const char* name;
};

enum class KernelIsa { scalar, avx2 };

const KernelOps& scalar_kernels();
const KernelOps* avx2_kernels();  // nullptr when the build or the CPU lacks AVX2

// Process-wide selection: auto-detected on first use, overridable (CLI
// --kernel, tests). Selection is not thread-safe against concurrent kernel
// use; set it up front.
const KernelOps& active_kernels();
void select_kernels(KernelIsa isa);
void select_kernels_auto();
KernelIsa active_isa();

// Convenience wrappers over the active kernels.
inline double kernel_hamming(std::span<const CategoryId> x, const ModeProjection& p) {
  return active_kernels().hamming(x.data(), p.top.data(), x.size());
}
inline double kernel_frequency(std::span<const CategoryId> x, const ModeProjection& p) {
  return active_kernels().frequency(x.data(), p.top.data(), p.one_minus_freq.data(), x.size());
}
inline double kernel_meta_frequency(std::span<const CategoryId> x, const MetamodeTable& t) {
  return active_kernels().meta_frequency(x.data(), t.offsets.data(), t.freq.data(), t.ssq.data(),
                                         x.size());
}

}  // namespace kmm
