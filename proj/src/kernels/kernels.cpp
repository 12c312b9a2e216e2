#include "kmetamodes/kernels.hpp"

#include <cmath>

#include "kmetamodes/error.hpp"

namespace kmm {

ModeProjection project_mode(const Mode& mode) {
  ModeProjection p;
  p.top.resize(mode.m());
  p.one_minus_freq.resize(mode.m());
  for (std::size_t j = 0; j < mode.m(); ++j) {
    CategoryId best_cat = 0;
    std::uint64_t best = 0;
    for (const auto& [cat, count] : mode.counts[j]) {
      if (count > best) {
        best = count;
        best_cat = cat;
      }
    }
    p.top[j] = best_cat;
    p.one_minus_freq[j] =
        1.0 - static_cast<double>(best) / static_cast<double>(mode.n_members);
  }
  return p;
}

ModeProjection project_metamode(const Metamode& metamode) {
  ModeProjection p;
  p.top.resize(metamode.m());
  p.one_minus_freq.resize(metamode.m());
  for (std::size_t j = 0; j < metamode.m(); ++j) {
    CategoryId best_cat = 0;
    std::uint64_t best = 0;
    for (const auto& [cat, count] : metamode.counts[j]) {
      if (count > best) {
        best = count;
        best_cat = cat;
      }
    }
    p.top[j] = best_cat;
    p.one_minus_freq[j] =
        1.0 - static_cast<double>(best) / static_cast<double>(metamode.n_total);
  }
  return p;
}

MetamodeTable build_metamode_table(const Metamode& metamode,
                                   std::span<const std::uint32_t> domain_sizes) {
  if (domain_sizes.size() != metamode.m()) {
    raise(Errc::distance, "domain size list does not match attribute count");
  }
  MetamodeTable t;
  t.offsets.resize(metamode.m() + 1);
  t.offsets[0] = 0;
  for (std::size_t j = 0; j < metamode.m(); ++j) {
    t.offsets[j + 1] = t.offsets[j] + domain_sizes[j];
  }
  t.freq.assign(t.offsets.back(), 0.0);
  t.ssq.assign(metamode.m(), 0.0);
  const double n = static_cast<double>(metamode.n_total);
  for (std::size_t j = 0; j < metamode.m(); ++j) {
    for (const auto& [cat, count] : metamode.counts[j]) {
      if (cat >= domain_sizes[j]) {
        raise(Errc::distance, "metamode category id outside the attribute domain");
      }
      const double f = static_cast<double>(count) / n;
      t.freq[t.offsets[j] + cat] = f;
      t.ssq[j] += f * f;
    }
  }
  return t;
}

namespace {

double hamming_scalar(const CategoryId* x, const CategoryId* top, std::size_t m) {
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) total += x[j] != top[j] ? 1.0 : 0.0;
  return total;
}

double frequency_scalar(const CategoryId* x, const CategoryId* top, const double* omf,
                        std::size_t m) {
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) total += x[j] == top[j] ? omf[j] : 1.0;
  return total;
}

double meta_frequency_scalar(const CategoryId* x, const std::uint32_t* offsets,
                             const double* freq, const double* ssq, std::size_t m) {
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double f = freq[offsets[j] + x[j]];
    const double arg = ssq[j] + 1.0 - 2.0 * f;  // may dip below 0 by rounding
    total += std::sqrt(arg > 0.0 ? arg : 0.0);
  }
  return total;
}

const KernelOps kScalarOps{hamming_scalar, frequency_scalar, meta_frequency_scalar, "scalar"};

const KernelOps* g_active = nullptr;

}  // namespace

const KernelOps& scalar_kernels() { return kScalarOps; }

#if !KMM_HAVE_AVX2_BUILD
const KernelOps* avx2_kernels() { return nullptr; }
#endif

void select_kernels(KernelIsa isa) {
  switch (isa) {
    case KernelIsa::scalar:
      g_active = &kScalarOps;
      return;
    case KernelIsa::avx2:
      if (const KernelOps* ops = avx2_kernels()) {
        g_active = ops;
        return;
      }
      raise(Errc::config, "avx2 kernels unavailable on this build/CPU");
  }
}

void select_kernels_auto() {
  const KernelOps* ops = avx2_kernels();
  g_active = ops != nullptr ? ops : &kScalarOps;
}

const KernelOps& active_kernels() {
  if (g_active == nullptr) select_kernels_auto();
  return *g_active;
}

KernelIsa active_isa() {
  return &active_kernels() == &kScalarOps ? KernelIsa::scalar : KernelIsa::avx2;
}

}  // namespace kmm
