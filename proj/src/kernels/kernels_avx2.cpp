// AVX2 variants of the record distance kernels. Compiled with -mavx2 -mfma
// only on x86-64; availability is still checked at runtime, so the binary
// stays safe on older CPUs.

#include "kmetamodes/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace kmm {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d sum2 = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(sum2, sum2);
  return _mm_cvtsd_f64(_mm_add_sd(sum2, swapped));
}

double hamming_avx2(const CategoryId* x, const CategoryId* top, std::size_t m) {
  std::size_t j = 0;
  int matches = 0;
  for (; j + 8 <= m; j += 8) {
    const __m256i xv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + j));
    const __m256i tv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(top + j));
    const __m256i eq = _mm256_cmpeq_epi32(xv, tv);
    matches += __builtin_popcount(
        static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(eq))));
  }
  double total = static_cast<double>(j) - static_cast<double>(matches);
  for (; j < m; ++j) total += x[j] != top[j] ? 1.0 : 0.0;
  return total;
}

double frequency_avx2(const CategoryId* x, const CategoryId* top, const double* omf,
                      std::size_t m) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d ones = _mm256_set1_pd(1.0);
  std::size_t j = 0;
  for (; j + 8 <= m; j += 8) {
    const __m256i xv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + j));
    const __m256i tv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(top + j));
    const __m256i eq = _mm256_cmpeq_epi32(xv, tv);
    // Widen the 8 x 32-bit compare masks to 2 x 4 x 64-bit blend masks.
    const __m256i lo = _mm256_cvtepi32_epi64(_mm256_castsi256_si128(eq));
    const __m256i hi = _mm256_cvtepi32_epi64(_mm256_extracti128_si256(eq, 1));
    const __m256d f0 = _mm256_loadu_pd(omf + j);
    const __m256d f1 = _mm256_loadu_pd(omf + j + 4);
    const __m256d v0 = _mm256_blendv_pd(ones, f0, _mm256_castsi256_pd(lo));
    const __m256d v1 = _mm256_blendv_pd(ones, f1, _mm256_castsi256_pd(hi));
    acc = _mm256_add_pd(acc, _mm256_add_pd(v0, v1));
  }
  double total = hsum(acc);
  for (; j < m; ++j) total += x[j] == top[j] ? omf[j] : 1.0;
  return total;
}

double meta_frequency_avx2(const CategoryId* x, const std::uint32_t* offsets, const double* freq,
                           const double* ssq, std::size_t m) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d neg_two = _mm256_set1_pd(-2.0);
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const __m128i xi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(x + j));
    const __m128i oi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(offsets + j));
    const __m128i idx = _mm_add_epi32(xi, oi);
    const __m256d f = _mm256_i32gather_pd(freq, idx, 8);
    const __m256d s = _mm256_loadu_pd(ssq + j);
    // ssq + 1 - 2f, clamped at 0 against rounding.
    const __m256d arg = _mm256_max_pd(_mm256_fmadd_pd(neg_two, f, _mm256_add_pd(s, one)), zero);
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(arg));
  }
  double total = hsum(acc);
  for (; j < m; ++j) {
    const double f = freq[offsets[j] + x[j]];
    const double arg = ssq[j] + 1.0 - 2.0 * f;
    total += std::sqrt(arg > 0.0 ? arg : 0.0);
  }
  return total;
}

const KernelOps kAvx2Ops{hamming_avx2, frequency_avx2, meta_frequency_avx2, "avx2"};

}  // namespace

const KernelOps* avx2_kernels() {
  return __builtin_cpu_supports("avx2") ? &kAvx2Ops : nullptr;
}

}  // namespace kmm

#else

namespace kmm {
const KernelOps* avx2_kernels() { return nullptr; }
}  // namespace kmm

#endif
