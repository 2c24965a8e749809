// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA kernel variants. std::complex<double> is laid out as [re, im], so
// one __m256d holds two complex values. Complex products use the
// fmaddsub split: even lanes accumulate re*re - im*im, odd lanes re*im + im*re.
#include "sefdm/kernels.hpp"

#if defined(SEFDM_HAVE_AVX2)

#include <immintrin.h>

namespace sefdm::kernels {
namespace {

// prod of packed complex pairs: a * x
inline __m256d cmul_pd(__m256d a, __m256d x) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d x_sw = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(a_re, x, _mm256_mul_pd(a_im, x_sw));
}

inline cplx reduce_complex(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

inline double reduce_all(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void cgemv_avx2(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  const std::size_t pairs = cols / 2;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = reinterpret_cast<const double*>(a + r * cols);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t p = 0; p < pairs; ++p) {
      const __m256d av = _mm256_loadu_pd(row + 4 * p);
      const __m256d xv = _mm256_loadu_pd(xd + 4 * p);
      acc = _mm256_add_pd(acc, cmul_pd(av, xv));
    }
    cplx sum = reduce_complex(acc);
    if (cols & 1) {
      sum += a[r * cols + cols - 1] * x[cols - 1];
    }
    y[r] = sum;
  }
}

void caxpy_avx2(cplx s, const cplx* x, cplx* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d s_re = _mm256_set1_pd(s.real());
  const __m256d s_im = _mm256_set1_pd(s.imag());
  const std::size_t pairs = n / 2;
  for (std::size_t p = 0; p < pairs; ++p) {
    const __m256d xv = _mm256_loadu_pd(xd + 4 * p);
    const __m256d x_sw = _mm256_permute_pd(xv, 0x5);
    const __m256d prod = _mm256_fmaddsub_pd(s_re, xv, _mm256_mul_pd(s_im, x_sw));
    _mm256_storeu_pd(yd + 4 * p, _mm256_add_pd(_mm256_loadu_pd(yd + 4 * p), prod));
  }
  if (n & 1) {
    y[n - 1] += s * x[n - 1];
  }
}

double sum_abs2_avx2(const cplx* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t pairs = n / 2;
  for (std::size_t p = 0; p < pairs; ++p) {
    const __m256d v = _mm256_loadu_pd(xd + 4 * p);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double sum = reduce_all(acc);
  if (n & 1) {
    const cplx t = x[n - 1];
    sum += t.real() * t.real() + t.imag() * t.imag();
  }
  return sum;
}

double sum_err2_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t pairs = n / 2;
  for (std::size_t p = 0; p < pairs; ++p) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(xd + 4 * p), _mm256_loadu_pd(yd + 4 * p));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double sum = reduce_all(acc);
  if (n & 1) {
    const double dr = x[n - 1].real() - y[n - 1].real();
    const double di = x[n - 1].imag() - y[n - 1].imag();
    sum += dr * dr + di * di;
  }
  return sum;
}

}  // namespace

namespace detail {
const KernelTable avx2_table{cgemv_avx2, caxpy_avx2, sum_abs2_avx2, sum_err2_avx2};
}  // namespace detail

}  // namespace sefdm::kernels

#endif  // SEFDM_HAVE_AVX2
