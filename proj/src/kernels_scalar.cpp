// SPDX-License-Identifier: Apache-2.0
//
// Scalar reference kernels. These are the semantic ground truth the SIMD
// variants are tested against; keep them simple.
#include "sefdm/kernels.hpp"

namespace sefdm::kernels {
namespace {

void cgemv_scalar(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    const cplx* row = a + r * cols;
    cplx acc{0.0, 0.0};
    for (std::size_t c = 0; c < cols; ++c) {
      acc += row[c] * x[c];
    }
    y[r] = acc;
  }
}

void caxpy_scalar(cplx s, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += s * x[i];
  }
}

double sum_abs2_scalar(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return acc;
}

double sum_err2_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = x[i].real() - y[i].real();
    const double di = x[i].imag() - y[i].imag();
    acc += dr * dr + di * di;
  }
  return acc;
}

}  // namespace

namespace detail {
const KernelTable scalar_table{cgemv_scalar, caxpy_scalar, sum_abs2_scalar, sum_err2_scalar};
}  // namespace detail

}  // namespace sefdm::kernels
