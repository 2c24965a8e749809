// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sefdm/types.hpp"

namespace sefdm {

// Dense row-major complex matrix. Small and unsophisticated on purpose; the
// matrices in this project top out at 128x128.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const cplx& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }

  CMatrix adjoint() const;  // conjugate transpose
  CMatrix operator*(const CMatrix& rhs) const;
  CVec apply(std::span<const cplx> x) const;  // matrix * vector

  // max_ij |a_ij - b_ij|
  static double max_abs_diff(const CMatrix& a, const CMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  CVec a_;
};

// Cholesky factor L (lower) of a Hermitian positive definite matrix, G = L L^H.
// Throws NumericError if a pivot collapses.
CMatrix cholesky(const CMatrix& g);

// Solve (L L^H) X = B given the Cholesky factor L.
CMatrix cholesky_solve(const CMatrix& l, const CMatrix& b);

// Right pseudo-inverse A^H (A A^H)^{-1} for a full-row-rank A.
CMatrix right_pinv(const CMatrix& a);

// Singular values, descending, via one-sided Jacobi orthogonalization.
std::vector<double> singular_values(const CMatrix& a);

// Ratio of largest to smallest singular value (inf when rank deficient).
double condition_number(const CMatrix& a);

}  // namespace sefdm
