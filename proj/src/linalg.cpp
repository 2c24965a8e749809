// SPDX-License-Identifier: Apache-2.0
#include "sefdm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sefdm/errors.hpp"
#include "sefdm/kernels.hpp"

namespace sefdm {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = {1.0, 0.0};
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m.at(c, r) = std::conj(at(r, c));
  return m;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw ShapeError("matrix product: inner dimensions differ");
  CMatrix out(rows_, rhs.cols_);
  CVec col(rhs.rows_), res(rows_);
  for (std::size_t j = 0; j < rhs.cols_; ++j) {
    for (std::size_t k = 0; k < rhs.rows_; ++k) col[k] = rhs.at(k, j);
    kernels::cgemv(data(), rows_, cols_, col.data(), res.data());
    for (std::size_t r = 0; r < rows_; ++r) out.at(r, j) = res[r];
  }
  return out;
}

CVec CMatrix::apply(std::span<const cplx> x) const {
  if (x.size() != cols_) throw ShapeError("matrix apply: vector length mismatch");
  CVec y(rows_);
  kernels::cgemv(data(), rows_, cols_, x.data(), y.data());
  return y;
}

double CMatrix::max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("max_abs_diff: dimensions differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.a_.size(); ++i) m = std::max(m, std::abs(a.a_[i] - b.a_[i]));
  return m;
}

CMatrix cholesky(const CMatrix& g) {
  if (g.rows() != g.cols()) throw ShapeError("cholesky: matrix not square");
  const std::size_t n = g.rows();
  CMatrix l(n, n);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(g.at(i, i)));
  const double floor = max_diag * n * std::numeric_limits<double>::epsilon();
  for (std::size_t j = 0; j < n; ++j) {
    double d = g.at(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l.at(j, k));
    if (!(d > floor)) throw NumericError("cholesky: matrix not positive definite");
    const double ljj = std::sqrt(d);
    l.at(j, j) = {ljj, 0.0};
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = g.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * std::conj(l.at(j, k));
      l.at(i, j) = s / ljj;
    }
  }
  return l;
}

CMatrix cholesky_solve(const CMatrix& l, const CMatrix& b) {
  const std::size_t n = l.rows();
  if (b.rows() != n) throw ShapeError("cholesky_solve: rhs rows mismatch");
  CMatrix x = b;
  // forward: L y = b
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = x.at(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= l.at(i, k) * x.at(k, j);
      x.at(i, j) = s / l.at(i, i).real();
    }
    // backward: L^H x = y
    for (std::size_t ii = n; ii-- > 0;) {
      cplx s = x.at(ii, j);
      for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l.at(k, ii)) * x.at(k, j);
      x.at(ii, j) = s / l.at(ii, ii).real();
    }
  }
  return x;
}

CMatrix right_pinv(const CMatrix& a) {
  const CMatrix g = a * a.adjoint();
  const CMatrix l = cholesky(g);
  const CMatrix ginv = cholesky_solve(l, CMatrix::identity(g.rows()));
  return a.adjoint() * ginv;
}

std::vector<double> singular_values(const CMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  // column-major working copy; rotations act on columns only
  std::vector<CVec> col(n, CVec(m));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) col[j][i] = a.at(i, j);

  const double tol = 1e-14;
  const int max_sweeps = 40;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double gii = 0.0, gjj = 0.0;
        cplx gij{0.0, 0.0};
        for (std::size_t k = 0; k < m; ++k) {
          gii += std::norm(col[i][k]);
          gjj += std::norm(col[j][k]);
          gij += std::conj(col[i][k]) * col[j][k];
        }
        const double off = std::abs(gij);
        if (off <= tol * std::sqrt(gii * gjj) || off == 0.0) continue;
        rotated = true;
        const double tau = (gjj - gii) / (2.0 * off);
        // small root of t^2 - 2 tau t - 1 = 0, written without cancellation
        const double t = ((tau >= 0.0) ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const cplx beta = gij / off;
        for (std::size_t k = 0; k < m; ++k) {
          const cplx ui = col[i][k], uj = col[j][k];
          col[i][k] = c * ui + s * std::conj(beta) * uj;
          col[j][k] = -s * beta * ui + c * uj;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double nrm = 0.0;
    for (std::size_t k = 0; k < m; ++k) nrm += std::norm(col[j][k]);
    sv[j] = std::sqrt(nrm);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double condition_number(const CMatrix& a) {
  const std::vector<double> sv = singular_values(a);
  const std::size_t rank_max = std::min(a.rows(), a.cols());
  if (rank_max == 0 || sv.empty()) return 0.0;
  // a wide matrix has cols - rows structural zeros at the tail; the ratio is
  // over the leading min(rows, cols) values
  const double smin = sv[rank_max - 1];
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv.front() / smin;
}

}  // namespace sefdm
