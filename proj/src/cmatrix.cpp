// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "relaybc/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace relaybc {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw std::invalid_argument("ComplexMatrix: entry count does not match rows*cols");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const CVector> columns) {
  if (columns.empty()) return {};
  ComplexMatrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

CVector ComplexMatrix::column(std::size_t c) const {
  CVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const cplx> values) {
  if (values.size() != rows_) throw std::invalid_argument("set_column: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

CVector ComplexMatrix::row(std::size_t r) const {
  return CVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                 data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

double ComplexMatrix::frobenius_norm() const { return norm(data_); }

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("matrix difference: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: length mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm2(std::span<const cplx> v) {
  double acc = 0.0;
  for (cplx z : v) acc += std::norm(z);
  return acc;
}

double norm(std::span<const cplx> v) { return std::sqrt(norm2(v)); }

CVector normalized(std::span<const cplx> v) {
  const double n = norm(v);
  if (!(n > 0.0)) throw NumericalFailure("cannot normalize a zero vector");
  CVector out(v.begin(), v.end());
  for (auto& z : out) z /= n;
  return out;
}

double max_abs_entry(const ComplexMatrix& a) {
  double m = 0.0;
  for (cplx z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

ComplexMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("sample_gaussian_matrix: empty shape");
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.complex_gaussian();
  return m;
}

namespace {

// Unitary 2x2 plane rotation J = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
// that diagonalizes the Hermitian block [[app, apq], [conj(apq), aqq]]
// under J^H (.) J.
struct Rotation {
  cplx pp, pq, qp, qq;
};

Rotation jacobi_rotation(double app, double aqq, cplx apq) {
  const double mag = std::abs(apq);
  const cplx phase = apq / mag;
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const cplx conj_phase = std::conj(phase);
  return {c, s, -s * conj_phase, c * conj_phase};
}

// X <- X J restricted to columns p, q.
void rotate_columns(ComplexMatrix& x, std::size_t p, std::size_t q, const Rotation& j) {
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const cplx xp = x(r, p);
    const cplx xq = x(r, q);
    x(r, p) = xp * j.pp + xq * j.qp;
    x(r, q) = xp * j.pq + xq * j.qq;
  }
}

// X <- J^H X restricted to rows p, q.
void rotate_rows(ComplexMatrix& x, std::size_t p, std::size_t q, const Rotation& j) {
  for (std::size_t c = 0; c < x.cols(); ++c) {
    const cplx xp = x(p, c);
    const cplx xq = x(q, c);
    x(p, c) = std::conj(j.pp) * xp + std::conj(j.qp) * xq;
    x(q, c) = std::conj(j.pq) * xp + std::conj(j.qq) * xq;
  }
}

double column_norm2(const ComplexMatrix& x, std::size_t c) {
  double acc = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) acc += std::norm(x(r, c));
  return acc;
}

cplx column_inner(const ComplexMatrix& x, std::size_t p, std::size_t q) {
  cplx acc = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) acc += std::conj(x(r, p)) * x(r, q);
  return acc;
}

}  // namespace

ThinSVD thin_svd(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  if (n == 0 || n > m) throw std::invalid_argument("thin_svd: requires 1 <= rows <= cols");
  if (!a.all_finite()) throw std::invalid_argument("thin_svd: non-finite input");

  // Orthogonalize the columns of X = A^H; the accumulated rotations form U.
  ComplexMatrix x = a.adjoint();
  ComplexMatrix u = ComplexMatrix::identity(n);
  bool converged = (n == 1);
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    double worst = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = column_norm2(x, p);
        const double beta = column_norm2(x, q);
        if (alpha == 0.0 || beta == 0.0) continue;
        const cplx gamma = column_inner(x, p, q);
        const double rel = std::abs(gamma) / std::sqrt(alpha * beta);
        worst = std::max(worst, rel);
        if (rel <= 1e-15) continue;
        const Rotation j = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(x, p, q, j);
        rotate_columns(u, p, q, j);
      }
    }
    converged = worst <= kJacobiTolerance;
  }
  if (!converged) throw NumericalFailure("thin_svd: Jacobi iteration did not converge");

  std::vector<double> sigma(n);
  for (std::size_t k = 0; k < n; ++k) sigma[k] = std::sqrt(column_norm2(x, k));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  ThinSVD out{ComplexMatrix(n, n), std::vector<double>(n), ComplexMatrix(m, n)};
  const double floor = sigma[order.front()] * 1e-14;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    const double s = sigma[src];
    if (!(s > floor)) throw NumericalFailure("thin_svd: rank-deficient input");
    out.sigma[k] = s;
    for (std::size_t r = 0; r < n; ++r) out.U(r, k) = u(r, src);
    for (std::size_t r = 0; r < m; ++r) out.V(r, k) = x(r, src) / s;
  }
  return out;
}

HermitianEigen eigen_hermitian(const ComplexMatrix& q) {
  const std::size_t n = q.rows();
  if (n == 0 || q.cols() != n) throw std::invalid_argument("eigen_hermitian: matrix must be square");
  const double scale = std::max(1.0, q.frobenius_norm());
  if (max_abs_diff(q, q.adjoint()) > kHermitianTolerance * scale)
    throw std::invalid_argument("eigen_hermitian: matrix is not Hermitian");

  ComplexMatrix a = q;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto off_diagonal = [&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) acc += std::norm(a(i, j));
    return std::sqrt(acc);
  };

  const double total = std::max(a.frobenius_norm(), 1e-300);
  bool converged = off_diagonal() <= kJacobiTolerance * total;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const cplx apq = a(p, r);
        if (std::abs(apq) <= 1e-300) continue;
        const Rotation j = jacobi_rotation(a(p, p).real(), a(r, r).real(), apq);
        rotate_columns(a, p, r, j);
        rotate_rows(a, p, r, j);
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        rotate_columns(v, p, r, j);
      }
    }
    converged = off_diagonal() <= kJacobiTolerance * total;
  }
  if (!converged) throw NumericalFailure("eigen_hermitian: Jacobi iteration did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

double min_eigenvalue_hermitian(const ComplexMatrix& q) { return eigen_hermitian(q).values.front(); }

ComplexMatrix inverse(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) throw std::invalid_argument("inverse: matrix must be square");
  ComplexMatrix work = a;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
    if (work(pivot, col) == cplx{0.0}) throw NumericalFailure("inverse: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(work(pivot, c), work(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    }
    const cplx d = 1.0 / work(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      work(col, c) *= d;
      inv(col, c) *= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx f = work(r, col);
      if (f == cplx{0.0}) continue;
      for (std::size_t c = 0; c < n; ++c) {
        work(r, c) -= f * work(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

ComplexMatrix zf_pseudo_inverse(const ComplexMatrix& g) {
  if (g.rows() == 0 || g.rows() != g.cols()) throw std::invalid_argument("zf_pseudo_inverse: G must be square");
  if (!g.all_finite()) throw std::invalid_argument("zf_pseudo_inverse: non-finite channel");
  ComplexMatrix p = inverse(g);
  // Frobenius condition estimate; kappa(G G^H) = kappa(G)^2.
  const double kappa = g.frobenius_norm() * p.frobenius_norm();
  if (!std::isfinite(kappa) || kappa * kappa > kSingularConditionLimit)
    throw NumericalFailure("zf_pseudo_inverse: channel is numerically singular (condition " +
                           std::to_string(kappa * kappa) + ")");
  return p;
}

}  // namespace relaybc
