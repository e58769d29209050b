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

#ifndef RELAYBC_CMATRIX_HPP
#define RELAYBC_CMATRIX_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "relaybc/rng.hpp"

namespace relaybc {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Raised when a channel realization is numerically unusable (singular,
// rank deficient, or the iterative solver did not converge). Monte Carlo
// drivers catch it, discard the realization and count the discard.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major complex matrix. Intended for the small (<= 8x8)
// channel and precoding matrices of the relay link.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);
  static ComplexMatrix from_columns(std::span<const CVector> columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> data() const { return data_; }

  CVector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const cplx> values);
  CVector row(std::size_t r) const;

  ComplexMatrix adjoint() const;
  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

// a^H b
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm2(std::span<const cplx> v);
double norm(std::span<const cplx> v);
CVector normalized(std::span<const cplx> v);

double max_abs_entry(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Thin SVD of a wide matrix A (rows <= cols): A = U diag(sigma) V^H with
// U square unitary, V column-unitary, sigma descending. The null-space
// block of V is not formed.
struct ThinSVD {
  ComplexMatrix U;
  std::vector<double> sigma;
  ComplexMatrix V;
};

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns pair with values
};

inline constexpr int kJacobiMaxSweeps = 200;
inline constexpr double kJacobiTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kSingularConditionLimit = 1e12;

// i.i.d. CN(0, 1) entries.
ComplexMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols, RngStream& rng);

// One-sided (Hestenes) Jacobi on A^H. Throws NumericalFailure on
// non-convergence or rank deficiency, std::invalid_argument when rows > cols.
ThinSVD thin_svd(const ComplexMatrix& a);

// Cyclic complex Jacobi. Throws std::invalid_argument if q is not square
// or not Hermitian within kHermitianTolerance (relative to max(1, |q|_F)).
HermitianEigen eigen_hermitian(const ComplexMatrix& q);
double min_eigenvalue_hermitian(const ComplexMatrix& q);

// Gauss-Jordan inverse with partial pivoting.
ComplexMatrix inverse(const ComplexMatrix& a);

// Zero-forcing right inverse G^H (G G^H)^{-1} of a square channel, which
// for nonsingular G coincides with G^{-1}; it is computed that way. Throws
// NumericalFailure if the condition estimate of G G^H exceeds
// kSingularConditionLimit.
ComplexMatrix zf_pseudo_inverse(const ComplexMatrix& g);

}  // namespace relaybc

#endif  // RELAYBC_CMATRIX_HPP
