// Copyright 2026 The thermogap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * Dense complex linear algebra for small dimensions (d <= 64).
 *
 * Everything here is a pure function on values. The Hermitian routines
 * validate and symmetrize their input first: asymmetry above
 * kHermitianRepairTol is an error, anything below is repaired by
 * replacing M with (M + M^dagger) / 2.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thermogap/error.hpp"

namespace thermogap {

using Complex = std::complex<double>;

inline constexpr double kHermitianRepairTol = 1e-8;
inline constexpr double kJacobiOffDiagTol = 1e-13;
inline constexpr double kPivotTol = 1e-10;

//=========================================================================
// ComplexMatrix
//=========================================================================

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) {
        throw Error("dimension", "ragged matrix initializer");
      }
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  /// |v><v| for a (not necessarily normalized) vector v.
  static ComplexMatrix outer(std::span<const Complex> v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  Complex trace() const {
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  /// Largest entrywise |M - M^dagger|.
  double hermiticity_defect() const {
    if (!is_square()) return INFINITY;
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= Complex{s, 0.0}; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= Complex{s, 0.0}; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("dimension", "matrix product shape mismatch");
    ComplexMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

 private:
  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw Error("dimension", "matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).frobenius_norm();
}

//=========================================================================
// Real matrices (constraint systems of the feasibility engines)
//=========================================================================

struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

//=========================================================================
// Hermitian eigendecomposition
//=========================================================================

struct HermitianEigenResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns
};

/// Validates M (square, finite, Hermitian within kHermitianRepairTol) and
/// returns (M + M^dagger) / 2.
inline ComplexMatrix hermitize(const ComplexMatrix& m) {
  if (!m.is_square()) throw Error("dimension", "expected a square matrix");
  if (!m.all_finite()) throw Error("finite", "matrix has NaN or Inf entries");
  const double defect = m.hermiticity_defect();
  if (defect > kHermitianRepairTol * std::max(1.0, m.max_abs()))
    throw Error("hermiticity", "matrix is not Hermitian (defect " +
                                   std::to_string(defect) + ")");
  ComplexMatrix h = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    h(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      h(i, j) = avg;
      h(j, i) = std::conj(avg);
    }
  }
  return h;
}

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/**
 * Cyclic complex Jacobi. Each rotation first removes the phase of the
 * pivot a_pq and then applies the real symmetric Jacobi rotation, so the
 * combined 2x2 unitary on columns (p, q) is
 *
 *   G = [[ c,             s            ],
 *        [ -s e^{-i phi},  c e^{-i phi} ]]
 *
 * with a_pq = |a_pq| e^{i phi}. Sweeps run until the off-diagonal
 * Frobenius norm is below kJacobiOffDiagTol * max(1, ||M||_F).
 */
inline HermitianEigenResult eig_hermitian(const ComplexMatrix& input) {
  ComplexMatrix a = hermitize(input);
  const std::size_t n = a.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double target = kJacobiOffDiagTol * std::max(1.0, a.frobenius_norm());

  for (int sweep = 0; sweep < 100 && detail::off_diagonal_norm(a) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const Complex phase = apq / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex g_pp = c;
        const Complex g_pq = s;
        const Complex g_qp = -s * std::conj(phase);
        const Complex g_qq = c * std::conj(phase);

        // A <- A G
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * g_pp + akq * g_qp;
          a(k, q) = akp * g_pq + akq * g_qq;
        }
        // A <- G^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
          a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        // V <- V G
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * g_pp + vkq * g_qp;
          v(k, q) = vkp * g_pq + vkq * g_qq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  HermitianEigenResult result{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    result.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) result.eigenvectors(r, k) = v(r, order[k]);
  }
  return result;
}

/// V f(Lambda) V^dagger.
inline ComplexMatrix spectral_map(const HermitianEigenResult& e,
                                  const std::function<double(double)>& f) {
  const std::size_t n = e.eigenvalues.size();
  ComplexMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.eigenvalues[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = e.eigenvectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * std::conj(e.eigenvectors(j, k));
    }
  }
  return r;
}

inline double min_eigenvalue(const ComplexMatrix& m) { return eig_hermitian(m).eigenvalues.front(); }
inline double max_eigenvalue(const ComplexMatrix& m) { return eig_hermitian(m).eigenvalues.back(); }

/// Frobenius-nearest positive semidefinite matrix.
inline ComplexMatrix project_psd(const ComplexMatrix& m) {
  const auto e = eig_hermitian(m);
  if (e.eigenvalues.front() >= 0.0) return hermitize(m);
  return spectral_map(e, [](double x) { return std::max(x, 0.0); });
}

//=========================================================================
// Tensor products and partial traces
//=========================================================================

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.all_finite() || !b.all_finite())
    throw Error("finite", "kron operand has NaN or Inf entries");
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

enum class Subsystem { A, B };

/// Traces out subsystem `which` of a square operator on C^{dA} (x) C^{dB}.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem which, std::size_t dim_a,
                                   std::size_t dim_b) {
  if (!m.is_square() || m.rows() != dim_a * dim_b)
    throw Error("dimension", "partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + ", expected " +
                                 std::to_string(dim_a * dim_b) + " square");
  if (which == Subsystem::B) {
    ComplexMatrix r(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t k = 0; k < dim_b; ++k) r(i, j) += m(i * dim_b + k, j * dim_b + k);
    return r;
  }
  ComplexMatrix r(dim_b, dim_b);
  for (std::size_t k = 0; k < dim_a; ++k)
    for (std::size_t i = 0; i < dim_b; ++i)
      for (std::size_t j = 0; j < dim_b; ++j) r(i, j) += m(k * dim_b + i, k * dim_b + j);
  return r;
}

//=========================================================================
// Real vectorization of Hermitian matrices
//=========================================================================

// Coordinates: the n diagonal entries, then for each i < j (row-major)
// sqrt(2) Re M_ij and sqrt(2) Im M_ij. The map is an isometry from the
// Frobenius inner product to the Euclidean one.

inline std::vector<double> vectorize_hermitian(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<double> v;
  v.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(m(i, i).real());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      v.push_back(std::sqrt(2.0) * m(i, j).real());
      v.push_back(std::sqrt(2.0) * m(i, j).imag());
    }
  return v;
}

inline ComplexMatrix unvectorize_hermitian(std::span<const double> v, std::size_t n) {
  if (v.size() != n * n) throw Error("dimension", "vector length is not n^2");
  ComplexMatrix m(n, n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) m(i, i) = v[k++];
  const double inv = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z{v[k] * inv, v[k + 1] * inv};
      k += 2;
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  return m;
}

//=========================================================================
// Linear systems
//=========================================================================

struct DependentRow {
  std::size_t index;  // row index in the input system
  double residual;    // right-hand side left over after elimination
};

/**
 * Orthonormal basis of the row space of A with the matching transformed
 * right-hand side: A = L Q with L lower triangular, c = L^{-1} b.
 * Rows whose remaining norm after elimination is below
 * kPivotTol * (original row norm) are dropped and reported in `dependent`,
 * together with their leftover right-hand side. A dependent row with a
 * nonzero leftover means the system is inconsistent.
 */
struct RowBasis {
  RealMatrix q;
  std::vector<double> c;
  std::vector<std::size_t> kept;
  std::vector<DependentRow> dependent;

  /// Least-squares distance of x to {x : Q x = c} (valid since Q Q^T = I).
  double residual(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < q.rows; ++i) {
      const double r = dot(q.row(i), x) - c[i];
      s += r * r;
    }
    return std::sqrt(s);
  }

  /// Orthogonal projection onto {x : Q x = c}, in place.
  void project(std::span<double> x) const {
    for (std::size_t i = 0; i < q.rows; ++i) {
      const double r = dot(q.row(i), x) - c[i];
      const auto qi = q.row(i);
      for (std::size_t k = 0; k < x.size(); ++k) x[k] -= r * qi[k];
    }
  }
};

inline RowBasis orthonormalize_rows(const RealMatrix& a, std::span<const double> b) {
  if (b.size() != a.rows) throw Error("dimension", "rhs length does not match row count");
  RowBasis basis;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < a.rows; ++i) {
    std::vector<double> r(a.row(i).begin(), a.row(i).end());
    double ri = b[i];
    const double original = norm2(r);
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const double proj = dot(rows[k], r);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] -= proj * rows[k][j];
        ri -= proj * rhs[k];
      }
    }
    const double remaining = norm2(r);
    if (original == 0.0 || remaining <= kPivotTol * original) {
      basis.dependent.push_back({i, original == 0.0 ? ri : ri / original});
      continue;
    }
    for (auto& x : r) x /= remaining;
    rows.push_back(std::move(r));
    rhs.push_back(ri / remaining);
    basis.kept.push_back(i);
  }
  basis.q = RealMatrix(rows.size(), a.cols);
  for (std::size_t k = 0; k < rows.size(); ++k)
    std::copy(rows[k].begin(), rows[k].end(), basis.q.row(k).begin());
  basis.c = std::move(rhs);
  return basis;
}

struct LeastNormSolution {
  std::vector<double> x;
  std::vector<DependentRow> dependent_rows;  // dropped before solving
};

/**
 * Least-norm solution x = A^T (A A^T)^{-1} b. Rows that are linearly
 * dependent at tolerance kPivotTol are dropped and listed in the result;
 * the solution then satisfies the remaining independent rows.
 */
inline LeastNormSolution solve_linear(const RealMatrix& a, std::span<const double> b) {
  for (double x : a.data)
    if (!std::isfinite(x)) throw Error("finite", "system matrix has NaN or Inf entries");
  const RowBasis basis = orthonormalize_rows(a, b);
  LeastNormSolution sol{std::vector<double>(a.cols, 0.0), basis.dependent};
  for (std::size_t i = 0; i < basis.q.rows; ++i) {
    const auto qi = basis.q.row(i);
    for (std::size_t k = 0; k < a.cols; ++k) sol.x[k] += basis.c[i] * qi[k];
  }
  return sol;
}

}  // namespace thermogap
