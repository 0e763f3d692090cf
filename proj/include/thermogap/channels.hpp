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
 * Quantum channels stored as Choi matrices, their verification, and the
 * explicit constructions: the Gibbs-preserving maps that send a top
 * energy level to an arbitrary state, energy-conserving system+bath
 * unitaries, and the channel built from the three-qutrit determinant
 * state.
 *
 * Choi convention (input factor first):
 *
 *   J = sum_{ij} |i><j| (x) Phi(|i><j|),   J[(i,a),(j,b)] = Phi(|i><j|)[a,b].
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "thermogap/error.hpp"
#include "thermogap/linalg.hpp"
#include "thermogap/random.hpp"
#include "thermogap/thermo.hpp"

namespace thermogap {

inline constexpr double kCptpTol = 1e-9;
inline constexpr std::size_t kMaxJointDim = 64;

class Channel {
 public:
  Channel(ComplexMatrix choi, std::size_t d_in, std::size_t d_out)
      : choi_(std::move(choi)), d_in_(d_in), d_out_(d_out) {
    if (d_in == 0 || d_out == 0) throw Error("dimension", "channel dimensions must be positive");
    if (!choi_.is_square() || choi_.rows() != d_in * d_out)
      throw Error("dimension", "Choi matrix must be (d_in*d_out) square");
    if (!choi_.all_finite()) throw Error("finite", "Choi matrix has NaN or Inf entries");
    if (choi_.hermiticity_defect() > kStateTol)
      throw Error("hermiticity", "Choi matrix is not Hermitian");
    choi_ = hermitize(choi_);
  }

  /// Builds the Choi matrix from the action on matrix units |i><j|.
  static Channel from_action(std::size_t d_in, std::size_t d_out,
                             const std::function<ComplexMatrix(const ComplexMatrix&)>& action) {
    ComplexMatrix choi(d_in * d_out, d_in * d_out);
    for (std::size_t i = 0; i < d_in; ++i)
      for (std::size_t j = 0; j < d_in; ++j) {
        ComplexMatrix unit(d_in, d_in);
        unit(i, j) = 1.0;
        const ComplexMatrix out = action(unit);
        if (out.rows() != d_out || out.cols() != d_out)
          throw Error("dimension", "action returned wrong output dimension");
        for (std::size_t a = 0; a < d_out; ++a)
          for (std::size_t b = 0; b < d_out; ++b) choi(i * d_out + a, j * d_out + b) = out(a, b);
      }
    return Channel(std::move(choi), d_in, d_out);
  }

  static Channel identity(std::size_t d) {
    return from_action(d, d, [](const ComplexMatrix& x) { return x; });
  }

  /// Replaces any input by the fixed state `sigma`: J = 1 (x) sigma.
  static Channel replacement(std::size_t d_in, const DensityMatrix& sigma) {
    return Channel(kron(ComplexMatrix::identity(d_in), sigma.matrix()), d_in, sigma.dim());
  }

  const ComplexMatrix& choi() const noexcept { return choi_; }
  std::size_t d_in() const noexcept { return d_in_; }
  std::size_t d_out() const noexcept { return d_out_; }

  /// Phi(X)[a,b] = sum_{ij} X[i,j] J[(i,a),(j,b)] = Tr_in[(X^T (x) 1) J];
  /// defined for arbitrary (non-Hermitian) X.
  ComplexMatrix apply(const ComplexMatrix& x) const {
    if (x.rows() != d_in_ || x.cols() != d_in_)
      throw Error("dimension", "input dimension " + std::to_string(x.rows()) +
                                   " does not match channel d_in " + std::to_string(d_in_));
    ComplexMatrix out(d_out_, d_out_);
    for (std::size_t i = 0; i < d_in_; ++i)
      for (std::size_t j = 0; j < d_in_; ++j) {
        const Complex xij = x(i, j);
        if (xij == Complex{}) continue;
        for (std::size_t a = 0; a < d_out_; ++a)
          for (std::size_t b = 0; b < d_out_; ++b)
            out(a, b) += xij * choi_(i * d_out_ + a, j * d_out_ + b);
      }
    return out;
  }

 private:
  ComplexMatrix choi_;
  std::size_t d_in_;
  std::size_t d_out_;
};

/// Applies a channel to a state; the result is validated as a state.
inline DensityMatrix apply(const Channel& ch, const DensityMatrix& rho) {
  return DensityMatrix(ch.apply(rho.matrix()));
}

//=========================================================================
// Checks
//=========================================================================

struct CptpReport {
  double psd_violation = 0.0;  // max(0, -lambda_min(J))
  double tp_violation = 0.0;   // ||Tr_out J - 1||_F
  double tol = 0.0;

  bool passed() const { return psd_violation <= tol && tp_violation <= tol; }
};

inline CptpReport check_cptp(const Channel& ch, double tol = kCptpTol) {
  CptpReport r;
  r.tol = tol;
  r.psd_violation = std::max(0.0, -min_eigenvalue(ch.choi()));
  const ComplexMatrix tr_out = partial_trace(ch.choi(), Subsystem::B, ch.d_in(), ch.d_out());
  r.tp_violation = frobenius_distance(tr_out, ComplexMatrix::identity(ch.d_in()));
  return r;
}

/// ||Phi(gamma) - gamma||_F.
inline double check_gibbs_preserving(const Channel& ch, const GibbsContext& ctx) {
  if (ch.d_in() != ctx.dim() || ch.d_out() != ctx.dim())
    throw Error("dimension", "channel and Gibbs context dimensions differ");
  return frobenius_distance(ch.apply(ctx.gibbs.matrix()), ctx.gibbs.matrix());
}

/// Diagonal of the covariance generator (-H) (x) 1 + 1 (x) H on input (x) output.
inline std::vector<double> covariance_generator(const Hamiltonian& h) {
  const std::size_t d = h.dim();
  std::vector<double> a(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) a[i * d + k] = h.energy(k) - h.energy(i);
  return a;
}

/**
 * ||[J, (-H) (x) 1 + 1 (x) H]||_F. The input factor should carry H^T,
 * which equals H for a real diagonal Hamiltonian. Zero iff the channel
 * commutes with the time evolution generated by H.
 */
inline double check_covariant(const Channel& ch, const Hamiltonian& h) {
  if (ch.d_in() != h.dim() || ch.d_out() != h.dim())
    throw Error("dimension", "covariance check needs d_in = d_out = dim(H)");
  const auto a = covariance_generator(h);
  const ComplexMatrix& j = ch.choi();
  double s = 0.0;
  for (std::size_t r = 0; r < j.rows(); ++r)
    for (std::size_t c = 0; c < j.cols(); ++c) s += std::norm(j(r, c) * (a[c] - a[r]));
  return std::sqrt(s);
}

//=========================================================================
// Gibbs-preserving maps out of the top energy level
//=========================================================================

namespace detail {

inline void require_constructible(const GibbsContext& ctx) {
  if (!std::isfinite(ctx.beta) || ctx.beta < 0.0)
    throw Error("beta", "constructors need a finite, nonnegative inverse temperature");
}

}  // namespace detail

/**
 * sigma = (gamma - p_n rho) / (1 - p_n). PSD whenever p_n is the smallest
 * Gibbs weight, since then gamma >= p_n 1 >= p_n rho.
 */
inline ComplexMatrix gpm_sigma(const GibbsContext& ctx, std::size_t level,
                               const DensityMatrix& target) {
  require_same_dim(target, ctx.hamiltonian);
  const double pn = ctx.populations.at(level);
  return (ctx.gibbs.matrix() - target.matrix() * pn) * (1.0 / (1.0 - pn));
}

/**
 * Phi(X) = Tr[(1 - |n><n|) X] sigma + <n|X|n> rho. Requires level n to
 * have maximal energy (ties accepted); otherwise sigma may fail to be PSD.
 */
inline Channel gpm_from_top_level(const GibbsContext& ctx, std::size_t level,
                                  const DensityMatrix& target) {
  detail::require_constructible(ctx);
  const std::size_t d = ctx.dim();
  if (level >= d) throw Error("level", "level index out of range");
  if (!ctx.hamiltonian.is_top_level(level))
    throw Error("level", "level " + std::to_string(level) +
                             " is not a maximal-energy level; sigma would not be positive");
  require_same_dim(target, ctx.hamiltonian);
  const ComplexMatrix sigma = gpm_sigma(ctx, level, target);
  ComplexMatrix choi(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    const ComplexMatrix& block = i == level ? target.matrix() : sigma;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) choi(i * d + a, i * d + b) = block(a, b);
  }
  return Channel(std::move(choi), d, d);
}

/// Qubit map Phi(X) = <0|X|0> sigma + <1|X|1> rho with
/// sigma = (gamma - p_1 rho) / p_0, sending the excited state to rho.
inline Channel gpm_from_excited(const GibbsContext& ctx, const DensityMatrix& target) {
  detail::require_constructible(ctx);
  if (ctx.dim() != 2) throw Error("dimension", "gpm_from_excited needs a qubit context");
  if (ctx.hamiltonian.energy(1) < ctx.hamiltonian.energy(0) &&
      !ctx.hamiltonian.is_top_level(1))
    throw Error("level", "excited level must not lie below the ground level");
  require_same_dim(target, ctx.hamiltonian);
  const double p0 = ctx.populations[0];
  const double p1 = ctx.populations[1];
  const ComplexMatrix sigma = (ctx.gibbs.matrix() - target.matrix() * p1) * (1.0 / p0);
  return Channel(kron(ComplexMatrix::diagonal(std::vector<double>{1.0, 0.0}), sigma) +
                     kron(ComplexMatrix::diagonal(std::vector<double>{0.0, 1.0}),
                          target.matrix()),
                 2, 2);
}

//=========================================================================
// Thermal operations: energy-conserving unitaries on system + bath
//=========================================================================

/// Index groups of the product basis |s>|b> with equal total energy.
inline std::vector<std::vector<std::size_t>> total_energy_blocks(const Hamiltonian& sys,
                                                                  const Hamiltonian& bath) {
  std::vector<double> total;
  for (double es : sys.energies())
    for (double eb : bath.energies()) total.push_back(es + eb);
  return Hamiltonian(total).energy_blocks();
}

/// Haar unitary via Gram-Schmidt QR of a complex Ginibre matrix; R has a
/// positive real diagonal, which fixes the phases.
inline ComplexMatrix haar_unitary(std::size_t n, CounterRng& rng) {
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  ComplexMatrix q(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = g(i, k);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t m = 0; m < k; ++m) {
        Complex proj{};
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, m)) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= proj * q(i, m);
      }
    double norm = 0.0;
    for (const auto& z : v) norm += std::norm(z);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, k) = v[i] / norm;
  }
  return q;
}

/// Energy-conserving joint unitary: one Haar block per total-energy
/// eigenspace of H_S (x) 1 + 1 (x) H_B.
inline ComplexMatrix sample_energy_conserving_unitary(const Hamiltonian& sys,
                                                      const Hamiltonian& bath,
                                                      std::uint64_t seed) {
  const std::size_t n = sys.dim() * bath.dim();
  CounterRng rng(seed);
  ComplexMatrix u(n, n);
  for (const auto& block : total_energy_blocks(sys, bath)) {
    const ComplexMatrix ub = haar_unitary(block.size(), rng);
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = 0; b < block.size(); ++b) u(block[a], block[b]) = ub(a, b);
  }
  return u;
}

/// rho -> Tr_B[U (rho (x) gamma_B) U^dagger] for a seeded energy-conserving U.
inline Channel sample_thermal_operation(const GibbsContext& sys, const GibbsContext& bath,
                                        std::uint64_t seed) {
  const std::size_t ds = sys.dim();
  const std::size_t db = bath.dim();
  if (ds * db > kMaxJointDim)
    throw Error("dimension", "system+bath dimension " + std::to_string(ds * db) +
                                 " exceeds " + std::to_string(kMaxJointDim));
  if (std::abs(sys.beta - bath.beta) > 1e-12 * std::max(1.0, sys.beta))
    throw Error("beta", "system and bath must share the inverse temperature");
  const ComplexMatrix u = sample_energy_conserving_unitary(sys.hamiltonian, bath.hamiltonian, seed);
  const ComplexMatrix u_dag = u.adjoint();
  const ComplexMatrix& gamma_b = bath.gibbs.matrix();
  return Channel::from_action(ds, ds, [&](const ComplexMatrix& x) {
    return partial_trace(u * kron(x, gamma_b) * u_dag, Subsystem::B, ds, db);
  });
}

//=========================================================================
// Determinant-state channel
//=========================================================================

/**
 * Choi matrix 3 * Tr_C |A><A| of the totally antisymmetric qutrit state
 * |A> = (|012> + |120> + |201> - |210> - |102> - |021>) / sqrt(6).
 * Unital and trace preserving on a qutrit with H = 0.
 */
inline Channel determinant_state_channel() {
  constexpr std::size_t d = 3;
  std::vector<Complex> psi(d * d * d, Complex{});
  const double amp = 1.0 / std::sqrt(6.0);
  auto idx = [](std::size_t a, std::size_t b, std::size_t c) { return (a * d + b) * d + c; };
  psi[idx(0, 1, 2)] = amp;
  psi[idx(1, 2, 0)] = amp;
  psi[idx(2, 0, 1)] = amp;
  psi[idx(2, 1, 0)] = -amp;
  psi[idx(1, 0, 2)] = -amp;
  psi[idx(0, 2, 1)] = -amp;
  const ComplexMatrix rho_abc = ComplexMatrix::outer(psi);
  const ComplexMatrix rho_ab = partial_trace(rho_abc, Subsystem::B, d * d, d);
  return Channel(rho_ab * static_cast<double>(d), d, d);
}

}  // namespace thermogap
