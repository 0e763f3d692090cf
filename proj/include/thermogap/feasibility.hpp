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
 * Conic feasibility for state transitions under Gibbs-preserving channels.
 *
 * Unknown: the Choi matrix J (d^2 x d^2, Hermitian), in the real
 * coordinates of vectorize_hermitian. Constraints:
 *
 *   J >= 0                                  (complete positivity)
 *   Tr_out J = 1                            (trace preservation)
 *   Phi(gamma) = gamma                      (Gibbs preservation)
 *   Phi(rho_in) = rho_out                   (the transition)
 *   [J, (-H) (x) 1 + 1 (x) H] = 0           (time covariance, optional)
 *
 * The equality rows are orthonormalized once per problem; solve() then runs
 * Dykstra's alternating projections between the PSD cone and the affine
 * set. Infeasibility is declared when the equality rows contradict each
 * other or when the gap direction separates the two sets. Runs that reach
 * the iteration limit without either outcome are reported as undecided.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermogap/channels.hpp"
#include "thermogap/error.hpp"
#include "thermogap/linalg.hpp"
#include "thermogap/thermo.hpp"

namespace thermogap {

inline constexpr double kInconsistencyTol = 1e-9;

enum class FeasibilityStatus { feasible, infeasible, undecided };

inline const char* to_string(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::feasible: return "feasible";
    case FeasibilityStatus::infeasible: return "infeasible";
    case FeasibilityStatus::undecided: return "undecided";
  }
  return "?";
}

struct RowLabel {
  std::string group;  // trace-preservation | gibbs-preservation | state-mapping | covariance
  std::size_t coordinate;
};

/// A dependent equality row whose right-hand side contradicts the others.
struct Inconsistency {
  RowLabel row;
  double residual;
};

struct FeasibilityProblem {
  std::size_t d;
  GibbsContext gibbs;
  DensityMatrix rho_in;
  DensityMatrix rho_out;
  bool covariant;
  RowBasis affine;
  std::vector<RowLabel> labels;  // labels of the original rows
  std::optional<Inconsistency> inconsistency;

  std::size_t choi_dim() const { return d * d; }
};

struct FeasibilityReport {
  FeasibilityStatus status = FeasibilityStatus::undecided;
  double residual_affine = 0.0;
  double residual_psd = 0.0;
  double gap = 0.0;  // distance between the last PSD and affine iterates
  std::size_t iterations = 0;
  std::optional<ComplexMatrix> choi;
  std::string note;
};

struct SolveOptions {
  double tol = 1e-9;
  std::size_t max_iter = 200000;
};

namespace detail {

/// Matrix of a real-linear map on Hermitian D x D matrices, in vectorized
/// coordinates. Column k is vec(L(unvec(e_k))).
inline RealMatrix linear_map_rows(std::size_t dim_in, std::size_t dim_out,
                                  const std::function<ComplexMatrix(const ComplexMatrix&)>& map) {
  const std::size_t n = dim_in * dim_in;
  RealMatrix a(dim_out * dim_out, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    e[k] = 1.0;
    const auto col = vectorize_hermitian(map(unvectorize_hermitian(e, dim_in)));
    e[k] = 0.0;
    for (std::size_t r = 0; r < col.size(); ++r) a(r, k) = col[r];
  }
  return a;
}

/// Phi(X) for a Choi matrix that may not (yet) be a valid Channel.
inline ComplexMatrix apply_choi(const ComplexMatrix& j, const ComplexMatrix& x, std::size_t d) {
  ComplexMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const Complex xik = x(i, k);
      if (xik == Complex{}) continue;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) out(a, b) += xik * j(i * d + a, k * d + b);
    }
  return out;
}

}  // namespace detail

inline FeasibilityProblem build_problem(const GibbsContext& ctx, const DensityMatrix& rho_in,
                                        const DensityMatrix& rho_out, bool covariant) {
  const std::size_t d = ctx.dim();
  if (rho_in.dim() != d || rho_out.dim() != d)
    throw Error("dimension", "states and Hamiltonian must share the dimension");
  const std::size_t big = d * d;
  const std::size_t n = big * big;

  std::vector<RealMatrix> blocks;
  std::vector<std::vector<double>> rhs;
  std::vector<std::string> groups;

  blocks.push_back(detail::linear_map_rows(big, d, [&](const ComplexMatrix& j) {
    return partial_trace(j, Subsystem::B, d, d);
  }));
  rhs.push_back(vectorize_hermitian(ComplexMatrix::identity(d)));
  groups.emplace_back("trace-preservation");

  blocks.push_back(detail::linear_map_rows(big, d, [&](const ComplexMatrix& j) {
    return detail::apply_choi(j, ctx.gibbs.matrix(), d);
  }));
  rhs.push_back(vectorize_hermitian(ctx.gibbs.matrix()));
  groups.emplace_back("gibbs-preservation");

  blocks.push_back(detail::linear_map_rows(big, d, [&](const ComplexMatrix& j) {
    return detail::apply_choi(j, rho_in.matrix(), d);
  }));
  rhs.push_back(vectorize_hermitian(rho_out.matrix()));
  groups.emplace_back("state-mapping");

  if (covariant) {
    // i [J, A] is Hermitian for Hermitian J and real diagonal A.
    const auto gen = covariance_generator(ctx.hamiltonian);
    blocks.push_back(detail::linear_map_rows(big, big, [&](const ComplexMatrix& j) {
      ComplexMatrix c(big, big);
      for (std::size_t r = 0; r < big; ++r)
        for (std::size_t s = 0; s < big; ++s)
          c(r, s) = Complex{0.0, 1.0} * j(r, s) * (gen[s] - gen[r]);
      return c;
    }));
    rhs.emplace_back(n, 0.0);
    groups.emplace_back("covariance");
  }

  std::size_t total_rows = 0;
  for (const auto& blk : blocks) total_rows += blk.rows;
  RealMatrix a(total_rows, n);
  std::vector<double> b;
  std::vector<RowLabel> labels;
  std::size_t r0 = 0;
  for (std::size_t g = 0; g < blocks.size(); ++g) {
    for (std::size_t r = 0; r < blocks[g].rows; ++r) {
      std::copy(blocks[g].row(r).begin(), blocks[g].row(r).end(), a.row(r0 + r).begin());
      b.push_back(rhs[g][r]);
      labels.push_back({groups[g], r});
    }
    r0 += blocks[g].rows;
  }

  FeasibilityProblem problem{d, ctx, rho_in, rho_out, covariant,
                             orthonormalize_rows(a, b), std::move(labels), std::nullopt};
  for (const auto& dep : problem.affine.dependent) {
    if (std::abs(dep.residual) > kInconsistencyTol &&
        (!problem.inconsistency || std::abs(dep.residual) > problem.inconsistency->residual)) {
      problem.inconsistency = Inconsistency{problem.labels[dep.index], std::abs(dep.residual)};
    }
  }
  return problem;
}

//=========================================================================
// Verification (independent of the solver's residuals)
//=========================================================================

struct VerificationReport {
  CptpReport cptp;
  double gibbs_residual = 0.0;
  double mapping_residual = 0.0;
  std::optional<double> covariance_residual;
  double tol = 0.0;

  bool passed() const {
    return cptp.passed() && gibbs_residual <= tol && mapping_residual <= tol &&
           (!covariance_residual || *covariance_residual <= tol);
  }
};

inline VerificationReport verify_solution(const ComplexMatrix& choi,
                                          const FeasibilityProblem& problem, double tol) {
  const Channel ch(choi, problem.d, problem.d);
  VerificationReport v;
  v.tol = tol;
  v.cptp = check_cptp(ch, tol);
  v.gibbs_residual = check_gibbs_preserving(ch, problem.gibbs);
  v.mapping_residual = frobenius_distance(ch.apply(problem.rho_in.matrix()),
                                          problem.rho_out.matrix());
  if (problem.covariant) v.covariance_residual = check_covariant(ch, problem.gibbs.hamiltonian);
  return v;
}

//=========================================================================
// Solver
//=========================================================================

namespace detail {

inline double negative_part_norm(const HermitianEigenResult& e) {
  double s = 0.0;
  for (double l : e.eigenvalues)
    if (l < 0.0) s += l * l;
  return std::sqrt(s);
}

/**
 * Tests the gap direction W = Q^T (Q y - c) as a separating hyperplane.
 * Every affine point z has <W, z> = (Q y - c) . c, and every PSD J with
 * Tr J = d (implied by trace preservation) has
 * <W, J> >= d min(0, lambda_min(W)). The returned value
 * ((Q y - c) . c + d max(0, -lambda_min(W))) / ||W|| is negative only when
 * no PSD matrix lies in the affine set.
 */
inline double separating_value(const FeasibilityProblem& problem, std::span<const double> y) {
  const RowBasis& basis = problem.affine;
  const std::size_t n = y.size();
  std::vector<double> w(n, 0.0);
  double offset = 0.0;
  for (std::size_t i = 0; i < basis.q.rows; ++i) {
    const double mu = dot(basis.q.row(i), y) - basis.c[i];
    offset += mu * basis.c[i];
    const auto qi = basis.q.row(i);
    for (std::size_t k = 0; k < n; ++k) w[k] += mu * qi[k];
  }
  const double norm = norm2(w);
  if (norm == 0.0) return 0.0;
  const double lmin = min_eigenvalue(unvectorize_hermitian(w, problem.choi_dim()));
  return (offset + static_cast<double>(problem.d) * std::max(0.0, -lmin)) / norm;
}

}  // namespace detail

/**
 * Dykstra iteration from J0 = 1 (x) gamma (discard the input, prepare
 * Gibbs):
 *
 *   y = P_psd(x + p),  p <- x + p - y,  x <- P_affine(y).
 *
 * The affine set needs no correction term. The run is feasible once
 * ||x - y|| <= tol and the negative part of x is <= tol, with x passing
 * verify_solution at 10 tol. Infeasible, checked every 500 iterations
 * while the gap exceeds 10 tol, once the gap direction is a separating
 * hyperplane (separating_value < -10 tol). A run that reaches max_iter is
 * undecided; this happens when the solution set has no interior point, as
 * for some transitions out of pure states.
 */
inline FeasibilityReport solve(const FeasibilityProblem& problem, const SolveOptions& opts = {}) {
  FeasibilityReport report;
  if (problem.inconsistency) {
    report.status = FeasibilityStatus::infeasible;
    report.gap = problem.inconsistency->residual;
    report.residual_affine = problem.inconsistency->residual;
    report.note = "equality constraints are inconsistent (" + problem.inconsistency->row.group +
                  " row " + std::to_string(problem.inconsistency->row.coordinate) + ")";
    return report;
  }

  const std::size_t big = problem.choi_dim();
  const std::size_t n = big * big;
  std::vector<double> x =
      vectorize_hermitian(kron(ComplexMatrix::identity(problem.d), problem.gibbs.gibbs.matrix()));
  problem.affine.project(x);
  std::vector<double> correction(n, 0.0);
  std::vector<double> shifted(n);
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    for (std::size_t k = 0; k < n; ++k) shifted[k] = x[k] + correction[k];
    const auto eig = eig_hermitian(unvectorize_hermitian(shifted, big));
    const auto y = vectorize_hermitian(spectral_map(eig, [](double l) { return std::max(l, 0.0); }));
    for (std::size_t k = 0; k < n; ++k) correction[k] = shifted[k] - y[k];
    x = y;
    problem.affine.project(x);

    double gap = 0.0;
    for (std::size_t k = 0; k < n; ++k) gap += (x[k] - y[k]) * (x[k] - y[k]);
    gap = std::sqrt(gap);
    report.iterations = it;
    report.gap = gap;

    if (gap <= opts.tol) {
      const ComplexMatrix candidate = unvectorize_hermitian(x, big);
      const double psd = detail::negative_part_norm(eig_hermitian(candidate));
      if (psd <= opts.tol && verify_solution(candidate, problem, 10.0 * opts.tol).passed()) {
        report.status = FeasibilityStatus::feasible;
        report.residual_affine = problem.affine.residual(x);
        report.residual_psd = psd;
        report.choi = candidate;
        return report;
      }
    }
    if (it % 500 == 0 && gap > 10.0 * opts.tol &&
        detail::separating_value(problem, y) < -10.0 * opts.tol) {
      report.status = FeasibilityStatus::infeasible;
      report.residual_affine = problem.affine.residual(x);
      report.residual_psd = detail::negative_part_norm(eig_hermitian(unvectorize_hermitian(x, big)));
      report.note = "gap direction separates the PSD cone from the affine set";
      return report;
    }
  }
  report.residual_affine = problem.affine.residual(x);
  report.residual_psd = detail::negative_part_norm(eig_hermitian(unvectorize_hermitian(x, big)));
  report.note = "iteration limit reached";
  return report;
}

}  // namespace thermogap
