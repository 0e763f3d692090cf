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
 * Classical thermodynamics of block-diagonal states: thermo-majorization
 * curves and an independent decision procedure for Gibbs-stochastic
 * transitions (box + affine alternating projections on the matrix T).
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thermogap/error.hpp"
#include "thermogap/linalg.hpp"

namespace thermogap {

inline constexpr double kCurveSlack = 1e-10;

struct CurvePoint {
  double x;  // cumulative Gibbs weight
  double y;  // cumulative probability
};

struct ThermoCurve {
  std::vector<CurvePoint> breakpoints;  // starts at (0,0), ends at (1,1)

  /// Piecewise-linear interpolation; x is clamped to [0, 1].
  double operator()(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
      const auto& a = breakpoints[k - 1];
      const auto& b = breakpoints[k];
      if (x <= b.x) {
        if (b.x - a.x <= 0.0) return b.y;
        return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
      }
    }
    return breakpoints.back().y;
  }
};

namespace detail {

inline void validate_distribution_pair(std::span<const double> p, std::span<const double> g) {
  if (p.size() != g.size() || p.empty())
    throw Error("dimension", "probability and Gibbs vectors differ in length");
  double sp = 0.0;
  double sg = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0) throw Error("probability", "negative probability");
    if (!std::isfinite(g[i]) || g[i] < 0.0) throw Error("gibbs", "negative Gibbs weight");
    if (g[i] == 0.0) throw Error("gibbs", "zero Gibbs weight");
    sp += p[i];
    sg += g[i];
  }
  if (std::abs(sp - 1.0) > 1e-10) throw Error("probability", "probabilities do not sum to 1");
  if (std::abs(sg - 1.0) > 1e-10) throw Error("gibbs", "Gibbs weights do not sum to 1");
}

}  // namespace detail

/// Sorts levels by p_i / g_i descending (ties: lower index first) and
/// accumulates (g, p).
inline ThermoCurve thermo_curve(std::span<const double> p, std::span<const double> g) {
  detail::validate_distribution_pair(p, g);
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return p[i] / g[i] > p[j] / g[j]; });
  ThermoCurve curve;
  curve.breakpoints.push_back({0.0, 0.0});
  double x = 0.0;
  double y = 0.0;
  for (std::size_t i : order) {
    x += g[i];
    y += p[i];
    curve.breakpoints.push_back({x, y});
  }
  // Pin the endpoint against round-off in the running sums.
  curve.breakpoints.back() = {1.0, 1.0};
  return curve;
}

/// curve(p) >= curve(q) - kCurveSlack at every breakpoint of either curve.
inline bool thermo_majorizes(std::span<const double> p, std::span<const double> q,
                             std::span<const double> g) {
  const ThermoCurve cp = thermo_curve(p, g);
  const ThermoCurve cq = thermo_curve(q, g);
  auto dominates_at = [&](double x) { return cp(x) >= cq(x) - kCurveSlack; };
  for (const auto& pt : cp.breakpoints)
    if (!dominates_at(pt.x)) return false;
  for (const auto& pt : cq.breakpoints)
    if (!dominates_at(pt.x)) return false;
  return true;
}

/// Textbook majorization: sorted partial sums of p dominate those of q.
inline bool majorizes(std::vector<double> p, std::vector<double> q) {
  if (p.size() != q.size()) throw Error("dimension", "length mismatch");
  std::sort(p.rbegin(), p.rend());
  std::sort(q.rbegin(), q.rend());
  double sp = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
    if (sp < sq - kCurveSlack) return false;
  }
  return true;
}

//=========================================================================
// Gibbs-stochastic feasibility oracle
//=========================================================================

struct StochasticFeasibility {
  bool feasible = false;
  double residual = 0.0;  // terminal distance between box and affine iterates
  std::size_t iterations = 0;
  bool inconsistent = false;  // affine constraints alone are contradictory
  bool decided = false;       // false only when the iteration limit was hit
  std::vector<double> matrix;  // row-major T (d x d), the final box iterate
};

namespace detail {

/**
 * Gap direction w = Q^T (Q y - c) as a separating hyperplane: every affine
 * point z has <w, z> = (Q y - c) . c, while the box gives
 * <w, x> >= sum_k min(0, w_k). A positive return value certifies that the
 * box misses the affine set.
 */
inline double box_separating_value(const RowBasis& basis, std::span<const double> y) {
  std::vector<double> w(y.size(), 0.0);
  double offset = 0.0;
  for (std::size_t i = 0; i < basis.q.rows; ++i) {
    const auto qi = basis.q.row(i);
    const double mu = dot(qi, y) - basis.c[i];
    offset += mu * basis.c[i];
    for (std::size_t k = 0; k < y.size(); ++k) w[k] += mu * qi[k];
  }
  const double norm = norm2(w);
  if (norm == 0.0) return 0.0;
  double box_min = 0.0;
  for (double wk : w) box_min += std::min(0.0, wk);
  return (box_min - offset) / norm;
}

}  // namespace detail

/**
 * Decides whether an entrywise nonnegative, column-stochastic T exists with
 * T g = g and T p = q. Dykstra iterations between the box [0,1]^{d^2} and
 * the affine set; feasible iff the terminal residual is <= tol. Every 500
 * iterations with the residual above 10 tol, the run is declared infeasible
 * when the gap direction separates the box from the affine set. Hitting
 * max_iter leaves the result undecided.
 */
inline StochasticFeasibility gibbs_stochastic_feasible(std::span<const double> p,
                                                       std::span<const double> q,
                                                       std::span<const double> g,
                                                       double tol = 1e-8,
                                                       std::size_t max_iter = 2000000) {
  detail::validate_distribution_pair(p, g);
  detail::validate_distribution_pair(q, g);
  const std::size_t d = p.size();
  const std::size_t n = d * d;

  // Unknown t[a*d + i] = T_{a i}.
  RealMatrix a(3 * d, n);
  std::vector<double> b(3 * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t r = 0; r < d; ++r) a(i, r * d + i) = 1.0;  // column sums
    b[i] = 1.0;
  }
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      a(d + r, r * d + i) = g[i];
      a(2 * d + r, r * d + i) = p[i];
    }
    b[d + r] = g[r];
    b[2 * d + r] = q[r];
  }
  const RowBasis affine = orthonormalize_rows(a, b);

  StochasticFeasibility out;
  for (const auto& dep : affine.dependent) {
    if (std::abs(dep.residual) > 1e-9) {
      out.inconsistent = true;
      out.residual = std::max(out.residual, std::abs(dep.residual));
    }
  }
  if (out.inconsistent) {
    out.decided = true;
    return out;
  }

  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < d; ++i) x[i * d + i] = 1.0;
  affine.project(x);
  std::vector<double> correction(n, 0.0);
  std::vector<double> y(n);

  for (std::size_t it = 1; it <= max_iter; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      const double shifted = x[k] + correction[k];
      y[k] = std::clamp(shifted, 0.0, 1.0);
      correction[k] = shifted - y[k];
    }
    x = y;
    affine.project(x);
    double gap = 0.0;
    for (std::size_t k = 0; k < n; ++k) gap += (x[k] - y[k]) * (x[k] - y[k]);
    gap = std::sqrt(gap);
    out.iterations = it;
    out.residual = gap;
    if (gap <= tol) {
      out.feasible = true;
      out.decided = true;
      out.matrix = y;
      return out;
    }
    if (it % 500 == 0 && gap > 10.0 * tol && detail::box_separating_value(affine, y) > 10.0 * tol) {
      out.decided = true;
      out.matrix = y;
      return out;
    }
  }
  out.matrix = y;
  return out;
}

}  // namespace thermogap
