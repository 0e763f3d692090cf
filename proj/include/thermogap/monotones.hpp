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
 * Renyi relative entropies to the Gibbs state, in bits. Classical D_alpha
 * for every alpha >= 0 (alpha = +inf is the max-divergence); quantum
 * members only at alpha = 1 (Umegaki) and alpha = inf (D_max), where the
 * Petz and sandwiched families agree. +inf is a legitimate value.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermogap/error.hpp"
#include "thermogap/linalg.hpp"
#include "thermogap/thermo.hpp"

namespace thermogap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kMonotoneSlack = 1e-9;
inline constexpr double kSupportTol = 1e-12;

inline double renyi_classical(std::span<const double> p, std::span<const double> g, double alpha) {
  if (!(alpha >= 0.0)) throw Error("alpha", "Renyi order must be nonnegative");
  if (p.size() != g.size()) throw Error("dimension", "length mismatch");

  if (alpha == 0.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] > 0.0) s += g[i];
    return s > 0.0 ? -std::log2(s) : kInf;
  }
  if (alpha == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] <= 0.0) continue;
      if (g[i] <= 0.0) return kInf;
      s += p[i] * std::log2(p[i] / g[i]);
    }
    return s;
  }
  if (std::isinf(alpha)) {
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] <= 0.0) continue;
      if (g[i] <= 0.0) return kInf;
      m = std::max(m, p[i] / g[i]);
    }
    return std::log2(m);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (g[i] <= 0.0) {
      if (alpha > 1.0) return kInf;
      continue;
    }
    s += std::pow(p[i], alpha) * std::pow(g[i], 1.0 - alpha);
  }
  return std::log2(s) / (alpha - 1.0);
}

/// Tr[rho (log2 rho - log2 gamma)]; +inf when supp(rho) is not inside supp(gamma).
inline double relative_entropy_quantum(const DensityMatrix& rho, const DensityMatrix& gamma) {
  if (rho.dim() != gamma.dim()) throw Error("dimension", "state dimensions differ");
  const auto er = eig_hermitian(rho.matrix());
  const auto eg = eig_hermitian(gamma.matrix());
  double s = 0.0;
  for (double l : er.eigenvalues)
    if (l > kSupportTol) s += l * std::log2(l);
  const std::size_t d = rho.dim();
  for (std::size_t k = 0; k < d; ++k) {
    // <g_k| rho |g_k>
    Complex w{};
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        w += std::conj(eg.eigenvectors(i, k)) * rho(i, j) * eg.eigenvectors(j, k);
    const double weight = w.real();
    if (weight <= kSupportTol) continue;
    if (eg.eigenvalues[k] <= kSupportTol) return kInf;
    s -= weight * std::log2(eg.eigenvalues[k]);
  }
  return s;
}

/// log2 lambda_max(gamma^{-1/2} rho gamma^{-1/2}).
inline double dmax(const DensityMatrix& rho, const DensityMatrix& gamma) {
  if (rho.dim() != gamma.dim()) throw Error("dimension", "state dimensions differ");
  const auto eg = eig_hermitian(gamma.matrix());
  if (eg.eigenvalues.front() <= kSupportTol) throw Error("singular", "gamma is not full rank");
  const ComplexMatrix inv_sqrt = spectral_map(eg, [](double l) { return 1.0 / std::sqrt(l); });
  return std::log2(max_eigenvalue(inv_sqrt * rho.matrix() * inv_sqrt));
}

//=========================================================================
// Second-laws report
//=========================================================================

struct MonotoneRow {
  std::string name;
  std::optional<double> alpha;
  double value_in;
  double value_out;

  /// value_in >= value_out - kMonotoneSlack, with +inf handled exactly.
  bool satisfied() const {
    if (std::isinf(value_out)) return std::isinf(value_in);
    if (std::isinf(value_in)) return true;
    return value_in >= value_out - kMonotoneSlack;
  }
};

struct MonotoneReport {
  std::vector<MonotoneRow> rows;

  bool all_satisfied() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.satisfied(); });
  }
};

/**
 * Classical D_alpha of the dephased states over the alpha grid, then the
 * quantum relative entropy and D_max of the undephased states.
 */
inline MonotoneReport second_laws_report(const DensityMatrix& rho_in, const DensityMatrix& rho_out,
                                         const GibbsContext& ctx, std::span<const double> alphas) {
  const ClassicalPair in = classical_distribution(rho_in, ctx);
  const ClassicalPair out = classical_distribution(rho_out, ctx);
  MonotoneReport report;
  for (double alpha : alphas) {
    report.rows.push_back({"renyi_classical", alpha, renyi_classical(in.p, in.g, alpha),
                           renyi_classical(out.p, out.g, alpha)});
  }
  report.rows.push_back({"relative_entropy_quantum", 1.0,
                         relative_entropy_quantum(rho_in, ctx.gibbs),
                         relative_entropy_quantum(rho_out, ctx.gibbs)});
  report.rows.push_back({"dmax_quantum", kInf, dmax(rho_in, ctx.gibbs), dmax(rho_out, ctx.gibbs)});
  return report;
}

}  // namespace thermogap
