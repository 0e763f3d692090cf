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
 * End-to-end gap scenario on a qubit with gap 1: the excited state |1>
 * is sent to |+> by an explicit Gibbs-preserving map, while no
 * time-covariant Gibbs-preserving map (and hence no thermal operation)
 * can do it, although every Renyi monotone to the Gibbs state allows it.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "thermogap/channels.hpp"
#include "thermogap/feasibility.hpp"
#include "thermogap/monotones.hpp"
#include "thermogap/thermo.hpp"

namespace thermogap {

inline constexpr std::uint64_t kDefaultSamplerSeed = 20150521;

struct SamplerStats {
  std::size_t samples = 0;
  double max_output_coherence = 0.0;  // input |1><1|
  double max_gibbs_residual = 0.0;
  double max_covariance_residual = 0.0;
};

struct DemoGapReport {
  double beta_delta_e = 0.0;
  CptpReport construction_cptp;
  double construction_gibbs_residual = 0.0;
  double output_error = 0.0;      // ||Phi(|1><1|) - |+><+|||_F
  double output_fidelity = 0.0;   // <+|Phi(|1><1|)|+>
  double covariance_residual = 0.0;
  ComplexMatrix sigma;
  FeasibilityReport plain;
  std::optional<VerificationReport> plain_verification;
  FeasibilityReport covariant;
  MonotoneReport monotones;
  SamplerStats sampler;
  std::optional<std::string> failed;  // first failed expectation, if any

  bool passed() const { return !failed.has_value(); }
};

/// Samples energy-conserving system+bath unitaries for two qubits with the
/// same gap and records how much coherence they produce from |1><1|.
inline SamplerStats thermal_sampler_stats(const GibbsContext& qubit, std::size_t seeds,
                                          std::uint64_t base_seed) {
  SamplerStats stats;
  const DensityMatrix excited = DensityMatrix::basis(2, 1);
  for (std::size_t k = 0; k < seeds; ++k) {
    const Channel to = sample_thermal_operation(qubit, qubit, base_seed + k);
    const DensityMatrix out = apply(to, excited);
    stats.max_output_coherence =
        std::max(stats.max_output_coherence, coherence_l1(out, qubit.hamiltonian));
    stats.max_gibbs_residual = std::max(stats.max_gibbs_residual, check_gibbs_preserving(to, qubit));
    stats.max_covariance_residual =
        std::max(stats.max_covariance_residual, check_covariant(to, qubit.hamiltonian));
    ++stats.samples;
  }
  return stats;
}

inline DemoGapReport run_demo_gap(double beta_delta_e, std::size_t seeds,
                                  std::uint64_t base_seed = kDefaultSamplerSeed,
                                  const SolveOptions& opts = {}) {
  constexpr double tol = 1e-9;
  DemoGapReport r;
  r.beta_delta_e = beta_delta_e;
  const GibbsContext ctx = make_gibbs_context(Hamiltonian({0.0, 1.0}), beta_delta_e);
  const double amp = std::numbers::sqrt2 / 2.0;
  const std::vector<Complex> plus_vec{amp, amp};
  const DensityMatrix plus = DensityMatrix::pure(plus_vec);
  const DensityMatrix excited = DensityMatrix::basis(2, 1);

  const Channel phi = gpm_from_excited(ctx, plus);
  r.sigma = gpm_sigma(ctx, 1, plus);
  r.construction_cptp = check_cptp(phi, tol);
  r.construction_gibbs_residual = check_gibbs_preserving(phi, ctx);
  const ComplexMatrix out = phi.apply(excited.matrix());
  r.output_error = frobenius_distance(out, plus.matrix());
  Complex fid{};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) fid += std::conj(plus_vec[i]) * out(i, j) * plus_vec[j];
  r.output_fidelity = fid.real();
  r.covariance_residual = check_covariant(phi, ctx.hamiltonian);

  const FeasibilityProblem plain = build_problem(ctx, excited, plus, false);
  r.plain = solve(plain, opts);
  if (r.plain.choi) r.plain_verification = verify_solution(*r.plain.choi, plain, 10.0 * opts.tol);
  r.covariant = solve(build_problem(ctx, excited, plus, true), opts);

  const std::vector<double> alphas{0.0, 0.5, 1.0, 2.0, kInf};
  r.monotones = second_laws_report(excited, plus, ctx, alphas);
  r.sampler = thermal_sampler_stats(ctx, seeds, base_seed);

  auto expect = [&](bool ok, const char* what) {
    if (!ok && !r.failed) r.failed = what;
  };
  expect(r.construction_cptp.passed(), "constructed map is CPTP");
  expect(r.construction_gibbs_residual <= tol, "constructed map preserves the Gibbs state");
  expect(r.output_error <= tol, "constructed map sends |1> to |+>");
  expect(r.covariance_residual > 1e-6, "constructed map is not time-covariant");
  expect(r.plain.status == FeasibilityStatus::feasible && r.plain_verification &&
             r.plain_verification->passed(),
         "Gibbs-preserving transition |1> -> |+> is feasible");
  expect(r.covariant.status == FeasibilityStatus::infeasible,
         "covariant Gibbs-preserving transition |1> -> |+> is infeasible");
  expect(r.monotones.all_satisfied(), "all Renyi monotones allow the transition");
  expect(r.sampler.max_output_coherence <= 1e-12,
         "thermal operations create no coherence from |1>");
  expect(r.sampler.max_gibbs_residual <= tol && r.sampler.max_covariance_residual <= tol,
         "sampled thermal operations are Gibbs-preserving and covariant");
  return r;
}

}  // namespace thermogap
