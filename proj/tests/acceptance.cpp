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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. An optional argument selects a single
// criterion by number.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "test_helpers.hpp"
#include "thermogap/thermogap.hpp"

namespace {

using namespace thermogap;
using testing::plus_state;

constexpr double kLn2 = std::numbers::ln2;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail << "FAILED: " << what << "; ";
    }
  }
};

GibbsContext qubit(double beta_delta_e) {
  return make_gibbs_context(Hamiltonian({0.0, 1.0}), beta_delta_e);
}

std::size_t top_level(const GibbsContext& ctx) {
  std::size_t top = 0;
  for (std::size_t i = 0; i < ctx.dim(); ++i)
    if (ctx.hamiltonian.is_top_level(i)) top = i;
  return top;
}

DensityMatrix random_target(std::size_t d, CounterRng& rng, int k) {
  return k % 2 == 0 ? testing::random_pure_state(d, rng) : testing::random_state(d, rng);
}

double tp_residual(const Channel& ch) {
  return frobenius_distance(partial_trace(ch.choi(), Subsystem::B, ch.d_in(), ch.d_out()),
                            ComplexMatrix::identity(ch.d_in()));
}

//-------------------------------------------------------------------------

void criterion1(Outcome& o) {
  const auto ctx = make_gibbs_context(Hamiltonian({0.0, kLn2}), 1.0);
  const auto ch = gpm_from_excited(ctx, plus_state());
  const double tp = tp_residual(ch);
  const double lmin = min_eigenvalue(ch.choi());
  const double gp = frobenius_distance(ch.apply(ctx.gibbs.matrix()), ctx.gibbs.matrix());
  const double map = frobenius_distance(ch.apply(DensityMatrix::basis(2, 1).matrix()), plus_state().matrix());
  const ComplexMatrix expected{{0.75, -0.25}, {-0.25, 0.25}};
  const double sigma_err = (gpm_sigma(ctx, 1, plus_state()) - expected).max_abs();
  // The excited-level block of the Choi matrix is the target, the ground block is sigma.
  ComplexMatrix ground_block(2, 2);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) ground_block(a, b) = ch.choi()(a, b);
  const double block_err = (ground_block - expected).max_abs();
  o.require(tp <= 1e-9, "trace preservation");
  o.require(lmin >= -1e-9, "Choi positivity");
  o.require(gp <= 1e-9, "Gibbs preservation");
  o.require(map <= 1e-9, "|1> -> |+>");
  o.require(sigma_err <= 1e-12 && block_err <= 1e-12, "sigma");
  o.detail << "tp=" << tp << " lmin=" << lmin << " gp=" << gp << " map=" << map
           << " sigma_err=" << std::max(sigma_err, block_err);
}

void criterion2(Outcome& o) {
  CounterRng rng(2002);
  double worst = INFINITY;
  for (int k = 0; k < 100; ++k) {
    const double bde = k == 0 ? 0.0 : k == 1 ? 5.0 : 5.0 * rng.uniform();
    const auto ctx = qubit(bde);
    const auto sigma = gpm_sigma(ctx, 1, random_target(2, rng, k));
    worst = std::min(worst, min_eigenvalue(sigma));
  }
  o.require(worst >= -1e-10, "sigma positivity");
  o.detail << "100 targets, min lambda_min(sigma)=" << worst;
}

void criterion3(Outcome& o) {
  CounterRng rng(3003);
  int checked = 0, rejected = 0;
  double worst_psd = 0.0, worst_tp = 0.0, worst_gp = 0.0;
  for (std::size_t d : {3u, 4u}) {
    for (int k = 0; k < 50; ++k) {
      const auto ctx = testing::random_context(d, rng, 4.0);
      const auto target = random_target(d, rng, k);
      const auto ch = gpm_from_top_level(ctx, top_level(ctx), target);
      const auto cptp = check_cptp(ch, 1e-9);
      worst_psd = std::max(worst_psd, cptp.psd_violation);
      worst_tp = std::max(worst_tp, cptp.tp_violation);
      worst_gp = std::max(worst_gp, check_gibbs_preserving(ch, ctx));
      ++checked;
      for (std::size_t level = 0; level < d; ++level) {
        if (ctx.hamiltonian.is_top_level(level)) continue;
        try {
          gpm_from_top_level(ctx, level, target);
          o.require(false, "non-maximal level accepted");
        } catch (const Error& e) {
          o.require(e.check() == "level", "wrong rejection reason");
          ++rejected;
        }
      }
    }
  }
  o.require(worst_psd <= 1e-9 && worst_tp <= 1e-9, "CPTP");
  o.require(worst_gp <= 1e-9, "Gibbs preservation");
  o.require(rejected == 50 * 2 + 50 * 3, "rejection count");
  o.detail << checked << " channels, max psd=" << worst_psd << " tp=" << worst_tp << " gp=" << worst_gp
           << ", " << rejected << " non-maximal levels rejected";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(THERMOGAP_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion4(Outcome& o) {
  const auto ctx = make_gibbs_context(Hamiltonian({0.0, kLn2}), 1.0);
  const auto plain_problem = build_problem(ctx, DensityMatrix::basis(2, 1), plus_state(), false);
  const auto plain = solve(plain_problem);
  const auto cov = solve(build_problem(ctx, DensityMatrix::basis(2, 1), plus_state(), true));
  o.require(plain.status == FeasibilityStatus::feasible, "plain run feasible");
  o.require(plain.choi && verify_solution(*plain.choi, plain_problem, 1e-8).passed(), "plain certificate");
  o.require(cov.status == FeasibilityStatus::infeasible, "covariant run infeasible");
  o.require(cov.gap >= 0.1, "covariant gap >= 0.1");
  const int code = run_cli("demo-gap");
  o.require(code == 0, "demo-gap exit code");
  o.detail << "plain=" << to_string(plain.status) << " (" << plain.iterations << " it, gap " << plain.gap
           << "), covariant=" << to_string(cov.status) << " (gap " << cov.gap << "), demo-gap exit "
           << code;
}

void criterion5(Outcome& o) {
  CounterRng rng(5005);
  int instances = 0, agree = 0, feasible = 0;
  for (std::size_t d : {2u, 3u}) {
    for (int k = 0; k < 200; ++k) {
      const auto ctx = testing::random_context(d, rng);
      const auto p = testing::random_simplex(d, rng), q = testing::random_simplex(d, rng);
      const bool curves = thermo_majorizes(p, q, ctx.populations);
      const auto oracle = gibbs_stochastic_feasible(p, q, ctx.populations, 1e-8);
      const bool stochastic = oracle.feasible;
      const auto r = solve(build_problem(ctx, testing::diagonal_state(p), testing::diagonal_state(q), false),
                           {1e-8, 200000});
      const bool quantum = r.status == FeasibilityStatus::feasible;
      ++instances;
      feasible += curves;
      const bool decided = oracle.decided && r.status != FeasibilityStatus::undecided;
      if (decided && curves == stochastic && stochastic == quantum) {
        ++agree;
      } else {
        o.detail << "[disagree d=" << d << " k=" << k << " curves=" << curves << " stochastic=" << stochastic
                 << " quantum=" << to_string(r.status) << " note=" << r.note << "] ";
      }
    }
  }
  o.require(agree == instances, "three-way agreement");
  o.detail << agree << "/" << instances << " agree (" << feasible << " feasible)";
}

void criterion6(Outcome& o) {
  const auto ctx = qubit(kLn2);
  double max_coh = 0.0, max_gp = 0.0, max_cov = 0.0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto ch = sample_thermal_operation(ctx, ctx, kDefaultSamplerSeed + k);
    max_coh = std::max(max_coh, coherence_l1(apply(ch, DensityMatrix::basis(2, 1)), ctx.hamiltonian));
    max_gp = std::max(max_gp, check_gibbs_preserving(ch, ctx));
    max_cov = std::max(max_cov, check_covariant(ch, ctx.hamiltonian));
  }
  o.require(max_coh <= 1e-12, "coherence");
  o.require(max_gp <= 1e-9, "Gibbs preservation");
  o.require(max_cov <= 1e-9, "covariance");
  o.detail << "1000 unitaries, max coherence=" << max_coh << " gp=" << max_gp << " cov=" << max_cov;
}

void criterion7(Outcome& o) {
  const auto ctx = make_gibbs_context(Hamiltonian({0.0, kLn2}), 1.0);
  const auto report = second_laws_report(DensityMatrix::basis(2, 1), plus_state(), ctx,
                                         std::vector<double>{0.0, 0.5, 1.0, 2.0, kInf});
  o.require(report.all_satisfied(), "all rows satisfied");
  const MonotoneRow* dinf = nullptr;
  for (const auto& row : report.rows)
    if (row.name == "dmax_quantum") dinf = &row;
  o.require(dinf != nullptr, "D_inf row present");
  if (dinf != nullptr) {
    o.require(std::abs(dinf->value_in - std::log2(3.0)) <= 1e-9, "D_inf(in) = log2 3");
    o.require(std::abs(dinf->value_out - std::log2(9.0 / 4.0)) <= 1e-9, "D_inf(out) = log2 9/4");
    o.detail << "D_inf " << dinf->value_in << " >= " << dinf->value_out << ", ";
  }
  const auto cov = solve(build_problem(ctx, DensityMatrix::basis(2, 1), plus_state(), true));
  o.require(cov.status == FeasibilityStatus::infeasible, "covariant run infeasible");
  o.detail << report.rows.size() << " rows satisfied, covariant " << to_string(cov.status);
}

void criterion8(Outcome& o) {
  CounterRng rng(8008);
  struct Family {
    std::string name;
    std::function<std::pair<Channel, GibbsContext>(CounterRng&, int)> make;
  };
  const std::vector<Family> families{
      {"gpm_from_excited",
       [](CounterRng& r, int k) {
         const auto ctx = qubit(5.0 * r.uniform());
         return std::pair{gpm_from_excited(ctx, random_target(2, r, k)), ctx};
       }},
      {"gpm_from_top_level",
       [](CounterRng& r, int k) {
         const auto ctx = testing::random_context(3 + static_cast<std::size_t>(k % 2), r);
         return std::pair{gpm_from_top_level(ctx, top_level(ctx), random_target(ctx.dim(), r, k)), ctx};
       }},
      {"thermal_operation",
       [](CounterRng& r, int k) {
         const auto ctx = qubit(3.0 * r.uniform());
         return std::pair{sample_thermal_operation(ctx, ctx, 9000 + static_cast<std::uint64_t>(k)), ctx};
       }},
      {"gibbs_replacement",
       [](CounterRng& r, int) {
         const auto ctx = testing::random_context(3, r);
         return std::pair{Channel::replacement(3, ctx.gibbs), ctx};
       }},
      {"determinant_state",
       [](CounterRng&, int) {
         return std::pair{determinant_state_channel(),
                          make_gibbs_context(Hamiltonian({0.0, 0.0, 0.0}), 1.0)};
       }},
  };
  double worst = -INFINITY;
  int pairs = 0;
  for (const auto& fam : families) {
    for (int k = 0; k < 100; ++k) {
      const auto [ch, ctx] = fam.make(rng, k);
      const auto rho = random_target(ctx.dim(), rng, k / 2);
      const auto out = apply(ch, rho);
      const double d_rel = relative_entropy_quantum(out, ctx.gibbs) - relative_entropy_quantum(rho, ctx.gibbs);
      const double d_max = dmax(out, ctx.gibbs) - dmax(rho, ctx.gibbs);
      worst = std::max({worst, d_rel, d_max});
      ++pairs;
      o.require(d_rel <= 1e-9 && d_max <= 1e-9, fam.name + " increased a divergence");
    }
  }
  o.detail << families.size() << " families, " << pairs << " inputs, max increase=" << worst;
}

void criterion9(Outcome& o) {
  const auto ch = determinant_state_channel();
  const auto cptp = check_cptp(ch, 1e-10);
  const auto mixed = ComplexMatrix::identity(3) * (1.0 / 3.0);
  const double err = frobenius_distance(ch.apply(mixed), mixed);
  o.require(cptp.passed(), "CPTP at 1e-10");
  o.require(err <= 1e-12, "unital");
  o.detail << "psd=" << cptp.psd_violation << " tp=" << cptp.tp_violation << " |Phi(1/3)-1/3|=" << err;
}

}  // namespace

int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    void (*fn)(Outcome&);
  };
  const std::vector<Criterion> criteria{
      {1, "counterexample construction", 1.0, criterion1},
      {2, "positivity of sigma", 5.0, criterion2},
      {3, "n-level generalization", 5.0, criterion3},
      {4, "gap demonstration", 60.0, criterion4},
      {5, "classical equivalence", 600.0, criterion5},
      {6, "no coherence from thermal operations", 60.0, criterion6},
      {7, "second laws pass, covariant transition fails", 5.0, criterion7},
      {8, "data processing", 60.0, criterion8},
      {9, "determinant-state channel", 1.0, criterion9},
  };
  int failures = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.budget_s, "runtime budget");
    if (!o.ok) ++failures;
    std::printf("%s criterion %d (%s): %s [%.3f s / %.0f s]\n", o.ok ? "PASS" : "FAIL", c.id, c.title,
                o.detail.str().c_str(), secs, c.budget_s);
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::printf("FAIL: no criterion numbered %d\n", only);
    return 2;
  }
  std::printf("%s: %d/%d criteria passed\n", failures == 0 ? "PASS" : "FAIL", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
