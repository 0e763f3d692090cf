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

// thermogap: Gibbs-preserving maps versus thermal operations.
//
// Exit codes: 0 success / feasible, 1 infeasible or failed demo,
// 2 input error, 3 undecided.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "thermogap/thermogap.hpp"

namespace {

using thermogap::io::json;
namespace io = thermogap::io;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitUndecided = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw thermogap::Error("file", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw thermogap::Error("file", "cannot write " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

thermogap::GibbsContext load_context(const std::string& hamiltonian_path, const std::string& beta) {
  return thermogap::make_gibbs_context(io::parse_hamiltonian(read_file(hamiltonian_path)),
                                       io::parse_scalar(beta));
}

std::vector<double> parse_alphas(const std::string& list) {
  std::vector<double> alphas;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double a = io::parse_scalar(item);
    if (a < 0.0) throw thermogap::Error("alphas", "Renyi orders must be nonnegative");
    alphas.push_back(a);
  }
  if (alphas.empty()) throw thermogap::Error("alphas", "empty alpha list");
  return alphas;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

//=========================================================================
// Subcommands
//=========================================================================

struct GibbsArgs {
  std::string hamiltonian, beta, output;
};

int cmd_gibbs(const GibbsArgs& a) {
  const auto ctx = load_context(a.hamiltonian, a.beta);
  write_output(a.output, io::emit_state(ctx.gibbs));
  return kExitOk;
}

struct ConstructArgs {
  std::string hamiltonian, beta, target, output;
  int level = -1;
};

int cmd_construct_gpm(const ConstructArgs& a) {
  const auto ctx = load_context(a.hamiltonian, a.beta);
  const auto target = io::parse_state(read_file(a.target));
  std::size_t level = 0;
  if (a.level < 0) {
    for (std::size_t i = 0; i < ctx.dim(); ++i)
      if (ctx.hamiltonian.is_top_level(i)) level = i;
  } else {
    level = static_cast<std::size_t>(a.level);
  }
  const auto ch = thermogap::gpm_from_top_level(ctx, level, target);
  const auto cptp = thermogap::check_cptp(ch);
  json j = io::channel_to_json(ch);
  j["level"] = level;
  j["sigma"] = io::matrix_to_json(thermogap::gpm_sigma(ctx, level, target));
  j["verification"] = json{{"cptp", io::cptp_to_json(cptp)},
                           {"gibbs_residual", thermogap::check_gibbs_preserving(ch, ctx)},
                           {"mapping_residual",
                            thermogap::frobenius_distance(
                                ch.apply(thermogap::DensityMatrix::basis(ctx.dim(), level).matrix()),
                                target.matrix())}};
  write_output(a.output, io::dump(j));
  std::cerr << "constructed Gibbs-preserving map from level " << level
            << ": psd_violation=" << cptp.psd_violation << " tp_violation=" << cptp.tp_violation
            << '\n';
  return kExitOk;
}

struct FeasibleArgs {
  std::string hamiltonian, beta, from, to, output, tol = "1e-9";
  bool covariant = false;
  std::size_t max_iter = 200000;
};

int cmd_feasible(const FeasibleArgs& a) {
  const auto ctx = load_context(a.hamiltonian, a.beta);
  const auto rho_in = io::parse_state(read_file(a.from));
  const auto rho_out = io::parse_state(read_file(a.to));
  const thermogap::SolveOptions opts{io::parse_scalar(a.tol), a.max_iter};
  if (!(opts.tol > 0.0)) throw thermogap::Error("tol", "tolerance must be positive");
  const auto problem = thermogap::build_problem(ctx, rho_in, rho_out, a.covariant);
  const auto report = thermogap::solve(problem, opts);
  json j = io::feasibility_to_json(report);
  j["covariant"] = a.covariant;
  j["tol"] = opts.tol;
  if (report.choi)
    j["verification"] =
        io::verification_to_json(thermogap::verify_solution(*report.choi, problem, 10.0 * opts.tol));
  write_output(a.output, io::dump(j));
  std::cerr << (a.covariant ? "covariant " : "") << "Gibbs-preserving transition: "
            << thermogap::to_string(report.status) << " after " << report.iterations
            << " iterations (gap " << report.gap << ")"
            << (report.note.empty() ? "" : "; " + report.note) << '\n';
  switch (report.status) {
    case thermogap::FeasibilityStatus::feasible: return kExitOk;
    case thermogap::FeasibilityStatus::infeasible: return kExitNegative;
    case thermogap::FeasibilityStatus::undecided: return kExitUndecided;
  }
  return kExitUndecided;
}

struct CurveArgs {
  std::string state, hamiltonian, beta, output;
};

int cmd_curve(const CurveArgs& a) {
  const auto ctx = load_context(a.hamiltonian, a.beta);
  const auto rho = io::parse_state(read_file(a.state));
  const auto pair = thermogap::classical_distribution(rho, ctx);
  const auto curve = thermogap::thermo_curve(pair.p, pair.g);
  if (ends_with(a.output, ".svg")) {
    write_output(a.output, io::curve_to_svg(curve));
  } else if (ends_with(a.output, ".csv")) {
    write_output(a.output, io::curve_to_csv(curve));
  } else {
    throw thermogap::Error("output", "output must end in .csv or .svg");
  }
  if (thermogap::coherence_l1(rho, ctx.hamiltonian) > 0.0)
    std::cerr << "note: state has energy coherence; the curve describes its dephased part\n";
  return kExitOk;
}

struct MonotonesArgs {
  std::string from, to, hamiltonian, beta, output, alphas = "0,0.5,1,2,inf", format = "json";
};

int cmd_monotones(const MonotonesArgs& a) {
  const auto ctx = load_context(a.hamiltonian, a.beta);
  const auto rho_in = io::parse_state(read_file(a.from));
  const auto rho_out = io::parse_state(read_file(a.to));
  const auto alphas = parse_alphas(a.alphas);
  const auto report = thermogap::second_laws_report(rho_in, rho_out, ctx, alphas);
  write_output(a.output, a.format == "csv" ? io::monotones_to_csv(report)
                                           : io::dump(io::monotones_to_json(report)));
  std::cerr << (report.all_satisfied() ? "all monotones satisfied\n"
                                       : "some monotone is violated\n");
  return kExitOk;
}

struct DemoArgs {
  std::string beta_delta_e = "ln2", output;
  std::size_t seeds = 1000;
};

json demo_to_json(const thermogap::DemoGapReport& r) {
  json j{{"beta_delta_e", r.beta_delta_e},
         {"construction",
          json{{"cptp", io::cptp_to_json(r.construction_cptp)},
               {"gibbs_residual", r.construction_gibbs_residual},
               {"sigma", io::matrix_to_json(r.sigma)},
               {"output_error", r.output_error},
               {"fidelity_with_plus", r.output_fidelity},
               {"covariance_residual", r.covariance_residual}}},
         {"feasibility", json{{"gibbs_preserving", io::feasibility_to_json(r.plain)},
                              {"covariant", io::feasibility_to_json(r.covariant)}}},
         {"monotones", io::monotones_to_json(r.monotones)},
         {"thermal_sampler", json{{"samples", r.sampler.samples},
                                  {"max_output_coherence", r.sampler.max_output_coherence},
                                  {"max_gibbs_residual", r.sampler.max_gibbs_residual},
                                  {"max_covariance_residual", r.sampler.max_covariance_residual}}},
         {"passed", r.passed()}};
  if (r.plain_verification)
    j["feasibility"]["gibbs_preserving"]["verification"] = io::verification_to_json(*r.plain_verification);
  if (r.failed) j["failed"] = *r.failed;
  return j;
}

int cmd_demo_gap(const DemoArgs& a) {
  std::uint64_t seed = thermogap::kDefaultSamplerSeed;
  if (const char* env = std::getenv("THERMOGAP_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      throw thermogap::Error("THERMOGAP_SEED", "must be a nonnegative integer");
    }
  }
  const auto r = thermogap::run_demo_gap(io::parse_scalar(a.beta_delta_e), a.seeds, seed);
  write_output(a.output, io::dump(demo_to_json(r)));

  auto& s = std::cerr;
  s << "|1> -> |+> on a qubit, beta*dE = " << r.beta_delta_e << "\n";
  s << "  constructed map: psd_violation " << r.construction_cptp.psd_violation
    << ", tp_violation " << r.construction_cptp.tp_violation << ", Gibbs residual "
    << r.construction_gibbs_residual << ", <+|Phi(|1><1|)|+> = " << r.output_fidelity << "\n";
  s << "  covariance residual of the map: " << r.covariance_residual << "\n";
  s << "  Gibbs-preserving feasibility: " << thermogap::to_string(r.plain.status) << "\n";
  s << "  covariant feasibility:        " << thermogap::to_string(r.covariant.status)
    << " (gap " << r.covariant.gap << ")\n";
  s << "  Renyi monotones: " << (r.monotones.all_satisfied() ? "all satisfied" : "violated") << "\n";
  s << "  thermal operations sampled: " << r.sampler.samples << ", max output coherence "
    << r.sampler.max_output_coherence << "\n";
  if (r.failed) {
    s << "FAILED: " << *r.failed << "\n";
    return kExitNegative;
  }
  s << "gap reproduced: Gibbs-preserving maps create coherence that thermal operations cannot\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermogap: Gibbs-preserving maps versus thermal operations"};
  app.require_subcommand(1);

  GibbsArgs gibbs;
  auto* sc_gibbs = app.add_subcommand("gibbs", "Gibbs state of a Hamiltonian");
  sc_gibbs->add_option("--hamiltonian,-H", gibbs.hamiltonian, "Hamiltonian JSON")->required();
  sc_gibbs->add_option("--beta,-b", gibbs.beta, "inverse temperature (number or ln<number>)")->required();
  sc_gibbs->add_option("-o,--output", gibbs.output, "output path (default stdout)");

  ConstructArgs construct;
  auto* sc_construct = app.add_subcommand("construct-gpm", "Gibbs-preserving map from the top level to a target");
  sc_construct->add_option("--hamiltonian,-H", construct.hamiltonian, "Hamiltonian JSON")->required();
  sc_construct->add_option("--beta,-b", construct.beta, "inverse temperature")->required();
  sc_construct->add_option("--target,-t", construct.target, "target state JSON")->required();
  sc_construct->add_option("--level,-l", construct.level, "source level (default: top level)");
  sc_construct->add_option("-o,--output", construct.output, "output path (default stdout)");

  FeasibleArgs feasible;
  auto* sc_feasible = app.add_subcommand("feasible", "decide a transition under Gibbs-preserving maps");
  sc_feasible->add_option("--hamiltonian,-H", feasible.hamiltonian, "Hamiltonian JSON")->required();
  sc_feasible->add_option("--beta,-b", feasible.beta, "inverse temperature")->required();
  sc_feasible->add_option("--from", feasible.from, "initial state JSON")->required();
  sc_feasible->add_option("--to", feasible.to, "final state JSON")->required();
  sc_feasible->add_flag("--covariant", feasible.covariant, "also require time covariance");
  sc_feasible->add_option("--tol", feasible.tol, "solver tolerance");
  sc_feasible->add_option("--max-iter", feasible.max_iter, "iteration limit");
  sc_feasible->add_option("-o,--output", feasible.output, "output path (default stdout)");

  CurveArgs curve;
  auto* sc_curve = app.add_subcommand("curve", "thermo-majorization curve of a state");
  sc_curve->add_option("--state,-s", curve.state, "state JSON")->required();
  sc_curve->add_option("--hamiltonian,-H", curve.hamiltonian, "Hamiltonian JSON")->required();
  sc_curve->add_option("--beta,-b", curve.beta, "inverse temperature")->required();
  sc_curve->add_option("-o,--output", curve.output, "out.csv or out.svg")->required();

  MonotonesArgs monotones;
  auto* sc_monotones = app.add_subcommand("monotones", "Renyi second-law report for a transition");
  sc_monotones->add_option("--from", monotones.from, "initial state JSON")->required();
  sc_monotones->add_option("--to", monotones.to, "final state JSON")->required();
  sc_monotones->add_option("--hamiltonian,-H", monotones.hamiltonian, "Hamiltonian JSON")->required();
  sc_monotones->add_option("--beta,-b", monotones.beta, "inverse temperature")->required();
  sc_monotones->add_option("--alphas", monotones.alphas, "comma-separated Renyi orders");
  sc_monotones->add_option("--format", monotones.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sc_monotones->add_option("-o,--output", monotones.output, "output path (default stdout)");

  DemoArgs demo;
  auto* sc_demo = app.add_subcommand("demo-gap", "reproduce the Gibbs-preserving / thermal-operation gap");
  sc_demo->add_option("--beta-deltaE", demo.beta_delta_e, "beta times the qubit gap");
  sc_demo->add_option("--seeds", demo.seeds, "number of sampled thermal operations");
  sc_demo->add_option("-o,--output", demo.output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*sc_gibbs) return cmd_gibbs(gibbs);
    if (*sc_construct) return cmd_construct_gpm(construct);
    if (*sc_feasible) return cmd_feasible(feasible);
    if (*sc_curve) return cmd_curve(curve);
    if (*sc_monotones) return cmd_monotones(monotones);
    if (*sc_demo) return cmd_demo_gap(demo);
  } catch (const thermogap::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
