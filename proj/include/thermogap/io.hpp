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
 * File formats.
 *
 *   state        {"dim": d, "matrix": [[[re, im], ...], ...]}   (row-major)
 *   hamiltonian  {"energies": [E_0, ..., E_{d-1}]}
 *   channel      {"d_in": n, "d_out": m, "choi": <matrix as in state>}
 *   curve CSV    header "x,y", one breakpoint per line
 *   curve SVG    512x512 viewBox, state polyline and Gibbs diagonal
 *
 * Every float is written with 17 significant digits, which round-trips
 * IEEE doubles exactly. Infinite divergences are written as the string
 * "inf" in JSON and as "inf" in CSV.
 */

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "thermogap/channels.hpp"
#include "thermogap/error.hpp"
#include "thermogap/feasibility.hpp"
#include "thermogap/linalg.hpp"
#include "thermogap/majorization.hpp"
#include "thermogap/monotones.hpp"
#include "thermogap/thermo.hpp"

namespace thermogap::io {

using json = nlohmann::json;

inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Serializes with %.17g floats; structure and string escaping follow nlohmann.
inline void write_json(std::ostream& os, const json& j, int indent = 2, int depth = 0) {
  const auto pad = [&](int level) {
    if (indent >= 0) os << '\n' << std::string(static_cast<std::size_t>(level * indent), ' ');
  };
  // Arrays nested at most two deep (matrix rows of [re, im]) stay on one line.
  const auto flat = [](const json& a) {
    for (const auto& e : a) {
      if (e.is_object()) return false;
      if (e.is_array())
        for (const auto& f : e)
          if (f.is_structured()) return false;
    }
    return true;
  };
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        os << json(it.key()).dump() << (indent >= 0 ? ": " : ":");
        write_json(os, it.value(), indent, depth + 1);
      }
      if (!j.empty()) pad(depth);
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      const bool one_line = flat(j) || indent < 0;
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << (one_line ? ", " : ",");
        if (!one_line) pad(depth + 1);
        write_json(os, j[k], one_line ? -1 : indent, depth + 1);
      }
      if (!one_line && !j.empty()) pad(depth);
      os << ']';
      break;
    }
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      break;
    default:
      os << j.dump();
  }
}

inline std::string dump(const json& j, int indent = 2) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

inline json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error("json", std::string("malformed JSON: ") + e.what());
  }
}

/// "inf" for infinities, a number otherwise.
inline json extended_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double parse_extended_real(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    if (j == "inf") return kInf;
    if (j == "-inf") return -kInf;
  }
  throw Error(field, "expected a number or \"inf\"");
}

//=========================================================================
// Matrices, states, Hamiltonians, channels
//=========================================================================

inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const json& j, std::size_t dim, const std::string& field) {
  if (!j.is_array() || j.size() != dim)
    throw Error(field, "expected " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != dim)
      throw Error(field, "row " + std::to_string(r) + " must have " + std::to_string(dim) +
                             " entries");
    for (std::size_t c = 0; c < dim; ++c) {
      const json& z = row[c];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw Error(field, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                               ") must be [re, im]");
      m(r, c) = Complex{z[0].get<double>(), z[1].get<double>()};
    }
  }
  return m;
}

inline std::size_t positive_dim(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains(field)) throw Error(field, "missing field");
  const json& v = j.at(field);
  if (!v.is_number_integer() || v.get<long long>() <= 0)
    throw Error(field, "must be a positive integer");
  return v.get<std::size_t>();
}

inline json state_to_json(const DensityMatrix& rho) {
  return json{{"dim", rho.dim()}, {"matrix", matrix_to_json(rho.matrix())}};
}

inline DensityMatrix state_from_json(const json& j) {
  const std::size_t dim = positive_dim(j, "dim");
  if (!j.contains("matrix")) throw Error("matrix", "missing field");
  return DensityMatrix(matrix_from_json(j.at("matrix"), dim, "matrix"));
}

inline DensityMatrix parse_state(std::string_view text) { return state_from_json(parse_json_text(text)); }
inline std::string emit_state(const DensityMatrix& rho) { return dump(state_to_json(rho)); }

inline json hamiltonian_to_json(const Hamiltonian& h) { return json{{"energies", h.energies()}}; }

inline Hamiltonian hamiltonian_from_json(const json& j) {
  if (!j.is_object() || !j.contains("energies")) throw Error("energies", "missing field");
  const json& e = j.at("energies");
  if (!e.is_array()) throw Error("energies", "must be an array of numbers");
  std::vector<double> energies;
  for (const auto& x : e) {
    if (!x.is_number()) throw Error("energies", "must be an array of numbers");
    energies.push_back(x.get<double>());
  }
  return Hamiltonian(std::move(energies));
}

inline Hamiltonian parse_hamiltonian(std::string_view text) {
  return hamiltonian_from_json(parse_json_text(text));
}
inline std::string emit_hamiltonian(const Hamiltonian& h) { return dump(hamiltonian_to_json(h)); }

inline json channel_to_json(const Channel& ch) {
  return json{{"d_in", ch.d_in()}, {"d_out", ch.d_out()}, {"choi", matrix_to_json(ch.choi())}};
}

inline Channel channel_from_json(const json& j) {
  const std::size_t d_in = positive_dim(j, "d_in");
  const std::size_t d_out = positive_dim(j, "d_out");
  if (!j.contains("choi")) throw Error("choi", "missing field");
  return Channel(matrix_from_json(j.at("choi"), d_in * d_out, "choi"), d_in, d_out);
}

inline Channel parse_channel(std::string_view text) { return channel_from_json(parse_json_text(text)); }
inline std::string emit_channel(const Channel& ch) { return dump(channel_to_json(ch)); }

//=========================================================================
// Reports
//=========================================================================

inline json cptp_to_json(const CptpReport& r) {
  return json{{"psd_violation", r.psd_violation}, {"tp_violation", r.tp_violation},
              {"tol", r.tol}, {"passed", r.passed()}};
}

inline json verification_to_json(const VerificationReport& v) {
  json j{{"cptp", cptp_to_json(v.cptp)},
         {"gibbs_residual", v.gibbs_residual},
         {"mapping_residual", v.mapping_residual},
         {"tol", v.tol},
         {"passed", v.passed()}};
  if (v.covariance_residual) j["covariance_residual"] = *v.covariance_residual;
  return j;
}

inline json feasibility_to_json(const FeasibilityReport& r) {
  json j{{"status", to_string(r.status)},
         {"residual_affine", r.residual_affine},
         {"residual_psd", r.residual_psd},
         {"gap", r.gap},
         {"iterations", r.iterations},
         {"note", r.note}};
  if (r.choi) {
    const std::size_t d = static_cast<std::size_t>(std::lround(std::sqrt(double(r.choi->rows()))));
    j["channel"] = json{{"d_in", d}, {"d_out", d}, {"choi", matrix_to_json(*r.choi)}};
  }
  return j;
}

inline json monotones_to_json(const MonotoneReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back(json{{"name", r.name},
                        {"alpha", r.alpha ? extended_real(*r.alpha) : json(nullptr)},
                        {"value_in", extended_real(r.value_in)},
                        {"value_out", extended_real(r.value_out)},
                        {"satisfied", r.satisfied()}});
  }
  return json{{"rows", rows}, {"all_satisfied", report.all_satisfied()}};
}

inline std::string monotones_to_csv(const MonotoneReport& report) {
  std::string out = "name,alpha,value_in,value_out,satisfied\n";
  for (const auto& r : report.rows) {
    out += r.name + "," + (r.alpha ? format_double(*r.alpha) : std::string()) + "," +
           format_double(r.value_in) + "," + format_double(r.value_out) + "," +
           (r.satisfied() ? "true" : "false") + "\n";
  }
  return out;
}

//=========================================================================
// Curves
//=========================================================================

inline std::string curve_to_csv(const ThermoCurve& curve) {
  std::string out = "x,y\n";
  for (const auto& pt : curve.breakpoints) out += format_double(pt.x) + "," + format_double(pt.y) + "\n";
  return out;
}

inline ThermoCurve curve_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "x,y") throw Error("csv", "expected header x,y");
  ThermoCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("csv", "malformed line: " + line);
    curve.breakpoints.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return curve;
}

/**
 * The polylines live in unit coordinates, mapped onto the 512x512 canvas by
 * a transform, so the `points` attribute of the state curve is exactly the
 * breakpoint list.
 */
inline std::string curve_to_svg(const ThermoCurve& curve) {
  std::string pts;
  for (const auto& pt : curve.breakpoints) {
    if (!pts.empty()) pts += ' ';
    pts += format_double(pt.x) + "," + format_double(pt.y);
  }
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 512 512\" width=\"512\" height=\"512\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"512\" height=\"512\" fill=\"white\"/>\n";
  svg += "  <g transform=\"translate(0,512) scale(512,-512)\" fill=\"none\" stroke-width=\"0.004\">\n";
  svg += "    <polyline id=\"gibbs\" stroke=\"gray\" points=\"0,0 1,1\"/>\n";
  svg += "    <polyline id=\"state\" stroke=\"black\" points=\"" + pts + "\"/>\n";
  svg += "  </g>\n</svg>\n";
  return svg;
}

/// Reads back the breakpoints of the state polyline of curve_to_svg.
inline ThermoCurve curve_from_svg(std::string_view svg) {
  const std::string_view marker = "id=\"state\"";
  auto pos = svg.find(marker);
  if (pos == std::string_view::npos) throw Error("svg", "no state polyline");
  pos = svg.find("points=\"", pos);
  if (pos == std::string_view::npos) throw Error("svg", "state polyline has no points");
  pos += 8;
  const auto end = svg.find('"', pos);
  std::istringstream in{std::string(svg.substr(pos, end - pos))};
  ThermoCurve curve;
  std::string token;
  while (in >> token) {
    const auto comma = token.find(',');
    if (comma == std::string::npos) throw Error("svg", "malformed point: " + token);
    curve.breakpoints.push_back({std::stod(token.substr(0, comma)), std::stod(token.substr(comma + 1))});
  }
  return curve;
}

//=========================================================================
// Scalars on the command line
//=========================================================================

/// Tiny grammar: <number> | "ln" <number> (optional space), e.g. "ln2".
inline double parse_scalar(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  bool log = false;
  if (s.rfind("ln", 0) == 0) {
    log = true;
    s.erase(0, 2);
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  }
  if (s == "inf" && !log) return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error("number", "cannot parse \"" + std::string(text) + "\"");
  }
  if (used != s.size() || !std::isfinite(v)) throw Error("number", "cannot parse \"" + std::string(text) + "\"");
  if (log) {
    if (v <= 0.0) throw Error("number", "logarithm of a nonpositive number");
    return std::log(v);
  }
  return v;
}

}  // namespace thermogap::io
