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
 * Physical objects: diagonal Hamiltonians, density matrices, Gibbs states,
 * energy-basis dephasing and l1 coherence.
 *
 * Hamiltonians are always diagonal in the computational basis. Inverse
 * temperature and energies are stored separately; the physics only ever
 * uses the products beta * E_i.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "thermogap/error.hpp"
#include "thermogap/linalg.hpp"

namespace thermogap {

inline constexpr double kStateTol = 1e-10;
inline constexpr double kDegeneracyTol = 1e-9;

/// log base 2; every reported divergence is in bits.
inline double log2_bits(double x) { return std::log2(x); }

inline bool energies_degenerate(double e1, double e2) {
  return std::abs(e1 - e2) <= kDegeneracyTol * std::max({1.0, std::abs(e1), std::abs(e2)});
}

//=========================================================================
// Hamiltonian
//=========================================================================

class Hamiltonian {
 public:
  explicit Hamiltonian(std::vector<double> energies) : energies_(std::move(energies)) {
    if (energies_.size() < 2) throw Error("dimension", "Hamiltonian needs at least 2 levels");
    for (double e : energies_)
      if (!std::isfinite(e)) throw Error("energies", "energies must be finite");
  }

  std::size_t dim() const noexcept { return energies_.size(); }
  const std::vector<double>& energies() const noexcept { return energies_; }
  double energy(std::size_t i) const { return energies_.at(i); }
  double max_energy() const { return *std::max_element(energies_.begin(), energies_.end()); }

  bool is_top_level(std::size_t n) const {
    return n < dim() && energies_degenerate(energies_[n], max_energy());
  }

  bool nondegenerate() const {
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = i + 1; j < dim(); ++j)
        if (energies_degenerate(energies_[i], energies_[j])) return false;
    return true;
  }

  /// Groups of level indices sharing an energy, in order of first index.
  std::vector<std::vector<std::size_t>> energy_blocks() const {
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < dim(); ++i) {
      auto it = std::find_if(blocks.begin(), blocks.end(), [&](const auto& b) {
        return energies_degenerate(energies_[b.front()], energies_[i]);
      });
      if (it == blocks.end())
        blocks.push_back({i});
      else
        it->push_back(i);
    }
    return blocks;
  }

  ComplexMatrix matrix() const { return ComplexMatrix::diagonal(energies_); }

 private:
  std::vector<double> energies_;
};

//=========================================================================
// DensityMatrix
//=========================================================================

/// Hermitian, unit trace, PSD (each within kStateTol).
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m) : m_(validate(m)) {}

  static DensityMatrix pure(std::span<const Complex> psi) {
    double n = 0.0;
    for (const auto& z : psi) n += std::norm(z);
    if (n == 0.0) throw Error("normalization", "zero state vector");
    return DensityMatrix(ComplexMatrix::outer(psi) * (1.0 / n));
  }

  static DensityMatrix basis(std::size_t dim, std::size_t k) {
    ComplexMatrix m(dim, dim);
    m(k, k) = 1.0;
    return DensityMatrix(m);
  }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    return DensityMatrix(ComplexMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
  }

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  static ComplexMatrix validate(const ComplexMatrix& m) {
    if (!m.is_square() || m.rows() == 0) throw Error("dimension", "state must be square");
    if (!m.all_finite()) throw Error("finite", "state has NaN or Inf entries");
    if (m.hermiticity_defect() > kStateTol)
      throw Error("hermiticity", "state is not Hermitian");
    ComplexMatrix h = hermitize(m);
    const double tr = h.trace().real();
    if (std::abs(tr - 1.0) > kStateTol)
      throw Error("trace", "state trace is " + std::to_string(tr) + ", expected 1");
    const double lmin = min_eigenvalue(h);
    if (lmin < -kStateTol)
      throw Error("positivity", "state has negative eigenvalue " + std::to_string(lmin));
    return h;
  }

  ComplexMatrix m_;
};

//=========================================================================
// GibbsContext
//=========================================================================

struct GibbsContext {
  Hamiltonian hamiltonian;
  double beta;
  double partition_function;  // Z = sum_i exp(-beta E_i)
  std::vector<double> populations;
  DensityMatrix gibbs;

  std::size_t dim() const noexcept { return hamiltonian.dim(); }
};

/// Populations are computed after shifting by min_i beta E_i, so large
/// beta * E never overflows; Z is reported unshifted.
inline GibbsContext make_gibbs_context(const Hamiltonian& h, double beta) {
  if (!std::isfinite(beta)) throw Error("beta", "inverse temperature must be finite");
  if (beta < 0.0) throw Error("beta", "inverse temperature must be nonnegative");
  const std::size_t d = h.dim();
  double shift = INFINITY;
  for (double e : h.energies()) shift = std::min(shift, beta * e);
  std::vector<double> w(d);
  double z_shifted = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    w[i] = std::exp(-(beta * h.energy(i) - shift));
    z_shifted += w[i];
  }
  for (auto& x : w) x /= z_shifted;
  const double z = z_shifted * std::exp(-shift);
  return GibbsContext{h, beta, z, w, DensityMatrix(ComplexMatrix::diagonal(w))};
}

//=========================================================================
// Dephasing and coherence
//=========================================================================

inline void require_same_dim(const DensityMatrix& rho, const Hamiltonian& h) {
  if (rho.dim() != h.dim())
    throw Error("dimension", "state dimension " + std::to_string(rho.dim()) +
                                 " does not match Hamiltonian dimension " +
                                 std::to_string(h.dim()));
}

/// Removes matrix elements between distinct energy eigenspaces; entries
/// inside a degenerate block are kept.
inline DensityMatrix dephase(const DensityMatrix& rho, const Hamiltonian& h) {
  require_same_dim(rho, h);
  ComplexMatrix m = rho.matrix();
  for (std::size_t i = 0; i < h.dim(); ++i)
    for (std::size_t j = 0; j < h.dim(); ++j)
      if (!energies_degenerate(h.energy(i), h.energy(j))) m(i, j) = 0.0;
  return DensityMatrix(m);
}

inline double coherence_l1(const DensityMatrix& rho, const Hamiltonian& h) {
  require_same_dim(rho, h);
  double s = 0.0;
  for (std::size_t i = 0; i < h.dim(); ++i)
    for (std::size_t j = 0; j < h.dim(); ++j)
      if (!energies_degenerate(h.energy(i), h.energy(j))) s += std::abs(rho(i, j));
  return s;
}

/// Classical data of the dephased state: eigenvalues of rho inside each
/// energy block paired with the (block-constant) Gibbs weights. For a
/// nondegenerate H this is just (diag rho, populations).
struct ClassicalPair {
  std::vector<double> p;
  std::vector<double> g;
};

inline ClassicalPair classical_distribution(const DensityMatrix& rho, const GibbsContext& ctx) {
  require_same_dim(rho, ctx.hamiltonian);
  ClassicalPair out;
  for (const auto& block : ctx.hamiltonian.energy_blocks()) {
    ComplexMatrix sub(block.size(), block.size());
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = 0; b < block.size(); ++b) sub(a, b) = rho(block[a], block[b]);
    const auto values = block.size() == 1 ? std::vector<double>{sub(0, 0).real()}
                                          : eig_hermitian(sub).eigenvalues;
    for (std::size_t a = 0; a < block.size(); ++a) {
      out.p.push_back(std::max(values[a], 0.0));
      out.g.push_back(ctx.populations[block[a]]);
    }
  }
  return out;
}

}  // namespace thermogap
