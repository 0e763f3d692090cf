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

// Random instance generators shared by the test suites.

#include <cmath>
#include <numbers>
#include <vector>

#include "thermogap/linalg.hpp"
#include "thermogap/random.hpp"
#include "thermogap/thermo.hpp"

namespace thermogap::testing {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, CounterRng& rng) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, CounterRng& rng) {
  const ComplexMatrix g = random_matrix(n, n, rng);
  return (g + g.adjoint()) * 0.5;
}

/// Uniform on the probability simplex.
inline std::vector<double> random_simplex(std::size_t n, CounterRng& rng) {
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& x : p) {
    x = -std::log(rng.uniform());
    s += x;
  }
  for (auto& x : p) x /= s;
  return p;
}

/// Mixed state G G^dagger / Tr from a Ginibre matrix of the given rank.
inline DensityMatrix random_state(std::size_t n, CounterRng& rng, std::size_t rank = 0) {
  if (rank == 0) rank = n;
  const ComplexMatrix g = random_matrix(n, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho = rho * (1.0 / rho.trace().real());
  return DensityMatrix(rho);
}

inline DensityMatrix random_pure_state(std::size_t n, CounterRng& rng) {
  return random_state(n, rng, 1);
}

inline DensityMatrix diagonal_state(const std::vector<double>& p) {
  return DensityMatrix(ComplexMatrix::diagonal(p));
}

inline DensityMatrix plus_state() {
  const double a = std::numbers::sqrt2 / 2.0;
  const std::vector<Complex> v{a, a};
  return DensityMatrix::pure(v);
}

/// Qubit context with gap 1 at the given beta.
inline GibbsContext qubit_context(double beta) {
  return make_gibbs_context(Hamiltonian({0.0, 1.0}), beta);
}

inline GibbsContext random_context(std::size_t d, CounterRng& rng, double max_beta_e = 3.0) {
  std::vector<double> e(d);
  for (auto& x : e) x = max_beta_e * rng.uniform();
  return make_gibbs_context(Hamiltonian(e), 1.0);
}

}  // namespace thermogap::testing
