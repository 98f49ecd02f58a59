// Copyright 2026 The qite_mis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qite_mis/ite.hpp"

#include <cmath>
#include <stdexcept>

namespace qite_mis {

StateVector ite_state(const DiagonalHamiltonian& h, double t) {
  const std::vector<double> e = h.energies();
  return apply_diagonal_imaginary(plus_state(h.n_qubits()), e, t);
}

std::vector<StateVector> ite_trajectory(const DiagonalHamiltonian& h, double tau,
                                        int n_steps) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("tau must be positive");
  }
  if (n_steps < 0) throw std::invalid_argument("n_steps must be >= 0");
  const std::vector<double> e = h.energies();
  const StateVector start = plus_state(h.n_qubits());
  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(n_steps) + 1);
  // Each entry is computed from the start state so no error accumulates.
  for (int k = 0; k <= n_steps; ++k) {
    out.push_back(apply_diagonal_imaginary(start, e, k * tau));
  }
  return out;
}

double energy_expectation(const DiagonalHamiltonian& h, const StateVector& state) {
  if (h.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("Hamiltonian and state sizes differ");
  }
  const std::vector<double> e = h.energies();
  double sum = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) sum += e[i] * std::norm(state[i]);
  return sum;
}

}  // namespace qite_mis
