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

#pragma once

#include <vector>

#include "qite_mis/hamiltonian.hpp"
#include "qite_mis/state.hpp"

namespace qite_mis {

/// Exact imaginary-time state e^{-tH}|+>^N / ||e^{-tH}|+>^N||, computed
/// directly from the diagonal (never Trotterized). Amplitudes are real and
/// positive.
StateVector ite_state(const DiagonalHamiltonian& h, double t);

/// ITE states at t = k * tau for k = 0..n_steps.
std::vector<StateVector> ite_trajectory(const DiagonalHamiltonian& h, double tau,
                                        int n_steps);

/// <psi|H|psi> for a diagonal H.
double energy_expectation(const DiagonalHamiltonian& h, const StateVector& state);

}  // namespace qite_mis
