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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qite_mis/analysis.hpp"
#include "qite_mis/bitstring.hpp"
#include "qite_mis/hamiltonian.hpp"
#include "qite_mis/qite.hpp"
#include "qite_mis/state.hpp"

namespace qite_mis {

/// M independent computational-basis measurements, drawn by inverse CDF
/// over the cumulative |amplitude|^2 array.
std::vector<Bitstring> measure_shots(const StateVector& state, int shots,
                                     std::uint64_t seed);

struct SolveResult {
  Bitstring best_bitstring;
  double best_energy = 0.0;
  std::vector<double> shot_energies;
  bool succeeded = false;
  std::uint64_t seed = 0;
};

/// Measurement seed of repetition `repetition` under master seed `master`.
std::uint64_t repetition_seed(std::uint64_t master, std::uint64_t repetition);

/// Measures `spec.shots` times and keeps the lowest-energy outcome (the
/// first one on ties). Success means best_energy <= E0 + delta_E.
SolveResult solve_from_state(const StateVector& state, const DiagonalHamiltonian& h,
                             const Spectrum& spectrum, const FailureSpec& spec,
                             std::uint64_t measurement_seed);

/// Evolves from plus_state and measures; the measurement seed is
/// repetition_seed(cfg.rng_seed, 0).
SolveResult solve(const DiagonalHamiltonian& h, const DomainSet& domains,
                  const QiteConfig& cfg, const FailureSpec& spec);

/// `repetitions` independent measurement rounds of one evolved state.
std::vector<SolveResult> solve_repeated(const StateVector& state,
                                        const DiagonalHamiltonian& h,
                                        const Spectrum& spectrum,
                                        const FailureSpec& spec,
                                        std::uint64_t master_seed, int repetitions);

/// Fraction of repetitions whose best energy exceeds E0 + delta_E. The
/// evolution runs once; only the measurement seeds vary.
double failure_rate_empirical(const DiagonalHamiltonian& h, const DomainSet& domains,
                              const QiteConfig& cfg, const FailureSpec& spec,
                              int repetitions);

/// One JSON object per line with fields seed, best_energy, best_bitstring
/// and success.
void write_solve_jsonl(std::ostream& out, std::span<const SolveResult> results);
std::string solve_result_json(const SolveResult& result);

}  // namespace qite_mis
