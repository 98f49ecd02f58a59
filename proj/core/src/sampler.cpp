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


#include "qite_mis/sampler.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qite_mis/seeding.hpp"

namespace qite_mis {

std::vector<Bitstring> measure_shots(const StateVector& state, int shots,
                                     std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("the number of shots must be at least 1");
  std::vector<double> cdf(state.dim());
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const double p = std::norm(state[i]);
    acc += p;
    cdf[i] = acc;
    if (p > 0.0) last_nonzero = i;
  }
  std::mt19937_64 rng(seed);
  std::vector<Bitstring> out;
  out.reserve(static_cast<std::size_t>(shots));
  for (int s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto idx = std::min(static_cast<std::size_t>(it - cdf.begin()), last_nonzero);
    out.emplace_back(state.n_qubits(), idx);
  }
  return out;
}

std::uint64_t repetition_seed(std::uint64_t master, std::uint64_t repetition) {
  return derive_seed(derive_seed(master, kStreamShots), repetition);
}

SolveResult solve_from_state(const StateVector& state, const DiagonalHamiltonian& h,
                             const Spectrum& spectrum, const FailureSpec& spec,
                             std::uint64_t measurement_seed) {
  spec.validate();
  const std::vector<Bitstring> shots = measure_shots(state, spec.shots, measurement_seed);
  SolveResult r;
  r.seed = measurement_seed;
  r.shot_energies.reserve(shots.size());
  for (std::size_t s = 0; s < shots.size(); ++s) {
    const double e = h.energy(shots[s]);
    r.shot_energies.push_back(e);
    if (s == 0 || e < r.best_energy) {
      r.best_energy = e;
      r.best_bitstring = shots[s];
    }
  }
  r.succeeded = !spectrum.is_failing(r.best_energy, spec.delta_e);
  return r;
}

SolveResult solve(const DiagonalHamiltonian& h, const DomainSet& domains,
                  const QiteConfig& cfg, const FailureSpec& spec) {
  const QiteResult evolved = qite_evolve(h, domains, cfg);
  return solve_from_state(evolved.final_state, h, spectrum(h), spec,
                          repetition_seed(cfg.rng_seed, 0));
}

std::vector<SolveResult> solve_repeated(const StateVector& state,
                                        const DiagonalHamiltonian& h,
                                        const Spectrum& spectrum,
                                        const FailureSpec& spec,
                                        std::uint64_t master_seed, int repetitions) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  std::vector<SolveResult> out;
  out.reserve(static_cast<std::size_t>(repetitions));
  for (int r = 0; r < repetitions; ++r) {
    out.push_back(solve_from_state(state, h, spectrum, spec,
                                   repetition_seed(master_seed, static_cast<std::uint64_t>(r))));
  }
  return out;
}

double failure_rate_empirical(const DiagonalHamiltonian& h, const DomainSet& domains,
                              const QiteConfig& cfg, const FailureSpec& spec,
                              int repetitions) {
  const QiteResult evolved = qite_evolve(h, domains, cfg);
  const std::vector<SolveResult> runs = solve_repeated(
      evolved.final_state, h, spectrum(h), spec, cfg.rng_seed, repetitions);
  const auto failures = std::count_if(runs.begin(), runs.end(),
                                      [](const SolveResult& r) { return !r.succeeded; });
  return static_cast<double>(failures) / static_cast<double>(repetitions);
}

std::string solve_result_json(const SolveResult& result) {
  const nlohmann::json j = {{"seed", result.seed},
                            {"best_energy", result.best_energy},
                            {"best_bitstring", result.best_bitstring.to_string()},
                            {"success", result.succeeded}};
  return j.dump();
}

void write_solve_jsonl(std::ostream& out, std::span<const SolveResult> results) {
  for (const SolveResult& r : results) out << solve_result_json(r) << '\n';
}

}  // namespace qite_mis
