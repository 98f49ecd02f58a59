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


#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "qite_mis/graph.hpp"
#include "qite_mis/sampler.hpp"

namespace qite_mis {
namespace {

double total_variation(const StateVector& s, const std::vector<Bitstring>& shots) {
  std::vector<double> freq(s.dim(), 0.0);
  for (const Bitstring& b : shots) freq[b.index()] += 1.0 / static_cast<double>(shots.size());
  double tvd = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) tvd += std::abs(freq[i] - std::norm(s[i]));
  return tvd / 2.0;
}

TEST(MeasureShots, BasisStateIsDeterministic) {
  const auto shots = measure_shots(StateVector::basis(4, 9), 50, 1);
  ASSERT_EQ(shots.size(), 50U);
  for (const Bitstring& b : shots) EXPECT_EQ(b.index(), 9U);
  EXPECT_THROW(measure_shots(StateVector::plus(2), 0, 1), std::invalid_argument);
}

TEST(MeasureShots, PlusStateFrequencies) {
  const auto shots = measure_shots(StateVector::plus(1), 100000, 2024);
  const auto ones = std::count_if(shots.begin(), shots.end(), [](const Bitstring& b) { return b[0]; });
  EXPECT_NEAR(static_cast<double>(ones) / 1e5, 0.5, 0.005);
}

TEST(MeasureShots, DistributionMatchesAmplitudes) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 3; ++trial) {
    const StateVector s = oracle::random_state(4, rng);
    EXPECT_LE(total_variation(s, measure_shots(s, 100000, 100 + trial)), 0.01);
  }
  const DiagonalHamiltonian h = from_udmis(reference_graph_6q());
  QiteConfig cfg;
  const QiteResult r = qite_evolve(h, build_domain_A(h), cfg);
  EXPECT_LE(total_variation(r.final_state, measure_shots(r.final_state, 100000, 5)), 0.01);
}

TEST(MeasureShots, NeverReturnsZeroProbabilityOutcome) {
  std::vector<Amplitude> a(8, 0.0);
  a[2] = 1.0;
  a[5] = 1.0;
  const StateVector s = StateVector::from_amplitudes(3, a);
  for (const Bitstring& b : measure_shots(s, 2000, 3)) {
    EXPECT_TRUE(b.index() == 2 || b.index() == 5);
  }
}

TEST(MeasureShots, SeedDeterminism) {
  const StateVector s = StateVector::plus(5);
  EXPECT_EQ(measure_shots(s, 40, 77), measure_shots(s, 40, 77));
  EXPECT_NE(measure_shots(s, 40, 77), measure_shots(s, 40, 78));
  EXPECT_NE(repetition_seed(1, 0), repetition_seed(1, 1));
  EXPECT_NE(repetition_seed(1, 0), repetition_seed(2, 0));
}

TEST(SolveFromState, KeepsFirstLowestShot) {
  const DiagonalHamiltonian h = from_udmis(reference_graph_6q());
  const Spectrum sp = spectrum(h);
  const StateVector s = StateVector::plus(6);
  const SolveResult r = solve_from_state(s, h, sp, {0.0, 30}, 11);
  ASSERT_EQ(r.shot_energies.size(), 30U);
  const double best = *std::min_element(r.shot_energies.begin(), r.shot_energies.end());
  EXPECT_EQ(r.best_energy, best);
  EXPECT_EQ(h.energy(r.best_bitstring), best);
  const auto shots = measure_shots(s, 30, 11);
  const auto first = std::find_if(shots.begin(), shots.end(),
                                   [&](const Bitstring& b) { return h.energy(b) == best; });
  EXPECT_EQ(*first, r.best_bitstring);
  EXPECT_EQ(r.succeeded, !sp.is_failing(best, 0.0));
  EXPECT_EQ(r.seed, 11U);
}

TEST(Solve, ReferenceGraphTwelveShots) {
  const DiagonalHamiltonian h = from_udmis(reference_graph_6q());
  QiteConfig cfg;
  cfg.n_max = 100;
  const QiteResult evolved = qite_evolve(h, build_domain_A(h), cfg);
  const auto runs = solve_repeated(evolved.final_state, h, spectrum(h), {0.35, 12}, 42, 200);
  const auto ok = std::count_if(runs.begin(), runs.end(),
                                [](const SolveResult& r) { return r.best_energy <= -1.65 + 1e-9; });
  EXPECT_GE(static_cast<double>(ok) / 200.0, 0.9);
  const SolveResult one = solve(h, build_domain_A(h), cfg, {0.35, 12});
  EXPECT_EQ(one.seed, repetition_seed(cfg.rng_seed, 0));
  EXPECT_EQ(one.best_energy, h.energy(one.best_bitstring));
}

TEST(Solve, GroundBasisStateAlwaysSucceeds) {
  const DiagonalHamiltonian h = from_udmis(reference_graph_6q());
  const Spectrum sp = spectrum(h);
  const StateVector ground = StateVector::basis(6, sp.levels()[0].members[0]);
  for (const SolveResult& r : solve_repeated(ground, h, sp, {0.0, 3}, 1, 50)) {
    EXPECT_TRUE(r.succeeded);
  }
}

TEST(FailureRate, SingleShotMatchesExactProbability) {
  const DiagonalHamiltonian h = from_udmis(reference_graph_6q());
  QiteConfig cfg;
  cfg.n_max = 100;
  cfg.rng_seed = 3;
  const FailureSpec spec{0.0, 1};
  const double exact =
      failure_prob(qite_evolve(h, build_domain_A(h), cfg).final_state, spectrum(h), 0.0);
  const int reps = 10000;
  const double rate = failure_rate_empirical(h, build_domain_A(h), cfg, spec, reps);
  const double sigma = std::sqrt(exact * (1 - exact) / reps);
  EXPECT_NEAR(rate, exact, 3 * sigma);
  EXPECT_EQ(failure_rate_empirical(h, build_domain_A(h), cfg, {100.0, 1}, 200), 0.0);
}

TEST(FailureRate, MultiShotIsPowerOfSingleShot) {
  const DiagonalHamiltonian h = from_udmis(reference_graph_6q());
  QiteConfig cfg;
  cfg.n_max = 50;
  const StateVector s = qite_evolve(h, build_domain_A(h), cfg).final_state;
  const double p1 = failure_prob(s, spectrum(h), 0.0);
  const int reps = 10000;
  for (int m : {2, 4}) {
    const auto runs = solve_repeated(s, h, spectrum(h), {0.0, m}, 9, reps);
    const double rate = static_cast<double>(std::count_if(
                            runs.begin(), runs.end(),
                            [](const SolveResult& r) { return !r.succeeded; })) /
                        reps;
    const double exact = std::pow(p1, m);
    EXPECT_NEAR(rate, exact, 3 * std::sqrt(exact * (1 - exact) / reps)) << m;
  }
  EXPECT_NEAR(std::pow(p1, 4), std::pow(std::pow(p1, 2), 2), 1e-15);
}

TEST(SolveJson, Fields) {
  const DiagonalHamiltonian h = from_udmis(reference_graph_6q());
  const Spectrum sp = spectrum(h);
  const auto runs = solve_repeated(StateVector::plus(6), h, sp, {0.35, 4}, 5, 3);
  std::ostringstream out;
  write_solve_jsonl(out, runs);
  std::istringstream in(out.str());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.size(), 4U);
    EXPECT_EQ(j.at("seed").get<std::uint64_t>(), runs[n].seed);
    EXPECT_EQ(j.at("best_energy").get<double>(), runs[n].best_energy);
    EXPECT_EQ(j.at("best_bitstring").get<std::string>(), runs[n].best_bitstring.to_string());
    EXPECT_EQ(j.at("success").get<bool>(), runs[n].succeeded);
    ++n;
  }
  EXPECT_EQ(n, 3);
}

}  // namespace
}  // namespace qite_mis
