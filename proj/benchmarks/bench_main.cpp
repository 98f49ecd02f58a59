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


#include <benchmark/benchmark.h>

#include <vector>

#include "qite_mis/graph.hpp"
#include "qite_mis/hamiltonian.hpp"
#include "qite_mis/qite.hpp"
#include "qite_mis/state.hpp"

namespace {

using namespace qite_mis;

// Builds and solves the linear system for one pair term with a domain of
// the given width on a 10-qubit state.
void BM_Substep(benchmark::State& bench) {
  const int width = static_cast<int>(bench.range(0));
  const int n = 10;
  const std::vector<PauliTerm> term{PauliTerm({0.675, 0.0}, PauliString::parse("Z0*Z1"))};
  std::vector<int> domain(width);
  for (int i = 0; i < width; ++i) domain[i] = i;
  const StateVector psi = StateVector::plus(n);
  for (auto _ : bench) {
    const SubstepSystem sys = substep_linear_system(psi, term, domain);
    benchmark::DoNotOptimize(solve_substep(sys, 1e-6));
  }
  bench.counters["unknowns"] = static_cast<double>((1u << (2 * width)) - 1);
}
BENCHMARK(BM_Substep)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

void BM_QiteEvolveReference(benchmark::State& bench) {
  const DiagonalHamiltonian h = from_udmis(reference_graph_6q(), 1.35);
  const bool b_domains = bench.range(0) != 0;
  const DomainSet d = b_domains ? reference_domain_B_6q(h) : build_domain_A(h);
  QiteConfig cfg;
  cfg.n_max = 100;
  cfg.record_every = 100;
  for (auto _ : bench) benchmark::DoNotOptimize(qite_evolve(h, d, cfg));
  bench.SetLabel(b_domains ? "wide domains" : "term support");
}
BENCHMARK(BM_QiteEvolveReference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& bench) {
  const int n = static_cast<int>(bench.range(0));
  const DiagonalHamiltonian h =
      from_udmis(random_unit_disk(n, default_box_side(n), 11), 1.35);
  for (auto _ : bench) benchmark::DoNotOptimize(spectrum(h));
  bench.SetComplexityN(int64_t{1} << n);
}
BENCHMARK(BM_Spectrum)->DenseRange(8, 20, 4)->Unit(benchmark::kMillisecond)->Complexity();

}  // namespace

BENCHMARK_MAIN();
