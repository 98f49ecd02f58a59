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


// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
// criterion fails. Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "oracle.hpp"
#include "qite_mis/analysis.hpp"
#include "qite_mis/graph.hpp"
#include "qite_mis/hamiltonian.hpp"
#include "qite_mis/ite.hpp"
#include "qite_mis/qite.hpp"
#include "qite_mis/runner.hpp"
#include "qite_mis/sampler.hpp"
#include "qite_mis/seeding.hpp"

namespace qm = qite_mis;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

constexpr double kSlack = 1e-12;

// Reference-graph runs at tau = 0.01, n = 1000, shared by several criteria.
struct ReferenceRuns {
  qm::DiagonalHamiltonian h;
  qm::Spectrum spectrum;
  qm::QiteConfig cfg;
  qm::QiteResult a;
  qm::QiteResult b;
};

const ReferenceRuns& reference_runs() {
  static const ReferenceRuns runs = [] {
    const qm::UnitDiskGraph g = qm::reference_graph_6q();
    qm::DiagonalHamiltonian h = qm::from_udmis(g, 1.35);
    qm::Spectrum sp = qm::spectrum(h);
    qm::QiteConfig cfg;
    cfg.tau = 0.01;
    cfg.n_max = 1000;
    cfg.record_every = 10;
    qm::QiteResult a = qm::qite_evolve(h, qm::build_domain_A(h), cfg);
    qm::QiteResult b = qm::qite_evolve(h, qm::reference_domain_B_6q(h), cfg);
    return ReferenceRuns{std::move(h), std::move(sp), cfg, std::move(a), std::move(b)};
  }();
  return runs;
}

Outcome reference_spectrum() {
  const qm::Spectrum sp = qm::spectrum(qm::from_udmis(qm::reference_graph_6q(), 1.35));
  const auto lv = sp.levels();
  const bool pass = lv.size() >= 2 && std::abs(lv[0].energy + 2.0) <= 1e-9 &&
                    lv[0].degeneracy == 3 && std::abs(lv[1].energy + 1.65) <= 1e-9 &&
                    lv[1].degeneracy == 2;
  return {pass, fmt("levels (%.9g, %llu), (%.9g, %llu)", lv[0].energy,
                    static_cast<unsigned long long>(lv[0].degeneracy), lv[1].energy,
                    static_cast<unsigned long long>(lv[1].degeneracy))};
}

Outcome ite_bound_audit() {
  std::mt19937_64 rng(20261017);
  const double times[] = {0.0, 0.1, 1.0, 5.0, 10.0};
  int checks = 0;
  int violations = 0;
  double worst = -1.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 6;
    const qm::DiagonalHamiltonian h = qm::oracle::random_diagonal(n, rng);
    const qm::Spectrum sp = qm::spectrum(h);
    const std::uint64_t g = sp.ground_degeneracy();
    const std::uint64_t d = sp.dimension();
    if (g >= d) continue;
    for (double t : times) {
      const qm::StateVector psi = qm::ite_state(h, t);
      for (double de : {0.0, sp.gap() / 2, sp.gap()}) {
        const double pf = qm::failure_prob(psi, sp, de);
        const double bound = qm::ite_bound(t, de, g, d);
        ++checks;
        worst = std::max(worst, pf - bound);
        if (pf > bound + kSlack) ++violations;
      }
    }
  }
  return {violations == 0 && checks > 0,
          fmt("%d checks, %d violations, max(pf - bound) = %.3g", checks, violations, worst)};
}

struct BoundTally {
  int snapshots = 0;
  int applicable = 0;
  int violations = 0;
};

void tally_qite_bound(const qm::QiteTrace& trace, const qm::DiagonalHamiltonian& h,
                      const qm::QiteConfig& cfg, double delta_e, BoundTally& tally) {
  for (const qm::TrajectoryRecord& r : qm::trajectory_metrics(trace, h, cfg, {delta_e, 1})) {
    ++tally.snapshots;
    if (r.epsilon > std::sqrt(2.0)) continue;
    ++tally.applicable;
    const double rhs = r.epsilon * std::sqrt(1.0 - r.epsilon * r.epsilon / 4.0);
    if (std::abs(r.pf_qite - r.pf_ite) > rhs + kSlack) ++tally.violations;
  }
}

Outcome qite_bound_audit() {
  const ReferenceRuns& ref = reference_runs();
  BoundTally tally;
  for (double de : {ref.spectrum.gap(), 0.0}) {
    tally_qite_bound(ref.a.trace, ref.h, ref.cfg, de, tally);
    tally_qite_bound(ref.b.trace, ref.h, ref.cfg, de, tally);
  }
  const std::uint64_t root = 5150;
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t seed = qm::instance_seed(root, i);
    const qm::UnitDiskGraph g =
        qm::random_unit_disk(6, qm::default_box_side(6), qm::derive_seed(seed, qm::kStreamGraph));
    const qm::DiagonalHamiltonian h = qm::from_udmis(g, 1.35);
    const qm::Spectrum sp = qm::spectrum(h);
    qm::QiteConfig cfg = ref.cfg;
    cfg.rng_seed = seed;
    for (const qm::DomainSet& d : {qm::build_domain_A(h), qm::build_domain_B(h, g, seed)}) {
      const qm::QiteResult r = qm::qite_evolve(h, d, cfg);
      for (double de : {sp.gap(), 0.0}) tally_qite_bound(r.trace, h, cfg, de, tally);
    }
  }
  return {tally.violations == 0 && tally.applicable > 0,
          fmt("%d snapshots, %d with eps <= sqrt(2), %d violations", tally.snapshots,
              tally.applicable, tally.violations)};
}

Outcome ite_oracle() {
  std::mt19937_64 rng(404);
  double worst = 0.0;
  int cases = 0;
  for (int n = 1; n <= 4; ++n) {
    std::vector<qm::DiagonalHamiltonian> hs;
    for (int k = 0; k < 5; ++k) hs.push_back(qm::oracle::random_diagonal(n, rng));
    hs.push_back(qm::from_udmis(qm::random_unit_disk(n, qm::default_box_side(n), 7 + n), 1.35));
    for (const auto& h : hs) {
      for (double t : {0.1, 1.0, 10.0}) {
        const Eigen::VectorXcd got = qm::oracle::vec(qm::ite_state(h, t));
        worst = std::max(worst, (got - qm::oracle::ite(h, t)).cwiseAbs().maxCoeff());
        ++cases;
      }
    }
  }
  return {worst <= 1e-9, fmt("%d cases, max amplitude error %.3g", cases, worst)};
}

Outcome full_domain_convergence() {
  double worst = 1.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const qm::UnitDiskGraph g =
        qm::random_unit_disk(4, qm::default_box_side(4), qm::derive_seed(77, s));
    const qm::DiagonalHamiltonian h = qm::from_udmis(g, 1.35);
    qm::QiteConfig cfg;
    cfg.tau = 0.001;
    cfg.n_max = 1000;
    cfg.record_every = cfg.n_max;
    const qm::QiteResult r = qm::qite_evolve(h, qm::build_domain_full(h), cfg);
    worst = std::min(worst, qm::fidelity(r.final_state, qm::ite_state(h, 1.0)));
  }
  return {worst >= 0.999, fmt("10 instances, min fidelity %.6f", worst)};
}

Outcome substep_order() {
  const qm::DiagonalHamiltonian h = qm::from_udmis(qm::reference_graph_6q(), 1.35);
  const auto mean_residual = [&](double tau) {
    qm::QiteConfig cfg;
    cfg.tau = tau;
    cfg.n_max = 1;
    cfg.track_substep_residual = true;
    const qm::QiteResult r = qm::qite_evolve(h, qm::build_domain_A(h), cfg);
    double sum = 0.0;
    for (int k = 0; k < 10; ++k) sum += r.trace.substeps[k].substep_error;
    return sum / 10.0;
  };
  const double r1 = mean_residual(0.01);
  const double r2 = mean_residual(0.005);
  const double ratio = r1 / r2;
  return {ratio >= 3.0 && ratio <= 5.0,
          fmt("mean residual %.4g at tau=0.01, %.4g at tau=0.005, ratio %.3f (target [3, 5])",
              r1, r2, ratio)};
}

Outcome domain_ordering() {
  const ReferenceRuns& ref = reference_runs();
  const qm::StateVector final_ite = qm::ite_state(ref.h, ref.cfg.t_max());
  const double eps_a = qm::norm_distance(final_ite, ref.a.final_state);
  const double eps_b = qm::norm_distance(final_ite, ref.b.final_state);
  const double f_a = qm::fidelity(final_ite, ref.a.final_state);
  const double f_b = qm::fidelity(final_ite, ref.b.final_state);
  return {eps_b < eps_a && f_b > f_a,
          fmt("eps(t_max) A=%.4f B=%.4f, fidelity A=%.4f B=%.4f (needs B better on both)", eps_a,
              eps_b, f_a, f_b)};
}

Outcome failure_decay() {
  const qm::DiagonalHamiltonian h = qm::from_udmis(qm::reference_graph_6q(), 1.35);
  qm::QiteConfig cfg;
  cfg.n_max = 100;
  const qm::QiteResult r = qm::qite_evolve(h, qm::build_domain_A(h), cfg);
  const double pf = qm::failure_prob(r.final_state, qm::spectrum(h), 0.35);
  const double p12 = std::pow(pf, 12);
  return {p12 <= 0.1, fmt("P_F = %.4f, (P_F)^12 = %.3g", pf, p12)};
}

Outcome sampler_fidelity() {
  const qm::DiagonalHamiltonian h = qm::from_udmis(qm::reference_graph_6q(), 1.35);
  const qm::Spectrum sp = qm::spectrum(h);
  const qm::StateVector& state = reference_runs().a.final_state;
  std::vector<double> freq(state.dim(), 0.0);
  for (const qm::Bitstring& b : qm::measure_shots(state, 100000, 31337)) freq[b.index()] += 1e-5;
  double tvd = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) tvd += std::abs(freq[i] - std::norm(state[i]));
  tvd /= 2.0;

  qm::QiteConfig cfg;
  cfg.n_max = 100;
  const qm::StateVector short_run = qm::qite_evolve(h, qm::build_domain_A(h), cfg).final_state;
  const double p1 = qm::failure_prob(short_run, sp, 0.0);
  const int reps = 10000;
  bool within = true;
  std::string shots_detail;
  for (int m : {1, 2, 4, 8}) {
    const auto runs = qm::solve_repeated(short_run, h, sp, {0.0, m}, 2718 + m, reps);
    const double rate =
        static_cast<double>(std::count_if(runs.begin(), runs.end(),
                                          [](const qm::SolveResult& r) { return !r.succeeded; })) /
        reps;
    const double exact = std::pow(p1, m);
    const double sigma = std::sqrt(exact * (1.0 - exact) / reps);
    const bool ok = std::abs(rate - exact) <= 3.0 * sigma;
    within = within && ok;
    shots_detail += fmt(" M=%d %.4f/%.4f", m, rate, exact);
  }
  return {tvd <= 0.01 && within,
          fmt("TVD %.4f at 1e5 shots; empirical/exact failure:%s", tvd, shots_detail.c_str())};
}

Outcome campaign_histogram() {
  qm::ExperimentConfig cfg;
  cfg.name = "acceptance";
  cfg.source = qm::InstanceSource::kRandom;
  cfg.count = 400;
  cfg.n_vertices = 6;
  cfg.seed = 2026;
  cfg.domains = {qm::DomainKind::kA};
  cfg.qite.n_max = 100;
  cfg.qite.record_every = 100;
  cfg.shots = {12};
  cfg.delta_e = {qm::DeltaE::gap()};
  const qm::CampaignSummary s = qm::campaign(cfg);
  if (s.histograms.size() != 1 || s.failed_instances != 0) {
    return {false, fmt("%d failed instances", s.failed_instances)};
  }
  const qm::Histogram& rel = s.histograms[0].relative_errors;
  const auto top = std::max_element(rel.counts.begin(), rel.counts.end());
  const bool zero_dominant = rel.origin == 0.0 && top == rel.counts.begin();
  std::uint64_t above = 0;
  std::uint64_t total = 0;
  for (const qm::InstanceOutcome& inst : s.instances) {
    for (const qm::ShotOutcome& o : inst.outcomes) {
      ++total;
      if (o.relative_error > 20.0) ++above;
    }
  }
  const double zero_frac = static_cast<double>(rel.counts.front()) / rel.total();
  const double above_frac = static_cast<double>(above) / total;
  return {zero_dominant && above_frac < 0.1,
          fmt("%llu instances, zero-error bin %.3f (largest: %s), mass above 20%% = %.3f",
              static_cast<unsigned long long>(total), zero_frac, zero_dominant ? "yes" : "no",
              above_frac)};
}

Outcome invariant_suite() {
  std::vector<std::string> failed;
  // Norm preservation along every recorded snapshot and substep.
  double worst_norm = 0.0;
  double worst_drift = 0.0;
  for (const qm::QiteResult* r : {&reference_runs().a, &reference_runs().b}) {
    for (const qm::Snapshot& s : r->trace.snapshots) {
      worst_norm = std::max(worst_norm, std::abs(s.state.norm() - 1.0));
    }
    for (const qm::SubstepRecord& s : r->trace.substeps) {
      worst_drift = std::max(worst_drift, s.norm_drift);
    }
  }
  if (worst_norm > 1e-10 || worst_drift > 1e-10) failed.push_back("norm");

  // Pauli algebra: every product of 2-qubit strings against dense matrices,
  // and associativity including phases.
  std::vector<qm::PauliString> all{qm::PauliString()};
  for (const auto& p : qm::enumerate_basis(std::vector<int>{0, 1})) all.push_back(p);
  bool algebra = true;
  for (const auto& p : all) {
    for (const auto& q : all) {
      const qm::PauliProduct pq = qm::mul(p, q);
      algebra = algebra && (pq.phase() * qm::oracle::dense(pq.string, 2))
                               .isApprox(qm::oracle::dense(p, 2) * qm::oracle::dense(q, 2), 1e-14);
      for (const auto& s : all) {
        const qm::PauliProduct left = qm::mul(pq.string, s);
        const qm::PauliProduct qs = qm::mul(q, s);
        const qm::PauliProduct right = qm::mul(p, qs.string);
        algebra = algebra && left.string == right.string &&
                  pq.phase() * left.phase() == qs.phase() * right.phase();
      }
    }
  }
  if (!algebra) failed.push_back("pauli");

  // Determinism: bit-identical reruns of an evolution and of a campaign.
  {
    const qm::DiagonalHamiltonian h = qm::from_udmis(qm::reference_graph_6q(), 1.35);
    qm::QiteConfig cfg;
    cfg.n_max = 50;
    const qm::DomainSet d = qm::build_domain_B(h, qm::reference_graph_6q(), 3);
    const qm::QiteResult x = qm::qite_evolve(h, d, cfg);
    const qm::QiteResult y = qm::qite_evolve(h, d, cfg);
    bool same = x.final_state == y.final_state;
    qm::ExperimentConfig camp;
    camp.source = qm::InstanceSource::kRandom;
    camp.count = 8;
    camp.seed = 11;
    camp.qite.n_max = 30;
    camp.jobs = 1;
    const qm::CampaignSummary c1 = qm::campaign(camp);
    camp.jobs = 4;
    const qm::CampaignSummary c2 = qm::campaign(camp);
    for (std::size_t i = 0; i < c1.instances.size(); ++i) {
      const auto& a = c1.instances[i].outcomes;
      const auto& b = c2.instances[i].outcomes;
      same = same && a.size() == b.size();
      for (std::size_t k = 0; same && k < a.size(); ++k) {
        same = a[k].result.best_bitstring == b[k].result.best_bitstring &&
               a[k].result.seed == b[k].result.seed &&
               a[k].result.shot_energies == b[k].result.shot_energies;
      }
    }
    if (!same) failed.push_back("determinism");
  }

  // Ground states of the encoding are maximum independent sets.
  int mismatches = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const int n = 2 + static_cast<int>(s % 9);
    const qm::UnitDiskGraph g = qm::random_unit_disk(n, qm::default_box_side(n), 900 + s);
    const qm::Spectrum sp = qm::spectrum(qm::from_udmis(g, 1.35));
    const qm::MisResult mis = qm::brute_force_mis(g);
    bool ok = std::abs(sp.ground_energy() + mis.size) < 1e-9 &&
              sp.ground_degeneracy() == mis.witnesses.size();
    for (std::uint64_t idx : sp.levels()[0].members) {
      ok = ok && qm::is_independent(g, qm::Bitstring(n, idx));
    }
    if (!ok) ++mismatches;
  }
  if (mismatches > 0) failed.push_back("independent-set");

  std::string which;
  for (const auto& f : failed) which += " " + f;
  return {failed.empty(),
          fmt("norm dev %.2g, drift %.2g; ground-state mismatches %d/200;%s", worst_norm,
              worst_drift, mismatches, failed.empty() ? " all green" : (" failed:" + which).c_str())};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::err);
  const std::vector<Criterion> criteria{
      {1, "reference spectrum", reference_spectrum},
      {2, "ite failure bound audit", ite_bound_audit},
      {3, "qite failure bound audit", qite_bound_audit},
      {4, "ite matrix-exponential oracle", ite_oracle},
      {5, "full-domain convergence", full_domain_convergence},
      {6, "substep residual order", substep_order},
      {7, "domain ordering on reference graph", domain_ordering},
      {8, "failure probability decay", failure_decay},
      {9, "sampler fidelity", sampler_fidelity},
      {10, "random-instance campaign", campaign_histogram},
      {11, "invariant suite", invariant_suite},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures,
              selected.empty() ? criteria.size() : selected.size());
  return failures == 0 ? 0 : 1;
}
