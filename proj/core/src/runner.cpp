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


#include "qite_mis/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "qite_mis/errors.hpp"
#include "qite_mis/seeding.hpp"

namespace qite_mis {
namespace {

constexpr double kBoundSlack = 1e-12;

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

std::string csv_quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// Shot counts and measurement seeds shared by characterizations and
// campaigns.
std::vector<ShotOutcome> measure_all(const StateVector& state, const DiagonalHamiltonian& h,
                                     const Spectrum& sp, DomainKind kind, double delta_e,
                                     std::span<const int> shots, std::uint64_t seed,
                                     int repetitions) {
  std::vector<ShotOutcome> out;
  for (int m : shots) {
    const std::uint64_t master = derive_seed(derive_seed(seed, kStreamShots),
                                             static_cast<std::uint64_t>(m));
    const std::vector<SolveResult> runs =
        solve_repeated(state, h, sp, {delta_e, m}, master, repetitions);
    for (int r = 0; r < repetitions; ++r) {
      const SolveResult& res = runs[static_cast<std::size_t>(r)];
      out.push_back({kind, m, r, res, relative_error(sp.ground_energy(), res.best_energy)});
    }
  }
  return out;
}

nlohmann::json outcome_json(const ShotOutcome& o) {
  return {{"domain", std::string(to_string(o.domain))},
          {"shots", o.shots},
          {"repetition", o.repetition},
          {"seed", o.result.seed},
          {"best_energy", o.result.best_energy},
          {"best_bitstring", o.result.best_bitstring.to_string()},
          {"success", o.result.succeeded},
          {"relative_error", o.relative_error}};
}

QiteConfig config_for(const ExperimentConfig& cfg, DomainKind kind, int n_qubits,
                      std::uint64_t seed) {
  QiteConfig qc = cfg.qite;
  qc.domain_kind = kind;
  qc.rng_seed = seed;
  if (kind == DomainKind::kFull) {
    if (n_qubits > kMaxDomainCap) {
      throw ResourceError("the full domain needs " + std::to_string(n_qubits) +
                          " qubits, the engine cap is " + std::to_string(kMaxDomainCap));
    }
    qc.domain_cap = std::max(qc.domain_cap, n_qubits);
  }
  return qc;
}

}  // namespace

std::string_view to_string(InstanceSource source) {
  switch (source) {
    case InstanceSource::kFile: return "file";
    case InstanceSource::kReference6: return "reference6";
    case InstanceSource::kRandom: return "random";
  }
  return "file";
}

InstanceSource parse_instance_source(std::string_view text) {
  if (text == "file") return InstanceSource::kFile;
  if (text == "reference6") return InstanceSource::kReference6;
  if (text == "random") return InstanceSource::kRandom;
  throw std::invalid_argument("unknown instance source '" + std::string(text) +
                              "' (expected file, reference6 or random)");
}

DeltaE DeltaE::parse(std::string_view text) {
  if (text == "gap") return gap();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(std::string(text), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument("delta_E must be 'gap' or a number >= 0, got '" +
                                std::string(text) + "'");
  }
  return fixed(v);
}

double DeltaE::resolve(const Spectrum& spectrum) const {
  return use_gap ? spectrum.gap() : value;
}

std::string DeltaE::label() const { return use_gap ? "gap" : fmt_double(value); }

void ExperimentConfig::validate() const {
  if (name.empty() || name.find('/') != std::string::npos) {
    throw std::invalid_argument("experiment name must be a nonempty path component");
  }
  if (count < 1) throw std::invalid_argument("instance count must be at least 1");
  if (source == InstanceSource::kFile && graph_file.empty()) {
    throw std::invalid_argument("instance source 'file' needs a graph file");
  }
  if (source == InstanceSource::kRandom && n_vertices < 1) {
    throw std::invalid_argument("random instances need at least one vertex");
  }
  if (!(box_side >= 0.0) || !std::isfinite(box_side)) {
    throw std::invalid_argument("box side must be finite and >= 0");
  }
  if (!(u > 0.0) || !std::isfinite(u)) throw std::invalid_argument("u must be positive");
  qite.validate();
  if (domains.empty()) throw std::invalid_argument("at least one domain kind is needed");
  for (DomainKind k : domains) {
    if (k == DomainKind::kCustom) {
      throw std::invalid_argument("custom domains cannot be selected from a config");
    }
  }
  if (delta_e.empty()) throw std::invalid_argument("at least one delta_E is needed");
  for (const DeltaE& d : delta_e) {
    if (!d.use_gap && (!(d.value >= 0.0) || !std::isfinite(d.value))) {
      throw std::invalid_argument("delta_E must be >= 0");
    }
  }
  for (int m : shots) {
    if (m < 1) throw std::invalid_argument("shot counts must be at least 1");
  }
  if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  if (jobs < 0) throw std::invalid_argument("jobs must be >= 0");
}

double ExperimentConfig::resolved_box_side() const {
  return box_side > 0.0 ? box_side : default_box_side(n_vertices);
}

std::vector<int> ExperimentConfig::resolved_shots(int n) const {
  if (!shots.empty()) return shots;
  return {n, 2 * n};
}

UnitDiskGraph load_instance(const ExperimentConfig& cfg) {
  switch (cfg.source) {
    case InstanceSource::kFile: return load_graph(cfg.graph_file);
    case InstanceSource::kReference6: return reference_graph_6q();
    case InstanceSource::kRandom:
      return random_unit_disk(cfg.n_vertices, cfg.resolved_box_side(),
                              derive_seed(cfg.seed, kStreamGraph));
  }
  throw std::invalid_argument("unknown instance source");
}

DomainSet make_domains(DomainKind kind, const DiagonalHamiltonian& h,
                       const UnitDiskGraph& g, std::uint64_t seed,
                       bool reference_domains) {
  switch (kind) {
    case DomainKind::kA: return build_domain_A(h);
    case DomainKind::kB:
      if (reference_domains && g == reference_graph_6q()) {
        DomainSet d = reference_domain_B_6q(h);
        d.kind = DomainKind::kB;
        return d;
      }
      return build_domain_B(h, g, seed);
    case DomainKind::kFull: return build_domain_full(h);
    case DomainKind::kCustom: break;
  }
  throw std::invalid_argument("custom domains have no builder");
}

CharacterizationResult characterize(const ExperimentConfig& cfg, const UnitDiskGraph& g) {
  cfg.validate();
  const DiagonalHamiltonian h = from_udmis(g, cfg.u);
  CharacterizationResult out{g, spectrum(h), {}, {}, {}, {}};
  const Spectrum& sp = out.spectrum;
  const int n = g.n_vertices();
  for (const DeltaE& d : cfg.delta_e) out.delta_e.push_back(d.resolve(sp));
  const std::vector<int> shots = cfg.resolved_shots(n);
  const int max_shots = 3 * n;
  const double t_max = cfg.qite.t_max();

  for (double de : out.delta_e) {
    const double pf = failure_prob_ite_closed(sp, t_max, de);
    for (int m = 1; m <= max_shots; ++m) out.pfm.push_back({"ite", de, m, std::pow(pf, m)});
  }

  BoundReport& report = out.bounds;
  for (std::size_t k = 0; k < cfg.domains.size(); ++k) {
    const DomainKind kind = cfg.domains[k];
    const std::string label(to_string(kind));
    const QiteConfig qc = config_for(cfg, kind, n, cfg.seed);
    DomainSet domains = make_domains(kind, h, g, cfg.seed, cfg.reference_domains);
    spdlog::info("characterize {}: domain {}, {} iterations", cfg.name, label, qc.n_max);
    QiteResult evolved = qite_evolve(h, domains, qc);
    DomainRun run{kind, std::move(domains), std::move(evolved), {}, {}};

    for (std::size_t di = 0; di < out.delta_e.size(); ++di) {
      const double de = out.delta_e[di];
      std::vector<TrajectoryRecord> recs =
          trajectory_metrics(run.result.trace, h, qc, {de, 1});
      for (const TrajectoryRecord& r : recs) {
        if (k == 0 && !std::isnan(r.ite_bound)) {
          ++report.ite_bound_checks;
          if (r.pf_ite > r.ite_bound + kBoundSlack) {
            ++report.ite_bound_violations;
            report.violations.push_back("ite-bound t=" + fmt_double(r.t) + " dE=" +
                                        fmt_double(de) + " pf_ite=" + fmt_double(r.pf_ite) +
                                        " bound=" + fmt_double(r.ite_bound));
          }
        }
        ++report.qite_bound_checks;
        const QiteBoundCheck c = qite_bound_check(r.epsilon, r.pf_qite, r.pf_ite);
        if (!c.applicable) continue;
        ++report.qite_bound_applicable;
        if (!c.holds) {
          ++report.qite_bound_violations;
          report.violations.push_back(
              "qite-bound domain=" + label + " t=" + fmt_double(r.t) + " dE=" + fmt_double(de) +
              " eps=" + fmt_double(r.epsilon) + " |dP|=" +
              fmt_double(std::abs(r.pf_qite - r.pf_ite)) + " rhs=" + fmt_double(c.rhs));
        }
      }
      const double pf = failure_prob(run.result.final_state, sp, de);
      for (int m = 1; m <= max_shots; ++m) out.pfm.push_back({label, de, m, std::pow(pf, m)});
      if (di == 0) run.records = std::move(recs);
    }
    run.solves = measure_all(run.result.final_state, h, sp, kind, out.delta_e.front(), shots,
                             cfg.seed, cfg.repetitions);
    out.runs.push_back(std::move(run));
  }
  if (!report.ok()) {
    spdlog::error("characterize {}: {} bound violations", cfg.name, report.violations.size());
  }
  return out;
}

void write_bound_report(std::ostream& out, const BoundReport& report) {
  out << "ite_bound checks=" << report.ite_bound_checks
      << " violations=" << report.ite_bound_violations << '\n'
      << "qite_bound checks=" << report.qite_bound_checks
      << " applicable=" << report.qite_bound_applicable
      << " violations=" << report.qite_bound_violations << '\n'
      << "status=" << (report.ok() ? "ok" : "VIOLATED") << '\n';
  for (const std::string& v : report.violations) out << v << '\n';
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "energy,degeneracy\n";
  for (const SpectrumLevel& l : spectrum.levels()) {
    out << fmt_double(l.energy) << ',' << l.degeneracy << '\n';
  }
}

void write_pfm_csv(std::ostream& out, std::span<const PfmRow> rows) {
  out << "curve,delta_e,shots,pf_power\n";
  for (const PfmRow& r : rows) {
    out << r.curve << ',' << fmt_double(r.delta_e) << ',' << r.shots << ','
        << fmt_double(r.pf_power) << '\n';
  }
}

CharacterizationResult run_characterization(const ExperimentConfig& cfg) {
  cfg.validate();
  const UnitDiskGraph g = load_instance(cfg);
  CharacterizationResult res = characterize(cfg, g);
  const std::filesystem::path dir = cfg.experiment_dir();
  std::filesystem::create_directories(dir);
  for (const DomainRun& run : res.runs) {
    auto f = open_output(dir / ("trajectory-" + std::string(to_string(run.kind)) + ".csv"));
    write_trajectory_csv(f, run.records);
  }
  {
    auto f = open_output(dir / "pfm.csv");
    write_pfm_csv(f, res.pfm);
  }
  {
    auto f = open_output(dir / "bounds.txt");
    write_bound_report(f, res.bounds);
  }
  {
    auto f = open_output(dir / "spectrum.csv");
    write_spectrum_csv(f, res.spectrum);
  }
  {
    auto f = open_output(dir / "results.jsonl");
    for (const DomainRun& run : res.runs) {
      for (const ShotOutcome& o : run.solves) f << outcome_json(o).dump() << '\n';
    }
  }
  {
    auto f = open_output(dir / "graph.txt");
    write_graph(f, g);
  }
  return res;
}

std::uint64_t instance_seed(std::uint64_t root, int index) {
  return derive_seed(derive_seed(root, kStreamInstance), static_cast<std::uint64_t>(index));
}

InstanceOutcome run_instance(const ExperimentConfig& cfg, int index) {
  InstanceOutcome o;
  o.index = index;
  o.seed = instance_seed(cfg.seed, index);
  try {
    const UnitDiskGraph g =
        cfg.source == InstanceSource::kRandom
            ? random_unit_disk(cfg.n_vertices, cfg.resolved_box_side(),
                               derive_seed(o.seed, kStreamGraph))
            : load_instance(cfg);
    const DiagonalHamiltonian h = from_udmis(g, cfg.u);
    const Spectrum sp = spectrum(h);
    o.n_edges = static_cast<int>(g.n_edges());
    o.ground_energy = sp.ground_energy();
    o.gap = sp.gap();
    o.mis_size = brute_force_mis(g).size;
    if (cfg.u > 1.0 && std::abs(o.ground_energy + o.mis_size) > kEnergyTolerance) {
      spdlog::warn("instance {}: ground energy {} disagrees with MIS size {}", index,
                   o.ground_energy, o.mis_size);
    }
    const int n = g.n_vertices();
    const std::vector<int> shots = cfg.resolved_shots(n);
    const double de = cfg.delta_e.front().resolve(sp);
    for (DomainKind kind : cfg.domains) {
      const QiteConfig qc = config_for(cfg, kind, n, o.seed);
      const DomainSet domains = make_domains(kind, h, g, o.seed, cfg.reference_domains);
      const StateVector final_state = qite_evolve(h, domains, qc).final_state;
      std::vector<ShotOutcome> got =
          measure_all(final_state, h, sp, kind, de, shots, o.seed, cfg.repetitions);
      o.outcomes.insert(o.outcomes.end(), got.begin(), got.end());
    }
    o.ok = true;
  } catch (const std::exception& e) {
    o.ok = false;
    o.error = e.what();
    o.outcomes.clear();
    spdlog::error("instance {} failed: {}", index, e.what());
  }
  return o;
}

CampaignSummary campaign(const ExperimentConfig& cfg) {
  cfg.validate();
  CampaignSummary summary;
  summary.instances.resize(static_cast<std::size_t>(cfg.count));
  const int hw = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  const int workers = std::min(cfg.count, cfg.jobs > 0 ? cfg.jobs : hw);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < cfg.count; i = next++) {
      summary.instances[static_cast<std::size_t>(i)] = run_instance(cfg, i);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::map<std::pair<DomainKind, int>, std::pair<std::vector<double>, std::vector<double>>>
      values;
  for (const InstanceOutcome& inst : summary.instances) {
    if (!inst.ok) {
      ++summary.failed_instances;
      continue;
    }
    for (const ShotOutcome& o : inst.outcomes) {
      auto& v = values[{o.domain, o.shots}];
      v.first.push_back(o.result.best_energy);
      v.second.push_back(o.relative_error);
    }
  }
  for (DomainKind kind : cfg.domains) {
    for (const auto& [key, v] : values) {
      if (key.first != kind) continue;
      summary.histograms.push_back({kind, key.second,
                                    make_histogram(v.first, kEigenvalueBinWidth),
                                    make_histogram(v.second, kRelativeErrorBinWidth)});
    }
  }
  if (summary.failed_instances > 0) {
    spdlog::warn("campaign {}: {} of {} instances failed", cfg.name,
                 summary.failed_instances, cfg.count);
  }
  return summary;
}

CampaignSummary run_campaign(const ExperimentConfig& cfg) {
  CampaignSummary summary = campaign(cfg);
  const std::filesystem::path dir = cfg.experiment_dir();
  std::filesystem::create_directories(dir);
  {
    auto f = open_output(dir / "results.jsonl");
    for (const InstanceOutcome& inst : summary.instances) {
      for (const ShotOutcome& o : inst.outcomes) {
        nlohmann::json j = outcome_json(o);
        j["instance"] = inst.index;
        f << j.dump() << '\n';
      }
    }
  }
  {
    auto f = open_output(dir / "instances.csv");
    f << "index,seed,ok,n_edges,mis_size,ground_energy,gap,error\n";
    for (const InstanceOutcome& inst : summary.instances) {
      f << inst.index << ',' << inst.seed << ',' << (inst.ok ? 1 : 0) << ',' << inst.n_edges
        << ',' << inst.mis_size << ',' << fmt_double(inst.ground_energy) << ','
        << fmt_double(inst.gap) << ',' << csv_quote(inst.error) << '\n';
    }
  }
  const auto write_hist = [&](const std::string& file, bool eigen) {
    auto f = open_output(dir / file);
    f << "domain,shots,bin_low,bin_high,count,fraction\n";
    for (const CampaignHistograms& ch : summary.histograms) {
      const Histogram& hist = eigen ? ch.eigenvalues : ch.relative_errors;
      const double total = static_cast<double>(hist.total());
      for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        f << to_string(ch.domain) << ',' << ch.shots << ',' << fmt_double(hist.bin_low(i))
          << ',' << fmt_double(hist.bin_low(i + 1)) << ',' << hist.counts[i] << ','
          << fmt_double(static_cast<double>(hist.counts[i]) / total) << '\n';
      }
    }
  };
  write_hist("hist-eigenvalues.csv", true);
  write_hist("hist-relerr.csv", false);
  return summary;
}

}  // namespace qite_mis
