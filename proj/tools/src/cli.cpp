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


#include "qite_mis_cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "qite_mis/errors.hpp"
#include "qite_mis/graph.hpp"
#include "qite_mis/hamiltonian.hpp"
#include "qite_mis/qite.hpp"
#include "qite_mis/runner.hpp"
#include "qite_mis/sampler.hpp"
#include "qite_mis/seeding.hpp"

namespace qite_mis_cli {
namespace {

namespace qm = qite_mis;

// Flags shared by characterize and campaign. Only flags present on the
// command line override the config file.
struct ExperimentFlags {
  std::string config;
  std::string name;
  std::string out;
  std::string graph;
  bool reference6 = false;
  int n = 6;
  double box = 0.0;
  int count = 1;
  double u = qm::kDefaultPenalty;
  double tau = 0.01;
  int n_max = 100;
  std::vector<std::string> domains;
  bool reference_domains = false;
  double lambda = 1e-6;
  int record_every = 10;
  std::vector<std::string> delta_e;
  std::vector<int> shots;
  int repetitions = 1;
  std::uint64_t seed = 0;
  int jobs = 0;
};

void add_experiment_flags(CLI::App* sub, ExperimentFlags& f, bool campaign) {
  sub->add_option("--config", f.config, "TOML experiment file; flags override its values")
      ->check(CLI::ExistingFile);
  sub->add_option("--name", f.name, "Experiment name (output subdirectory)");
  sub->add_option("-o,--out", f.out, "Output root directory");
  sub->add_option("--graph", f.graph, "Graph file to use as the instance");
  sub->add_flag("--reference6", f.reference6, "Use the built-in 6-vertex reference graph");
  sub->add_option("-n,--vertices", f.n, "Vertices of random instances")->check(CLI::PositiveNumber);
  sub->add_option("--box", f.box, "Side of the square random points are drawn from (default 0.6 sqrt(n))")
      ->check(CLI::NonNegativeNumber);
  if (campaign) sub->add_option("--count", f.count, "Number of random instances")->check(CLI::PositiveNumber);
  sub->add_option("-u,--penalty", f.u, "Edge penalty u");
  sub->add_option("--tau", f.tau, "Time step");
  sub->add_option("--n-max", f.n_max, "Number of iterations");
  sub->add_option("--domains", f.domains, "Domain kinds: A, B, full")->delimiter(',');
  sub->add_flag("--reference-domains", f.reference_domains,
                "Use the published B domains on the reference graph");
  sub->add_option("--lambda", f.lambda, "Regularization of the substep solve");
  sub->add_option("--record-every", f.record_every, "Snapshot interval in iterations");
  sub->add_option("--delta-e", f.delta_e, "Energy tolerances: numbers or 'gap'")->delimiter(',');
  sub->add_option("-M,--shots", f.shots, "Shot counts (default N,2N)")->delimiter(',');
  sub->add_option("--repetitions", f.repetitions, "Measurement repetitions per shot count");
  sub->add_option("--seed", f.seed, "Root seed of every random stream");
  if (campaign) sub->add_option("-j,--jobs", f.jobs, "Worker threads (0: all cores)");
}

qm::ExperimentConfig resolve_experiment(const CLI::App* sub, const ExperimentFlags& f,
                                        bool campaign) {
  qm::ExperimentConfig cfg;
  if (!f.config.empty()) {
    cfg = qm::load_experiment_config(f.config);
  } else {
    cfg.name = campaign ? "campaign" : "characterize";
    if (campaign) {
      cfg.source = qm::InstanceSource::kRandom;
      cfg.domains = {qm::DomainKind::kA};
    }
  }
  const auto given = [&](const char* flag) { return sub->count(flag) > 0; };
  if (given("--name")) cfg.name = f.name;
  if (given("--out")) cfg.output_dir = f.out;
  if (given("--graph")) {
    cfg.source = qm::InstanceSource::kFile;
    cfg.graph_file = f.graph;
  }
  if (f.reference6) cfg.source = qm::InstanceSource::kReference6;
  if (given("--vertices")) {
    cfg.n_vertices = f.n;
    if (!given("--graph") && !f.reference6) cfg.source = qm::InstanceSource::kRandom;
  }
  if (given("--box")) cfg.box_side = f.box;
  if (campaign && given("--count")) cfg.count = f.count;
  if (given("--penalty")) cfg.u = f.u;
  if (given("--tau")) cfg.qite.tau = f.tau;
  if (given("--n-max")) cfg.qite.n_max = f.n_max;
  if (given("--domains")) {
    cfg.domains.clear();
    for (const std::string& d : f.domains) cfg.domains.push_back(qm::parse_domain_kind(d));
  }
  if (f.reference_domains) cfg.reference_domains = true;
  if (given("--lambda")) cfg.qite.regularization_lambda = f.lambda;
  if (given("--record-every")) cfg.qite.record_every = f.record_every;
  if (given("--delta-e")) {
    cfg.delta_e.clear();
    for (const std::string& d : f.delta_e) cfg.delta_e.push_back(qm::DeltaE::parse(d));
  }
  if (given("--shots")) cfg.shots = f.shots;
  if (given("--repetitions")) cfg.repetitions = f.repetitions;
  if (given("--seed")) cfg.seed = f.seed;
  if (campaign && given("--jobs")) cfg.jobs = f.jobs;
  cfg.validate();
  return cfg;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

// Installs a logger writing to `err` for the duration of one run.
class ScopedLogger {
 public:
  explicit ScopedLogger(std::ostream& err) : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
    auto logger = std::make_shared<spdlog::logger>("qite_mis", sink);
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::warn);
    spdlog::set_default_logger(logger);
  }
  ~ScopedLogger() { spdlog::set_default_logger(previous_); }
  ScopedLogger(const ScopedLogger&) = delete;
  ScopedLogger& operator=(const ScopedLogger&) = delete;

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ScopedLogger logger(err);
  CLI::App app{"Quantum imaginary time evolution for unit-disk maximum independent set"};
  app.name("qite_mis");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "qite_mis 0.1.0");
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "More logging on stderr (repeatable)");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random unit-disk graph or the reference graph");
  int gen_n = 6;
  double gen_box = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  bool gen_ref = false;
  gen->add_option("-n,--vertices", gen_n, "Number of vertices");
  gen->add_option("--box", gen_box, "Side of the sampling square (default 0.6 sqrt(n))");
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_flag("--reference6", gen_ref, "Write the built-in 6-vertex reference graph");
  gen->add_option("-o,--output", gen_out, "Output file (default: stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Evolve, measure and print the best sample as JSON");
  std::string solve_graph;
  double solve_u = qm::kDefaultPenalty;
  double solve_tau = 0.01;
  int solve_n_max = 100;
  std::string solve_domain = "A";
  int solve_shots = 0;
  std::uint64_t solve_seed = 0;
  std::string solve_delta = "gap";
  double solve_lambda = 1e-6;
  solve->add_option("graph", solve_graph, "Graph file")->required();
  solve->add_option("-u,--penalty", solve_u, "Edge penalty u");
  solve->add_option("--tau", solve_tau, "Time step");
  solve->add_option("--n-max", solve_n_max, "Number of iterations");
  solve->add_option("--domain", solve_domain, "Domain kind: A, B or full");
  solve->add_option("-M,--shots", solve_shots, "Number of shots (default 2N)");
  solve->add_option("--seed", solve_seed, "Root seed (domains and shots)");
  solve->add_option("--delta-e", solve_delta, "Success tolerance: number or 'gap'");
  solve->add_option("--lambda", solve_lambda, "Regularization of the substep solve");

  // characterize / campaign
  auto* chr = app.add_subcommand("characterize",
                                 "Trajectory diagnostics and bound audit for one instance");
  ExperimentFlags chr_flags;
  add_experiment_flags(chr, chr_flags, false);
  auto* camp = app.add_subcommand("campaign", "Solve many random instances and histogram the results");
  ExperimentFlags camp_flags;
  add_experiment_flags(camp, camp_flags, true);

  // bruteforce / spectrum
  auto* brute = app.add_subcommand("bruteforce", "Exact maximum independent set by enumeration");
  std::string brute_graph;
  bool brute_list = false;
  brute->add_option("graph", brute_graph, "Graph file")->required();
  brute->add_flag("--list", brute_list, "Also print every witness");
  auto* spec = app.add_subcommand("spectrum", "Lowest levels of the diagonal Hamiltonian");
  std::string spec_graph;
  double spec_u = qm::kDefaultPenalty;
  int spec_levels = 2;
  spec->add_option("graph", spec_graph, "Graph file")->required();
  spec->add_option("-u,--penalty", spec_u, "Edge penalty u");
  spec->add_option("--levels", spec_levels, "Number of levels to print")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  spdlog::default_logger()->set_level(verbosity >= 2   ? spdlog::level::debug
                                      : verbosity == 1 ? spdlog::level::info
                                                       : spdlog::level::warn);

  try {
    if (*gen) {
      if (!gen_ref && gen_n < 1) throw std::invalid_argument("-n must be at least 1");
      const qm::UnitDiskGraph g =
          gen_ref ? qm::reference_graph_6q()
                  : qm::random_unit_disk(gen_n, gen_box > 0.0 ? gen_box : qm::default_box_side(gen_n),
                                         gen_seed);
      if (gen_out.empty()) {
        qm::write_graph(out, g);
      } else {
        qm::save_graph(gen_out, g);
        spdlog::info("wrote {} ({} vertices, {} edges)", gen_out, g.n_vertices(), g.n_edges());
      }
    } else if (*solve) {
      const qm::UnitDiskGraph g = qm::load_graph(solve_graph);
      const qm::DiagonalHamiltonian h = qm::from_udmis(g, solve_u);
      const qm::Spectrum sp = qm::spectrum(h);
      qm::QiteConfig cfg;
      cfg.tau = solve_tau;
      cfg.n_max = solve_n_max;
      cfg.domain_kind = qm::parse_domain_kind(solve_domain);
      cfg.regularization_lambda = solve_lambda;
      cfg.rng_seed = solve_seed;
      cfg.record_every = cfg.n_max;
      if (cfg.domain_kind == qm::DomainKind::kFull) {
        cfg.domain_cap = std::min(qm::kMaxDomainCap, std::max(cfg.domain_cap, g.n_vertices()));
      }
      const qm::DomainSet domains = qm::make_domains(cfg.domain_kind, h, g, solve_seed, false);
      const qm::FailureSpec fs{qm::DeltaE::parse(solve_delta).resolve(sp),
                               solve_shots > 0 ? solve_shots : 2 * g.n_vertices()};
      const qm::SolveResult r = qm::solve(h, domains, cfg, fs);
      nlohmann::json j = nlohmann::json::parse(qm::solve_result_json(r));
      j["shots"] = fs.shots;
      j["ground_energy"] = sp.ground_energy();
      j["relative_error"] = qm::relative_error(sp.ground_energy(), r.best_energy);
      out << j.dump() << '\n';
    } else if (*chr) {
      const qm::ExperimentConfig cfg = resolve_experiment(chr, chr_flags, false);
      const qm::CharacterizationResult res = qm::run_characterization(cfg);
      out << "wrote " << cfg.experiment_dir().string() << '\n';
      for (const qm::DomainRun& run : res.runs) {
        const qm::TrajectoryRecord& last = run.records.back();
        out << "domain " << qm::to_string(run.kind) << ": epsilon(t_max)=" << fmt(last.epsilon)
            << " fidelity_final=" << fmt(last.fidelity_final) << " pf_qite=" << fmt(last.pf_qite)
            << '\n';
      }
      out << "bounds " << (res.bounds.ok() ? "ok" : "VIOLATED") << '\n';
      if (!res.bounds.ok()) {
        spdlog::error("bound audit failed; see bounds.txt");
        return kExitInternal;
      }
    } else if (*camp) {
      const qm::ExperimentConfig cfg = resolve_experiment(camp, camp_flags, true);
      const qm::CampaignSummary s = qm::run_campaign(cfg);
      out << "wrote " << cfg.experiment_dir().string() << '\n';
      out << "instances " << s.instances.size() << ", failed " << s.failed_instances << '\n';
      for (const qm::CampaignHistograms& h : s.histograms) {
        const double total = static_cast<double>(h.relative_errors.total());
        const double zero = h.relative_errors.counts.empty() || h.relative_errors.origin != 0.0
                                ? 0.0
                                : static_cast<double>(h.relative_errors.counts[0]) / total;
        out << "domain " << qm::to_string(h.domain) << " M=" << h.shots
            << ": fraction in lowest relative-error bin " << fmt(zero) << '\n';
      }
    } else if (*brute) {
      const qm::UnitDiskGraph g = qm::load_graph(brute_graph);
      const qm::MisResult r = qm::brute_force_mis(g);
      out << "MIS size " << r.size << "; " << r.witnesses.size() << " witnesses\n";
      if (brute_list) {
        for (const qm::Bitstring& w : r.witnesses) out << w.to_string() << '\n';
      }
    } else if (*spec) {
      const qm::UnitDiskGraph g = qm::load_graph(spec_graph);
      const qm::Spectrum sp = qm::spectrum(qm::from_udmis(g, spec_u));
      const auto levels = sp.levels();
      const std::size_t k = std::min(levels.size(), static_cast<std::size_t>(spec_levels));
      for (std::size_t i = 0; i < k; ++i) {
        out << (i ? ", " : "") << '(' << fmt(levels[i].energy) << ", " << levels[i].degeneracy
            << ')';
      }
      out << '\n';
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const qm::ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace qite_mis_cli
