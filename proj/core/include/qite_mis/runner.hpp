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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qite_mis/analysis.hpp"
#include "qite_mis/graph.hpp"
#include "qite_mis/hamiltonian.hpp"
#include "qite_mis/qite.hpp"
#include "qite_mis/sampler.hpp"

namespace qite_mis {

enum class InstanceSource { kFile, kReference6, kRandom };

std::string_view to_string(InstanceSource source);
InstanceSource parse_instance_source(std::string_view text);

/// Energy tolerance: a fixed value or the instance's own spectral gap.
struct DeltaE {
  bool use_gap = false;
  double value = 0.0;

  static DeltaE gap() { return {true, 0.0}; }
  static DeltaE fixed(double v) { return {false, v}; }
  /// "gap" or a non-negative number.
  static DeltaE parse(std::string_view text);

  double resolve(const Spectrum& spectrum) const;
  std::string label() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  InstanceSource source = InstanceSource::kReference6;
  std::filesystem::path graph_file;
  /// Campaign size; a characterization uses exactly one instance.
  int count = 1;
  int n_vertices = 6;
  /// Side of the sampling square; 0 selects default_box_side(n_vertices).
  double box_side = 0.0;
  /// Root of every random stream (graphs, domains, shots).
  std::uint64_t seed = 0;
  double u = kDefaultPenalty;
  QiteConfig qite;
  std::vector<DomainKind> domains{DomainKind::kA, DomainKind::kB};
  /// On the reference 6-qubit graph, use the published pair domains for B.
  bool reference_domains = false;
  /// The first entry drives the trajectory CSVs.
  std::vector<DeltaE> delta_e{DeltaE::gap(), DeltaE::fixed(0.0)};
  /// Shot counts; empty selects {N, 2N}.
  std::vector<int> shots;
  int repetitions = 1;
  std::filesystem::path output_dir = "out";
  /// Worker threads for campaigns; 0 selects the hardware concurrency.
  int jobs = 0;

  void validate() const;
  std::filesystem::path experiment_dir() const { return output_dir / name; }
  double resolved_box_side() const;
  std::vector<int> resolved_shots(int n) const;
};

/// Reads the TOML schema documented in the README. Relative paths are
/// resolved against the file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(std::string_view toml_text,
                                         const std::filesystem::path& base_dir = {});

/// Single instance named by the config (random: seeded by the root seed).
UnitDiskGraph load_instance(const ExperimentConfig& cfg);

/// Domain set of `kind` for one instance; `seed` drives the B draws.
DomainSet make_domains(DomainKind kind, const DiagonalHamiltonian& h,
                       const UnitDiskGraph& g, std::uint64_t seed,
                       bool reference_domains);

struct BoundReport {
  std::uint64_t ite_bound_checks = 0;
  std::uint64_t ite_bound_violations = 0;
  std::uint64_t qite_bound_checks = 0;
  std::uint64_t qite_bound_applicable = 0;
  std::uint64_t qite_bound_violations = 0;
  std::vector<std::string> violations;

  bool ok() const { return ite_bound_violations == 0 && qite_bound_violations == 0; }
};

struct ShotOutcome {
  DomainKind domain = DomainKind::kA;
  int shots = 0;
  int repetition = 0;
  SolveResult result;
  double relative_error = 0.0;
};

struct DomainRun {
  DomainKind kind = DomainKind::kA;
  DomainSet domains;
  QiteResult result;
  /// Trajectory for the first tolerance.
  std::vector<TrajectoryRecord> records;
  std::vector<ShotOutcome> solves;
};

/// (P_F)^M for one curve ("ite" or a domain kind) and tolerance.
struct PfmRow {
  std::string curve;
  double delta_e = 0.0;
  int shots = 0;
  double pf_power = 0.0;
};

struct CharacterizationResult {
  UnitDiskGraph graph;
  Spectrum spectrum;
  std::vector<double> delta_e;
  std::vector<DomainRun> runs;
  BoundReport bounds;
  std::vector<PfmRow> pfm;
};

/// Evolves every configured domain kind on `g` and audits both bounds at
/// every snapshot for every tolerance.
CharacterizationResult characterize(const ExperimentConfig& cfg, const UnitDiskGraph& g);

/// Loads the instance, runs characterize() and writes trajectory-<domain>.csv,
/// pfm.csv, bounds.txt, spectrum.csv and results.jsonl.
CharacterizationResult run_characterization(const ExperimentConfig& cfg);

void write_bound_report(std::ostream& out, const BoundReport& report);
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
void write_pfm_csv(std::ostream& out, std::span<const PfmRow> rows);

struct InstanceOutcome {
  int index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  int n_edges = 0;
  int mis_size = 0;
  double ground_energy = 0.0;
  double gap = 0.0;
  std::vector<ShotOutcome> outcomes;
};

struct CampaignHistograms {
  DomainKind domain = DomainKind::kA;
  int shots = 0;
  Histogram eigenvalues;
  Histogram relative_errors;
};

struct CampaignSummary {
  std::vector<InstanceOutcome> instances;
  int failed_instances = 0;
  std::vector<CampaignHistograms> histograms;
};

inline constexpr double kEigenvalueBinWidth = 0.05;
inline constexpr double kRelativeErrorBinWidth = 2.5;

/// Seed of campaign instance `index`.
std::uint64_t instance_seed(std::uint64_t root, int index);

/// Runs one campaign instance. Never throws; failures are recorded.
InstanceOutcome run_instance(const ExperimentConfig& cfg, int index);

/// All instances, in parallel over cfg.jobs workers; results are ordered
/// by instance index so the summary does not depend on the worker count.
CampaignSummary campaign(const ExperimentConfig& cfg);

/// campaign() plus results.jsonl, instances.csv, hist-eigenvalues.csv and
/// hist-relerr.csv.
CampaignSummary run_campaign(const ExperimentConfig& cfg);

}  // namespace qite_mis
