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

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qite_mis/graph.hpp"
#include "qite_mis/hamiltonian.hpp"
#include "qite_mis/pauli.hpp"
#include "qite_mis/state.hpp"

namespace qite_mis {

enum class DomainKind { kA, kB, kFull, kCustom };

/// "A", "B", "full", "custom".
std::string_view to_string(DomainKind kind);
DomainKind parse_domain_kind(std::string_view text);

inline constexpr int kDefaultDomainCap = 4;
/// Largest domain the engine will solve on (4^5 - 1 unknowns).
inline constexpr int kMaxDomainCap = 5;

/// One qubit set per Hamiltonian term, aligned with term_decomposition.
/// Domains are fixed for the whole evolution.
struct DomainSet {
  DomainKind kind = DomainKind::kCustom;
  std::vector<std::vector<int>> per_term;

  int max_size() const;
};

/// Throws std::invalid_argument unless `domains` has one entry per term,
/// each entry is a valid qubit set containing the term's support. Throws
/// ResourceError when an entry is wider than `cap`.
void validate_domains(const DomainSet& domains,
                      std::span<const HamiltonianTerm> terms, int n_qubits,
                      int cap = kDefaultDomainCap);

/// Each term acts on exactly its own support.
DomainSet build_domain_A(const DiagonalHamiltonian& h);

/// Single-Z terms as in build_domain_A. The domain of pair (i, j) adds two
/// vertices drawn uniformly without replacement from
/// (N(i) u N(j)) \ {i, j}; with fewer than two candidates all are taken.
DomainSet build_domain_B(const DiagonalHamiltonian& h, const UnitDiskGraph& g,
                         std::uint64_t seed);

/// Every term acts on all qubits. Only usable for small N.
DomainSet build_domain_full(const DiagonalHamiltonian& h);

/// The published 4-qubit pair domains for reference_graph_6q() (one
/// realization of build_domain_B on that graph).
DomainSet reference_domain_B_6q(const DiagonalHamiltonian& h);

/// True when every pair domain has the shape build_domain_B produces:
/// the pair itself plus min(2, #candidates) of its neighbors.
bool is_domain_B_shape(const DomainSet& domains, const DiagonalHamiltonian& h,
                       const UnitDiskGraph& g);

struct QiteConfig {
  double tau = 0.01;
  int n_max = 100;
  DomainKind domain_kind = DomainKind::kA;
  double regularization_lambda = 1e-6;
  std::uint64_t rng_seed = 0;
  int record_every = 10;
  int domain_cap = kDefaultDomainCap;
  /// For real states and real terms the odd-Y and even-Y unknowns decouple
  /// and the even-Y right-hand side vanishes; solve only the odd-Y block.
  bool real_block_reduction = true;
  /// Also record the distance to the exact normalized e^{-tau h[l]} substep.
  bool track_substep_residual = false;

  double t_max() const { return tau * n_max; }
  void validate() const;
};

/// The system S a = b of one substep over enumerate_basis(domain).
struct SubstepSystem {
  std::vector<PauliString> basis;
  Eigen::MatrixXcd s;
  Eigen::VectorXd b;
};

/// S_IJ = <sigma_I sigma_J> and b_I = -2 Im <sigma_I h_l> on the state.
SubstepSystem substep_linear_system(const StateVector& state,
                                    std::span<const PauliTerm> term,
                                    std::span<const int> domain);

/// Solves (m + lambda I) a = -b. With lambda > 0 by LDLT; with lambda = 0
/// the minimum-norm least-squares solution.
Eigen::VectorXd solve_regularized(const Eigen::MatrixXd& m,
                                  const Eigen::VectorXd& b, double lambda);

struct SubstepSolution {
  int term_index = -1;
  std::vector<RealPauliTerm> coefficients;
  /// ||Re(S + S^T) a + b||.
  double residual = 0.0;
};

SubstepSolution solve_substep(const SubstepSystem& system, double lambda);

/// ||normalize(e^{-tau h_l}|psi>) - e^{-i tau A}|psi>||, with both sides
/// applied exactly.
double substep_residual(const StateVector& before,
                        std::span<const PauliTerm> term,
                        const SubstepSolution& solution, double tau);

struct Snapshot {
  int iteration = 0;
  double t = 0.0;
  StateVector state;
};

struct SubstepRecord {
  int iteration = 0;
  double t = 0.0;
  int term_index = 0;
  double residual = 0.0;
  double norm_drift = 0.0;
  /// NaN unless QiteConfig::track_substep_residual is set.
  double substep_error = std::numeric_limits<double>::quiet_NaN();
};

struct QiteTrace {
  /// Iteration 0, every record_every-th iteration, and the last one.
  std::vector<Snapshot> snapshots;
  std::vector<SubstepRecord> substeps;
};

struct QiteResult {
  StateVector final_state;
  QiteTrace trace;
};

/// Runs n_max iterations of the Trotterized update from plus_state(N),
/// applying the terms in term_decomposition order and building every
/// substep system from the current state.
QiteResult qite_evolve(const DiagonalHamiltonian& h, const DomainSet& domains,
                       const QiteConfig& cfg);

/// Columns: iteration,t,term_index,residual,norm_drift.
void write_trace_csv(std::ostream& out, const QiteTrace& trace);

}  // namespace qite_mis
