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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qite_mis/bitstring.hpp"
#include "qite_mis/pauli.hpp"

namespace qite_mis {

class UnitDiskGraph;

inline constexpr double kDefaultPenalty = 1.35;
inline constexpr int kMaxSpectrumQubits = 24;
/// Energies closer than this are one level.
inline constexpr double kEnergyTolerance = 1e-9;

/// H = a + sum_i b_i Z_i + sum_{i<i'} c_{ii'} Z_i Z_{i'}, diagonal in the
/// computational basis. Z_i is +1 on bit 0 and -1 on bit 1.
class DiagonalHamiltonian {
 public:
  using PairMap = std::map<std::pair<int, int>, double>;

  /// Pairs must satisfy i < i' < n; all coefficients finite.
  DiagonalHamiltonian(int n_qubits, double constant, std::vector<double> linear,
                      PairMap quadratic);

  int n_qubits() const { return n_; }
  double constant() const { return a_; }
  std::span<const double> linear() const { return b_; }
  const PairMap& quadratic() const { return c_; }

  double energy(const Bitstring& s) const;
  double energy(std::uint64_t basis_index) const;
  /// Energy of every basis state, indexed by basis index.
  std::vector<double> energies() const;

 private:
  int n_;
  double a_;
  std::vector<double> b_;
  PairMap c_;
};

/// -sum_i n_i + u sum_{(i,i') in E} n_i n_i' with n_i = (1 - Z_i)/2. A
/// penalty u <= 1 is accepted but logged, since the ground state is then not
/// guaranteed to be an independent set.
DiagonalHamiltonian from_udmis(const UnitDiskGraph& g, double u = kDefaultPenalty);

double energy(const DiagonalHamiltonian& h, const Bitstring& s);

struct SpectrumLevel {
  double energy = 0.0;
  std::uint64_t degeneracy = 0;
  /// Basis indices of the level, ascending.
  std::vector<std::uint64_t> members;
};

/// Sorted distinct energies of a diagonal Hamiltonian.
class Spectrum {
 public:
  Spectrum(int n_qubits, std::vector<SpectrumLevel> levels);

  int n_qubits() const { return n_; }
  std::uint64_t dimension() const { return std::uint64_t{1} << n_; }
  std::span<const SpectrumLevel> levels() const { return levels_; }
  double ground_energy() const { return levels_.front().energy; }
  std::uint64_t ground_degeneracy() const { return levels_.front().degeneracy; }
  /// E_1 - E_0, or 0 when there is a single level.
  double gap() const;
  /// Number of basis states with E <= E_0 + delta_e (with kEnergyTolerance
  /// slack): the threshold index r of the failure-probability bounds.
  std::uint64_t acceptable_count(double delta_e) const;
  /// True when a level at `energy` counts as failing for tolerance delta_e.
  bool is_failing(double energy, double delta_e) const;

 private:
  int n_;
  std::vector<SpectrumLevel> levels_;
};

Spectrum spectrum(const DiagonalHamiltonian& h);

/// One summand h[l] of the Hamiltonian as used by the Trotter product.
struct HamiltonianTerm {
  enum class Kind { kSingle, kPair };

  Kind kind;
  /// Support: {i} for a single-Z term, {i, i'} for a pair term.
  std::vector<int> qubits;
  std::vector<PauliTerm> terms;

  std::string label() const;
};

/// One single-Z term per qubit (ascending) followed by one ZZ term per
/// stored pair (lexicographic). The constant is attached to no term.
std::vector<HamiltonianTerm> term_decomposition(const DiagonalHamiltonian& h);

}  // namespace qite_mis
