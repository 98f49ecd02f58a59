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

#include "qite_mis/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "qite_mis/errors.hpp"
#include "qite_mis/graph.hpp"

namespace qite_mis {
namespace {

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

DiagonalHamiltonian::DiagonalHamiltonian(int n_qubits, double constant,
                                         std::vector<double> linear,
                                         PairMap quadratic)
    : n_(n_qubits), a_(constant), b_(std::move(linear)), c_(std::move(quadratic)) {
  if (n_ < 1 || n_ > Bitstring::kMaxBits) {
    throw std::invalid_argument("Hamiltonian qubit count out of range");
  }
  if (static_cast<int>(b_.size()) != n_) {
    throw std::invalid_argument("need one linear coefficient per qubit");
  }
  check_finite(a_, "constant coefficient");
  for (double b : b_) check_finite(b, "linear coefficient");
  for (const auto& [pair, c] : c_) {
    if (pair.first < 0 || pair.first >= pair.second || pair.second >= n_) {
      throw std::invalid_argument("quadratic pair must satisfy 0 <= i < i' < n");
    }
    check_finite(c, "quadratic coefficient");
  }
}

double DiagonalHamiltonian::energy(std::uint64_t basis_index) const {
  const auto z = [&](int q) {
    return ((basis_index >> (n_ - 1 - q)) & 1U) ? -1.0 : 1.0;
  };
  double e = a_;
  for (int q = 0; q < n_; ++q) e += b_[q] * z(q);
  for (const auto& [pair, c] : c_) e += c * z(pair.first) * z(pair.second);
  return e;
}

double DiagonalHamiltonian::energy(const Bitstring& s) const {
  if (s.size() != n_) {
    throw std::invalid_argument("bitstring length does not match the Hamiltonian");
  }
  return energy(s.index());
}

std::vector<double> DiagonalHamiltonian::energies() const {
  if (n_ > kMaxSpectrumQubits) {
    throw ResourceError("energy table is limited to " +
                        std::to_string(kMaxSpectrumQubits) + " qubits");
  }
  const std::size_t dim = std::size_t{1} << n_;
  // Accumulate term by term; each term is a +-coefficient pattern.
  std::vector<double> e(dim, a_);
  for (int q = 0; q < n_; ++q) {
    if (b_[q] == 0.0) continue;
    const std::size_t bit = std::size_t{1} << (n_ - 1 - q);
    for (std::size_t i = 0; i < dim; ++i) e[i] += (i & bit) ? -b_[q] : b_[q];
  }
  for (const auto& [pair, c] : c_) {
    const std::size_t mask = (std::size_t{1} << (n_ - 1 - pair.first)) |
                             (std::size_t{1} << (n_ - 1 - pair.second));
    for (std::size_t i = 0; i < dim; ++i) {
      e[i] += (std::popcount(i & mask) & 1) ? -c : c;
    }
  }
  return e;
}

DiagonalHamiltonian from_udmis(const UnitDiskGraph& g, double u) {
  if (!std::isfinite(u) || u <= 0.0) {
    throw std::invalid_argument("penalty u must be positive");
  }
  if (u <= 1.0) {
    spdlog::warn("penalty u = {} <= 1: ground states need not be independent sets",
                 u);
  }
  const int n = g.n_vertices();
  const double n_edges = static_cast<double>(g.n_edges());
  std::vector<double> b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) b[i] = 0.5 - u * g.degree(i) / 4.0;
  DiagonalHamiltonian::PairMap c;
  for (const auto& [i, j] : g.edges()) c[{i, j}] = u / 4.0;
  return DiagonalHamiltonian(n, -n / 2.0 + u * n_edges / 4.0, std::move(b),
                             std::move(c));
}

double energy(const DiagonalHamiltonian& h, const Bitstring& s) {
  return h.energy(s);
}

Spectrum::Spectrum(int n_qubits, std::vector<SpectrumLevel> levels)
    : n_(n_qubits), levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("spectrum has no levels");
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (k > 0 && !(levels_[k].energy > levels_[k - 1].energy)) {
      throw std::invalid_argument("spectrum levels must strictly increase");
    }
    total += levels_[k].degeneracy;
  }
  if (total != dimension()) {
    throw std::invalid_argument("spectrum degeneracies do not sum to 2^N");
  }
}

double Spectrum::gap() const {
  return levels_.size() > 1 ? levels_[1].energy - levels_[0].energy : 0.0;
}

bool Spectrum::is_failing(double energy, double delta_e) const {
  return energy > ground_energy() + delta_e + kEnergyTolerance;
}

std::uint64_t Spectrum::acceptable_count(double delta_e) const {
  std::uint64_t count = 0;
  for (const SpectrumLevel& level : levels_) {
    if (!is_failing(level.energy, delta_e)) count += level.degeneracy;
  }
  return count;
}

Spectrum spectrum(const DiagonalHamiltonian& h) {
  const std::vector<double> e = h.energies();
  std::vector<std::uint64_t> order(e.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint64_t x, std::uint64_t y) { return e[x] < e[y]; });
  std::vector<SpectrumLevel> levels;
  for (std::uint64_t idx : order) {
    if (levels.empty() || e[idx] - levels.back().energy > kEnergyTolerance) {
      levels.push_back({e[idx], 0, {}});
    }
    levels.back().degeneracy += 1;
    levels.back().members.push_back(idx);
  }
  for (SpectrumLevel& level : levels) {
    std::sort(level.members.begin(), level.members.end());
  }
  return Spectrum(h.n_qubits(), std::move(levels));
}

std::string HamiltonianTerm::label() const {
  std::string out = kind == Kind::kSingle ? "Z" : "ZZ";
  out += '(';
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(qubits[k]);
  }
  return out + ')';
}

std::vector<HamiltonianTerm> term_decomposition(const DiagonalHamiltonian& h) {
  std::vector<HamiltonianTerm> out;
  for (int q = 0; q < h.n_qubits(); ++q) {
    out.push_back({HamiltonianTerm::Kind::kSingle,
                   {q},
                   {PauliTerm(h.linear()[q], PauliString::single(q, Pauli::Z))}});
  }
  for (const auto& [pair, c] : h.quadratic()) {
    const auto [i, j] = pair;
    const std::pair<int, Pauli> support[] = {{i, Pauli::Z}, {j, Pauli::Z}};
    out.push_back({HamiltonianTerm::Kind::kPair,
                   {i, j},
                   {PauliTerm(c, PauliString::from_support(support))}});
  }
  return out;
}

}  // namespace qite_mis
