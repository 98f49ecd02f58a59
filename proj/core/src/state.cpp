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

#include "qite_mis/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

#include "qite_mis/errors.hpp"
#include "qite_mis/hamiltonian.hpp"

namespace qite_mis {
namespace {

// Maps (local index, rest base) to a global basis index for a set of domain
// qubits. Rest bases are the global indices with every domain bit cleared.
struct DomainLayout {
  std::vector<std::uint64_t> offsets;
  std::uint64_t mask = 0;
  std::uint64_t rest_count = 0;
};

DomainLayout make_layout(int n_qubits, std::span<const int> domain) {
  const int k = static_cast<int>(domain.size());
  DomainLayout layout;
  layout.offsets.assign(std::size_t{1} << k, 0);
  for (int p = 0; p < k; ++p) {
    const int q = domain[p];
    if (q < 0 || q >= n_qubits) {
      throw std::out_of_range("qubit " + std::to_string(q) +
                              " outside a state of " +
                              std::to_string(n_qubits) + " qubits");
    }
    const std::uint64_t global_bit = std::uint64_t{1} << (n_qubits - 1 - q);
    layout.mask |= global_bit;
    const std::size_t local_bit = std::size_t{1} << (k - 1 - p);
    for (std::size_t j = 0; j < layout.offsets.size(); ++j) {
      if (j & local_bit) layout.offsets[j] |= global_bit;
    }
  }
  layout.rest_count = std::uint64_t{1} << (n_qubits - k);
  return layout;
}

// Visits every rest base in increasing order.
template <typename Fn>
void for_each_rest(const DomainLayout& layout, Fn&& fn) {
  std::uint64_t base = 0;
  for (std::uint64_t r = 0; r < layout.rest_count; ++r) {
    fn(base);
    base = ((base | layout.mask) + 1) & ~layout.mask;
  }
}

std::vector<int> checked_domain(std::span<const int> domain) {
  std::vector<int> sorted = canonical_domain(domain);
  if (static_cast<int>(sorted.size()) > kMaxDenseDomain) {
    throw ResourceError("dense domain of " + std::to_string(sorted.size()) +
                        " qubits exceeds the cap of " +
                        std::to_string(kMaxDenseDomain));
  }
  return sorted;
}

template <typename Term>
std::vector<int> union_support(std::span<const Term> terms) {
  std::uint64_t mask = 0;
  for (const Term& t : terms) mask |= t.string.support_mask();
  std::vector<int> out;
  for (; mask != 0; mask &= mask - 1) out.push_back(std::countr_zero(mask));
  return out;
}

template <typename Term>
Eigen::MatrixXcd build_local_matrix(std::span<const Term> terms,
                                    std::span<const int> domain) {
  const std::vector<int> sorted = checked_domain(domain);
  const int k = static_cast<int>(sorted.size());
  const std::size_t dim = std::size_t{1} << k;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const Term& t : terms) {
    const std::complex<double> c{t.coefficient};
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("Pauli coefficient must be finite");
    }
    // Local x/z masks in the local index convention.
    std::size_t x = 0;
    std::size_t z = 0;
    for (int p = 0; p < k; ++p) {
      const Pauli letter = t.string.letter(sorted[p]);
      const std::size_t bit = std::size_t{1} << (k - 1 - p);
      if (letter == Pauli::X || letter == Pauli::Y) x |= bit;
      if (letter == Pauli::Z || letter == Pauli::Y) z |= bit;
    }
    local_code(t.string, sorted);  // throws if the term leaves the domain
    const std::complex<double> y_phase = i_pow(t.string.y_count());
    // P|a> = i^{#Y} (-1)^{popcount(a & z)} |a ^ x>.
    for (std::size_t a = 0; a < dim; ++a) {
      const double sign = (std::popcount(a & z) & 1) ? -1.0 : 1.0;
      m(a ^ x, a) += c * y_phase * sign;
    }
  }
  return m;
}

// Column r holds the domain amplitudes of the r-th rest base.
Eigen::MatrixXcd gather(const DomainLayout& layout,
                        std::span<const Amplitude> amps) {
  const auto dim = static_cast<Eigen::Index>(layout.offsets.size());
  Eigen::MatrixXcd v(dim, static_cast<Eigen::Index>(layout.rest_count));
  Eigen::Index col = 0;
  for_each_rest(layout, [&](std::uint64_t base) {
    for (Eigen::Index j = 0; j < dim; ++j) v(j, col) = amps[base | layout.offsets[j]];
    ++col;
  });
  return v;
}

void warn_on_drift(double drift, const char* where) {
  if (drift > StateVector::kDriftWarning) {
    spdlog::warn("{}: norm drifted by {:.3e} before renormalization", where,
                 drift);
  }
}

}  // namespace

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1) {
    throw std::invalid_argument("a state needs at least one qubit");
  }
  if (n_qubits > StateVector::kMaxQubits) {
    throw ResourceError(std::to_string(n_qubits) +
                        " qubits exceeds the state-vector cap of " +
                        std::to_string(StateVector::kMaxQubits));
  }
}

StateVector::StateVector(int n_qubits, std::vector<Amplitude> amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {}

StateVector StateVector::plus(int n_qubits) {
  check_qubit_count(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  const double amp = std::pow(2.0, -0.5 * n_qubits);
  return StateVector(n_qubits, std::vector<Amplitude>(dim, Amplitude{amp, 0.0}));
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  check_qubit_count(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw std::out_of_range("basis index out of range");
  std::vector<Amplitude> amps(dim);
  amps[index] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(int n_qubits,
                                         std::vector<Amplitude> amplitudes) {
  check_qubit_count(n_qubits);
  if (amplitudes.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("amplitude count does not match 2^n");
  }
  StateVector s(n_qubits, std::move(amplitudes));
  s.renormalize();
  return s;
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const Amplitude& a : amps_) sum += std::norm(a);
  return std::sqrt(sum);
}

double StateVector::renormalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw NumericalError("state norm is zero or not finite");
  }
  const double inv = 1.0 / n;
  for (Amplitude& a : amps_) a *= inv;
  return std::abs(n - 1.0);
}

std::complex<double> expect(const StateVector& state, const PauliString& p) {
  const int n = state.n_qubits();
  if (p.max_qubit() >= n) {
    throw std::out_of_range("Pauli string " + p.to_string() +
                            " acts outside the state");
  }
  // Translate qubit masks into basis-index masks (qubit q -> bit n-1-q).
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (const auto& [q, letter] : p.support()) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    if (letter == Pauli::X || letter == Pauli::Y) x |= bit;
    if (letter == Pauli::Z || letter == Pauli::Y) z |= bit;
  }
  const auto amps = state.amplitudes();
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double sign = (std::popcount(i & z) & 1) ? -1.0 : 1.0;
    sum += std::conj(amps[i ^ x]) * amps[i] * sign;
  }
  return sum * i_pow(p.y_count());
}

std::complex<double> inner_product(const StateVector& x, const StateVector& y) {
  if (x.n_qubits() != y.n_qubits()) {
    throw std::invalid_argument("states have different qubit counts");
  }
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) sum += std::conj(x[i]) * y[i];
  return sum;
}

double norm_distance(const StateVector& x, const StateVector& y) {
  if (x.n_qubits() != y.n_qubits()) {
    throw std::invalid_argument("states have different qubit counts");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) sum += std::norm(x[i] - y[i]);
  return std::sqrt(sum);
}

double fidelity(const StateVector& x, const StateVector& y) {
  return std::norm(inner_product(x, y));
}

Eigen::MatrixXcd local_matrix(std::span<const RealPauliTerm> terms,
                              std::span<const int> domain) {
  return build_local_matrix(terms, domain);
}

Eigen::MatrixXcd local_matrix(std::span<const PauliTerm> terms,
                              std::span<const int> domain) {
  return build_local_matrix(terms, domain);
}

Eigen::MatrixXcd reduced_density_matrix(const StateVector& state,
                                        std::span<const int> domain) {
  const std::vector<int> sorted = checked_domain(domain);
  const DomainLayout layout = make_layout(state.n_qubits(), sorted);
  const auto amps = state.amplitudes();
  const Eigen::MatrixXcd v = gather(layout, amps);
  Eigen::MatrixXcd rho = v * v.adjoint();
  return rho;
}

StateVector apply_local_operator(StateVector state, std::span<const int> domain,
                                 const Eigen::MatrixXcd& op) {
  const std::vector<int> sorted = checked_domain(domain);
  const DomainLayout layout = make_layout(state.n_qubits(), sorted);
  const auto dim = static_cast<Eigen::Index>(layout.offsets.size());
  if (op.rows() != dim || op.cols() != dim) {
    throw std::invalid_argument("local operator has the wrong dimension");
  }
  const auto amps = state.mutable_amplitudes();
  const Eigen::MatrixXcd w = op * gather(layout, amps);
  Eigen::Index col = 0;
  for_each_rest(layout, [&](std::uint64_t base) {
    for (Eigen::Index j = 0; j < dim; ++j) amps[base | layout.offsets[j]] = w(j, col);
    ++col;
  });
  return state;
}

Eigen::MatrixXcd unitary_exponential(const Eigen::MatrixXcd& a, double angle) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the update operator failed");
  }
  const Eigen::VectorXcd phases = eig.eigenvalues().unaryExpr(
      [angle](double lambda) { return std::polar(1.0, -angle * lambda); });
  Eigen::MatrixXcd u =
      eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  if (a.real().isZero(0.0)) u = u.real().cast<std::complex<double>>();
  return u;
}

StateVector apply_pauli_rotation(StateVector state,
                                 std::span<const RealPauliTerm> terms,
                                 double angle) {
  const std::vector<int> domain = union_support(terms);
  if (domain.empty()) {
    // Only identity terms: a global phase.
    double c = 0.0;
    for (const auto& t : terms) c += t.coefficient;
    const std::complex<double> phase = std::polar(1.0, -angle * c);
    for (Amplitude& a : state.mutable_amplitudes()) a *= phase;
    return state;
  }
  const Eigen::MatrixXcd u =
      unitary_exponential(build_local_matrix(terms, domain), angle);
  state = apply_local_operator(std::move(state), domain, u);
  warn_on_drift(state.renormalize(), "apply_pauli_rotation");
  return state;
}

StateVector apply_pauli_imaginary(StateVector state,
                                  std::span<const PauliTerm> terms, double tau) {
  const std::vector<int> domain = union_support(terms);
  if (domain.empty()) return state;
  const Eigen::MatrixXcd h = build_local_matrix(terms, domain);
  if (!h.isApprox(h.adjoint(), 1e-12)) {
    throw std::invalid_argument("apply_pauli_imaginary needs a Hermitian sum");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the term failed");
  }
  // Shift so the largest weight is exactly 1.
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double shift = tau >= 0 ? lambda.minCoeff() : lambda.maxCoeff();
  const Eigen::VectorXd weights =
      lambda.unaryExpr([&](double l) { return std::exp(-tau * (l - shift)); });
  const Eigen::MatrixXcd op = eig.eigenvectors() *
                              weights.cast<std::complex<double>>().asDiagonal() *
                              eig.eigenvectors().adjoint();
  state = apply_local_operator(std::move(state), domain, op);
  state.renormalize();
  return state;
}

StateVector apply_diagonal_imaginary(StateVector state,
                                     std::span<const double> energies, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  if (energies.size() != state.dim()) {
    throw std::invalid_argument("energy table does not match the state size");
  }
  const auto amps = state.mutable_amplitudes();
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (amps[i] != Amplitude{}) {
      shift = std::max(shift, std::log(std::abs(amps[i])) - t * energies[i]);
    }
  }
  if (!std::isfinite(shift)) {
    throw NumericalError("imaginary-time weighting left no finite amplitude");
  }
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double magnitude = std::abs(amps[i]);
    if (magnitude == 0.0) continue;
    const double scaled =
        std::exp(std::log(magnitude) - t * energies[i] - shift);
    amps[i] = amps[i] / magnitude * scaled;
  }
  state.renormalize();
  return state;
}

StateVector apply_diagonal_imaginary(StateVector state,
                                     const DiagonalHamiltonian& h, double t) {
  if (h.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("Hamiltonian and state sizes differ");
  }
  const std::vector<double> e = h.energies();
  return apply_diagonal_imaginary(std::move(state), e, t);
}

namespace {

template <typename T>
void write_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw std::runtime_error("truncated state dump");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(bytes), std::end(bytes));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_state_binary(std::ostream& out, const StateVector& state) {
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(state.n_qubits()));
  for (const Amplitude& a : state.amplitudes()) {
    write_le<double>(out, a.real());
    write_le<double>(out, a.imag());
  }
}

StateVector read_state_binary(std::istream& in) {
  const auto n = static_cast<int>(read_le<std::uint32_t>(in));
  check_qubit_count(n);
  std::vector<Amplitude> amps(std::size_t{1} << n);
  for (Amplitude& a : amps) {
    const double re = read_le<double>(in);
    const double im = read_le<double>(in);
    a = {re, im};
  }
  return StateVector::from_amplitudes(n, std::move(amps));
}

}  // namespace qite_mis
