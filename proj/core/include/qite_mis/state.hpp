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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qite_mis/pauli.hpp"

namespace qite_mis {

class DiagonalHamiltonian;

using Amplitude = std::complex<double>;

/// Dense normalized state of n qubits.
///
/// Basis convention (shared by every module): amplitude index i encodes the
/// bitstring s_0 s_1 ... s_{n-1} with qubit 0 as the MOST significant bit,
/// i.e. qubit q is bit (n - 1 - q) of i.
class StateVector {
 public:
  static constexpr int kMaxQubits = 24;
  /// Norm drift above this before renormalization is logged as a warning.
  static constexpr double kDriftWarning = 1e-8;

  /// |+>^n.
  static StateVector plus(int n_qubits);
  /// Computational basis state |index>.
  static StateVector basis(int n_qubits, std::uint64_t index);
  /// Normalizes `amplitudes`; throws NumericalError for a zero vector.
  static StateVector from_amplitudes(int n_qubits,
                                     std::vector<Amplitude> amplitudes);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
  double norm() const;

  /// Write access for the evolution kernels; callers must finish with
  /// renormalize().
  std::span<Amplitude> mutable_amplitudes() { return amps_; }
  /// Rescales to unit norm and returns the drift |norm - 1| seen before the
  /// rescale. Throws NumericalError if the norm is zero or not finite.
  double renormalize();

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  StateVector(int n_qubits, std::vector<Amplitude> amplitudes);

  int n_;
  std::vector<Amplitude> amps_;
};

/// Resource check shared by every constructor: 1 <= n <= kMaxQubits.
void check_qubit_count(int n_qubits);

inline StateVector plus_state(int n_qubits) { return StateVector::plus(n_qubits); }

/// <psi| p |psi>.
std::complex<double> expect(const StateVector& state, const PauliString& p);

/// <x|y>.
std::complex<double> inner_product(const StateVector& x, const StateVector& y);

/// ||x - y||_2, without any phase alignment.
double norm_distance(const StateVector& x, const StateVector& y);

/// |<x|y>|^2.
double fidelity(const StateVector& x, const StateVector& y);

/// Largest domain on which a dense local operator is built.
inline constexpr int kMaxDenseDomain = 8;

/// Dense 2^k x 2^k matrix of sum_j c_j P_j on `domain` (ascending qubits,
/// first domain qubit most significant in the local index).
Eigen::MatrixXcd local_matrix(std::span<const RealPauliTerm> terms,
                              std::span<const int> domain);
Eigen::MatrixXcd local_matrix(std::span<const PauliTerm> terms,
                              std::span<const int> domain);

/// Reduced density matrix rho_D = Tr_{not D} |psi><psi|, in the same local
/// index convention as local_matrix.
Eigen::MatrixXcd reduced_density_matrix(const StateVector& state,
                                        std::span<const int> domain);

/// Applies a 2^k x 2^k operator to the domain qubits (identity elsewhere).
/// Does not renormalize; follow with StateVector::renormalize().
StateVector apply_local_operator(StateVector state, std::span<const int> domain,
                                 const Eigen::MatrixXcd& op);

/// exp(-i angle A) for a Hermitian matrix A, by eigendecomposition. When A is
/// purely imaginary the result is real orthogonal and is returned with an
/// exactly zero imaginary part.
Eigen::MatrixXcd unitary_exponential(const Eigen::MatrixXcd& a, double angle);

/// exp(-i angle A) |psi> with A = sum_j c_j P_j, exponentiated exactly on the
/// union of the supports by Hermitian eigendecomposition.
StateVector apply_pauli_rotation(StateVector state,
                                 std::span<const RealPauliTerm> terms,
                                 double angle);

/// exp(-tau h)|psi> / ||exp(-tau h)|psi>|| for a Hermitian Pauli sum h,
/// exponentiated exactly on the union of the supports.
StateVector apply_pauli_imaginary(StateVector state,
                                  std::span<const PauliTerm> terms, double tau);

/// Normalized e^{-t H}|psi> for H diagonal with the given per-basis-state
/// energies. Weights are shifted in log space so that the largest weighted
/// amplitude is O(1), which keeps long times free of under/overflow.
StateVector apply_diagonal_imaginary(StateVector state,
                                     std::span<const double> energies, double t);
StateVector apply_diagonal_imaginary(StateVector state,
                                     const DiagonalHamiltonian& h, double t);

// Binary dump: u32 qubit count, then 2^n (re, im) pairs of f64, all
// little-endian.
void write_state_binary(std::ostream& out, const StateVector& state);
StateVector read_state_binary(std::istream& in);

}  // namespace qite_mis
