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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qite_mis {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);

/// i^k for any integer k.
std::complex<double> i_pow(int k);

/// Tensor product of single-qubit Pauli operators, identity on every qubit
/// not listed. Stored as two bitmasks (bit q = qubit q): X sets x, Z sets z,
/// Y sets both. The empty string is the identity.
class PauliString {
 public:
  static constexpr int kMaxQubits = 64;

  PauliString() = default;

  static PauliString single(int qubit, Pauli letter);
  static PauliString from_masks(std::uint64_t x_mask, std::uint64_t z_mask);
  /// Support must have strictly increasing qubit indices and no I letters.
  static PauliString from_support(
      std::span<const std::pair<int, Pauli>> support);
  /// Inverse of to_string: "X0*Z3*Y5", or "I" for the identity.
  static PauliString parse(std::string_view text);

  bool is_identity() const { return (x_ | z_) == 0; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  std::uint64_t support_mask() const { return x_ | z_; }
  Pauli letter(int qubit) const;
  int weight() const;
  int y_count() const;
  /// Highest qubit acted on, or -1 for the identity.
  int max_qubit() const;
  std::vector<std::pair<int, Pauli>> support() const;
  std::vector<int> support_qubits() const;

  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// Result of an operator product: i^i_power * string.
struct PauliProduct {
  int i_power = 0;
  PauliString string;

  std::complex<double> phase() const { return i_pow(i_power); }
};

PauliProduct mul(const PauliString& p, const PauliString& q);

/// Complex-weighted Pauli string; the weight must be finite.
struct PauliTerm {
  PauliTerm(std::complex<double> coefficient, PauliString string);

  std::complex<double> coefficient;
  PauliString string;
};

/// Real-weighted Pauli string, the form every Hermitian update operator takes.
struct RealPauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

/// All 4^|domain| - 1 non-identity strings supported inside `domain`.
///
/// Order: the string's letters on the domain qubits (ascending qubit index)
/// read as a base-4 number with I=0 < X=1 < Y=2 < Z=3 and the lowest qubit
/// most significant; strings are listed by increasing number. For {0} this
/// is X0, Y0, Z0; for {0,1} it starts X1, Y1, Z1, X0, X0*X1, ...
///
/// The position of a string in this list is local_code(...) - 1.
std::vector<PauliString> enumerate_basis(std::span<const int> domain);

/// Maximum domain width accepted by enumerate_basis.
inline constexpr int kMaxBasisDomain = 8;

/// Base-4 code of `p` relative to `domain` (see enumerate_basis). Throws if
/// p acts outside the domain. The identity has code 0.
std::uint32_t local_code(const PauliString& p, std::span<const int> domain);

/// Inverse of local_code.
PauliString from_local_code(std::uint32_t code, std::span<const int> domain);

/// Normalizes a domain: sorts, rejects duplicates and out-of-range indices.
std::vector<int> canonical_domain(std::span<const int> domain);

}  // namespace qite_mis
