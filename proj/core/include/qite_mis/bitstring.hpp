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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace qite_mis {

/// Length-N assignment s_0 ... s_{N-1} of {0,1}, one bit per vertex/qubit.
///
/// The packed index uses the library-wide basis convention: qubit 0 is the
/// most significant bit, so index() is also the computational basis index
/// of |s_0 s_1 ... s_{N-1}>.
class Bitstring {
 public:
  static constexpr int kMaxBits = 63;

  /// The empty string.
  Bitstring() = default;
  Bitstring(int n_bits, std::uint64_t index);
  /// Parses a 0/1 string, e.g. "010011".
  static Bitstring parse(std::string_view bits);

  int size() const { return n_; }
  std::uint64_t index() const { return index_; }
  bool operator[](int qubit) const {
    return (index_ >> (n_ - 1 - qubit)) & 1U;
  }
  /// Hamming weight |S|.
  int weight() const;
  std::string to_string() const;

  friend auto operator<=>(const Bitstring&, const Bitstring&) = default;

 private:
  int n_ = 0;
  std::uint64_t index_ = 0;
};

}  // namespace qite_mis
