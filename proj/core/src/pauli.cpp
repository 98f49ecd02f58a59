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

#include "qite_mis/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "qite_mis/errors.hpp"

namespace qite_mis {
namespace {

void check_qubit(int qubit) {
  if (qubit < 0 || qubit >= PauliString::kMaxQubits) {
    throw std::out_of_range("Pauli qubit index " + std::to_string(qubit) +
                            " outside [0, 64)");
  }
}

Pauli letter_from_bits(bool x, bool z) {
  if (x) return z ? Pauli::Y : Pauli::X;
  return z ? Pauli::Z : Pauli::I;
}

}  // namespace

char to_char(Pauli p) {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(p)];
}

std::complex<double> i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

PauliString PauliString::single(int qubit, Pauli letter) {
  check_qubit(qubit);
  PauliString p;
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  if (letter == Pauli::X || letter == Pauli::Y) p.x_ |= bit;
  if (letter == Pauli::Z || letter == Pauli::Y) p.z_ |= bit;
  return p;
}

PauliString PauliString::from_masks(std::uint64_t x_mask, std::uint64_t z_mask) {
  PauliString p;
  p.x_ = x_mask;
  p.z_ = z_mask;
  return p;
}

PauliString PauliString::from_support(
    std::span<const std::pair<int, Pauli>> support) {
  PauliString p;
  int previous = -1;
  for (const auto& [qubit, letter] : support) {
    check_qubit(qubit);
    if (qubit <= previous) {
      throw std::invalid_argument(
          "Pauli support must have strictly increasing qubit indices");
    }
    if (letter == Pauli::I) {
      throw std::invalid_argument("identity letters are not stored in a support");
    }
    previous = qubit;
    const PauliString s = single(qubit, letter);
    p.x_ |= s.x_;
    p.z_ |= s.z_;
  }
  return p;
}

PauliString PauliString::parse(std::string_view text) {
  if (text == "I" || text.empty()) return {};
  std::vector<std::pair<int, Pauli>> support;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('*', pos), text.size());
    const std::string_view factor = text.substr(pos, end - pos);
    if (factor.size() < 2) {
      throw std::invalid_argument("malformed Pauli factor '" +
                                  std::string(factor) + "'");
    }
    Pauli letter;
    switch (factor[0]) {
      case 'X': letter = Pauli::X; break;
      case 'Y': letter = Pauli::Y; break;
      case 'Z': letter = Pauli::Z; break;
      default:
        throw std::invalid_argument("unknown Pauli letter in '" +
                                    std::string(factor) + "'");
    }
    int qubit = 0;
    const auto [ptr, ec] =
        std::from_chars(factor.data() + 1, factor.data() + factor.size(), qubit);
    if (ec != std::errc{} || ptr != factor.data() + factor.size()) {
      throw std::invalid_argument("bad qubit index in '" +
                                  std::string(factor) + "'");
    }
    support.emplace_back(qubit, letter);
    if (end + 1 == text.size()) {
      throw std::invalid_argument("trailing '*' in Pauli string");
    }
    pos = end + 1;
  }
  return from_support(support);
}

Pauli PauliString::letter(int qubit) const {
  check_qubit(qubit);
  return letter_from_bits((x_ >> qubit) & 1U, (z_ >> qubit) & 1U);
}

int PauliString::weight() const { return std::popcount(x_ | z_); }

int PauliString::y_count() const { return std::popcount(x_ & z_); }

int PauliString::max_qubit() const {
  const std::uint64_t mask = x_ | z_;
  return mask == 0 ? -1 : 63 - std::countl_zero(mask);
}

std::vector<std::pair<int, Pauli>> PauliString::support() const {
  std::vector<std::pair<int, Pauli>> out;
  for (std::uint64_t mask = x_ | z_; mask != 0; mask &= mask - 1) {
    const int q = std::countr_zero(mask);
    out.emplace_back(q, letter(q));
  }
  return out;
}

std::vector<int> PauliString::support_qubits() const {
  std::vector<int> out;
  for (std::uint64_t mask = x_ | z_; mask != 0; mask &= mask - 1) {
    out.push_back(std::countr_zero(mask));
  }
  return out;
}

std::string PauliString::to_string() const {
  if (is_identity()) return "I";
  std::string out;
  for (const auto& [qubit, letter] : support()) {
    if (!out.empty()) out += '*';
    out += to_char(letter);
    out += std::to_string(qubit);
  }
  return out;
}

PauliProduct mul(const PauliString& p, const PauliString& q) {
  const std::uint64_t px = p.x_mask() & ~p.z_mask();
  const std::uint64_t py = p.x_mask() & p.z_mask();
  const std::uint64_t pz = ~p.x_mask() & p.z_mask();
  const std::uint64_t qx = q.x_mask() & ~q.z_mask();
  const std::uint64_t qy = q.x_mask() & q.z_mask();
  const std::uint64_t qz = ~q.x_mask() & q.z_mask();
  // XY = iZ, YZ = iX, ZX = iY; the reversed orders pick up -i.
  const int plus = std::popcount(px & qy) + std::popcount(py & qz) +
                   std::popcount(pz & qx);
  const int minus = std::popcount(py & qx) + std::popcount(pz & qy) +
                    std::popcount(px & qz);
  return {((plus - minus) % 4 + 4) % 4,
          PauliString::from_masks(p.x_mask() ^ q.x_mask(),
                                  p.z_mask() ^ q.z_mask())};
}

PauliTerm::PauliTerm(std::complex<double> coefficient_, PauliString string_)
    : coefficient(coefficient_), string(string_) {
  if (!std::isfinite(coefficient.real()) || !std::isfinite(coefficient.imag())) {
    throw std::invalid_argument("PauliTerm coefficient must be finite");
  }
}

std::vector<int> canonical_domain(std::span<const int> domain) {
  std::vector<int> out(domain.begin(), domain.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw std::invalid_argument("domain contains a duplicate qubit");
  }
  for (int q : out) check_qubit(q);
  return out;
}

std::uint32_t local_code(const PauliString& p, std::span<const int> domain) {
  std::uint64_t domain_mask = 0;
  std::uint32_t code = 0;
  for (int q : domain) {
    domain_mask |= std::uint64_t{1} << q;
    code = code * 4 + static_cast<std::uint32_t>(p.letter(q));
  }
  if ((p.support_mask() & ~domain_mask) != 0) {
    throw std::invalid_argument("Pauli string " + p.to_string() +
                                " acts outside its domain");
  }
  return code;
}

PauliString from_local_code(std::uint32_t code, std::span<const int> domain) {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (std::size_t k = domain.size(); k-- > 0;) {
    const auto letter = static_cast<Pauli>(code & 3U);
    code >>= 2;
    const std::uint64_t bit = std::uint64_t{1} << domain[k];
    if (letter == Pauli::X || letter == Pauli::Y) x |= bit;
    if (letter == Pauli::Z || letter == Pauli::Y) z |= bit;
  }
  return PauliString::from_masks(x, z);
}

std::vector<PauliString> enumerate_basis(std::span<const int> domain) {
  if (domain.empty()) {
    throw std::invalid_argument("enumerate_basis needs a nonempty domain");
  }
  const std::vector<int> sorted = canonical_domain(domain);
  if (static_cast<int>(sorted.size()) > kMaxBasisDomain) {
    throw ResourceError("domain of " + std::to_string(sorted.size()) +
                        " qubits exceeds the basis cap of " +
                        std::to_string(kMaxBasisDomain));
  }
  const std::uint32_t count = std::uint32_t{1} << (2 * sorted.size());
  std::vector<PauliString> out;
  out.reserve(count - 1);
  for (std::uint32_t code = 1; code < count; ++code) {
    out.push_back(from_local_code(code, sorted));
  }
  return out;
}

}  // namespace qite_mis
