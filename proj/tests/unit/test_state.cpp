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


#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "oracle.hpp"
#include "qite_mis/errors.hpp"
#include "qite_mis/state.hpp"

namespace qite_mis {
namespace {

constexpr double kTol = 1e-12;

TEST(StateVector, PlusAndBasis) {
  const StateVector p = StateVector::plus(3);
  EXPECT_EQ(p.dim(), 8U);
  for (const auto& a : p.amplitudes()) EXPECT_NEAR(a.real(), 1.0 / std::sqrt(8.0), kTol);
  EXPECT_NEAR(p.norm(), 1.0, kTol);
  const StateVector b = StateVector::basis(3, 0b100);
  EXPECT_EQ(b[4], Amplitude(1.0, 0.0));
  // Qubit 0 is the most significant bit: Z0 reads -1 on |100>.
  EXPECT_NEAR(expect(b, PauliString::parse("Z0")).real(), -1.0, kTol);
  EXPECT_NEAR(expect(b, PauliString::parse("Z2")).real(), 1.0, kTol);
}

TEST(StateVector, ConstructionErrors) {
  EXPECT_THROW(StateVector::plus(0), std::invalid_argument);
  EXPECT_THROW(StateVector::plus(StateVector::kMaxQubits + 1), ResourceError);
  EXPECT_THROW(StateVector::basis(2, 4), std::out_of_range);
  EXPECT_THROW(StateVector::from_amplitudes(2, {1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(StateVector::from_amplitudes(1, {0.0, 0.0}), NumericalError);
}

TEST(StateVector, FromAmplitudesNormalizes) {
  const StateVector s = StateVector::from_amplitudes(1, {3.0, Amplitude(0.0, 4.0)});
  EXPECT_NEAR(s[0].real(), 0.6, kTol);
  EXPECT_NEAR(s[1].imag(), 0.8, kTol);
}

TEST(Expect, MatchesDenseOnRandomStates) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const StateVector s = oracle::random_state(4, rng);
    const PauliString p = oracle::random_string(4, rng);
    const Eigen::VectorXcd v = oracle::vec(s);
    const std::complex<double> want = v.dot(oracle::dense(p, 4) * v);
    const std::complex<double> got = expect(s, p);
    EXPECT_NEAR(got.real(), want.real(), 1e-12);
    EXPECT_NEAR(got.imag(), want.imag(), 1e-12);
    // Hermitian observable: real expectation.
    EXPECT_NEAR(got.imag(), 0.0, 1e-12);
  }
}

TEST(Expect, QubitOutsideStateThrows) {
  EXPECT_THROW(expect(StateVector::plus(2), PauliString::parse("X2")), std::out_of_range);
}

TEST(InnerProducts, FidelityAndDistance) {
  const StateVector a = StateVector::basis(1, 0);
  const StateVector p = StateVector::plus(1);
  EXPECT_NEAR(fidelity(a, p), 0.5, kTol);
  EXPECT_NEAR(std::abs(inner_product(a, p)), std::sqrt(0.5), kTol);
  EXPECT_NEAR(norm_distance(a, a), 0.0, kTol);
  EXPECT_NEAR(norm_distance(a, StateVector::basis(1, 1)), std::sqrt(2.0), kTol);
  EXPECT_THROW(fidelity(a, StateVector::plus(2)), std::invalid_argument);
}

TEST(LocalMatrix, MatchesKroneckerOnDomain) {
  const std::vector<RealPauliTerm> terms{{0.5, PauliString::parse("X1*Z3")},
                                         {-1.0, PauliString::parse("Y3")}};
  const std::vector<int> dom{1, 3};
  const Eigen::MatrixXcd m = local_matrix(terms, dom);
  const Eigen::MatrixXcd want =
      0.5 * Eigen::kroneckerProduct(oracle::single(Pauli::X), oracle::single(Pauli::Z)).eval() -
      Eigen::kroneckerProduct(oracle::single(Pauli::I), oracle::single(Pauli::Y)).eval();
  EXPECT_TRUE(m.isApprox(want, 1e-14));
  EXPECT_THROW(local_matrix(terms, std::vector<int>{1}), std::invalid_argument);
}

// Partial trace against an explicit sum over the complement.
TEST(ReducedDensityMatrix, MatchesExplicitPartialTrace) {
  std::mt19937_64 rng(5);
  const int n = 4;
  const StateVector s = oracle::random_state(n, rng);
  const std::vector<int> dom{0, 2};
  const Eigen::MatrixXcd rho = reduced_density_matrix(s, dom);
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(4, 4);
  for (std::uint64_t i = 0; i < 16; ++i) {
    for (std::uint64_t j = 0; j < 16; ++j) {
      const auto bit = [&](std::uint64_t x, int q) { return (x >> (n - 1 - q)) & 1U; };
      if (bit(i, 1) != bit(j, 1) || bit(i, 3) != bit(j, 3)) continue;
      const auto li = static_cast<Eigen::Index>(bit(i, 0) * 2 + bit(i, 2));
      const auto lj = static_cast<Eigen::Index>(bit(j, 0) * 2 + bit(j, 2));
      want(li, lj) += s[i] * std::conj(s[j]);
    }
  }
  EXPECT_TRUE(rho.isApprox(want, 1e-13));
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-13);
}

TEST(ReducedDensityMatrix, ReproducesLocalExpectations) {
  std::mt19937_64 rng(9);
  const StateVector s = oracle::random_state(5, rng);
  const std::vector<int> dom{1, 2, 4};
  const Eigen::MatrixXcd rho = reduced_density_matrix(s, dom);
  for (const PauliString& p : enumerate_basis(dom)) {
    const std::vector<RealPauliTerm> t{{1.0, p}};
    const std::complex<double> local = (rho * local_matrix(t, dom)).trace();
    EXPECT_NEAR(std::abs(local - expect(s, p)), 0.0, 1e-12) << p.to_string();
  }
}

TEST(ApplyLocalOperator, MatchesDenseOperator) {
  std::mt19937_64 rng(13);
  const StateVector s = oracle::random_state(4, rng);
  const std::vector<RealPauliTerm> terms{{0.3, PauliString::parse("X1*Y3")},
                                         {0.7, PauliString::parse("Z1")}};
  const std::vector<int> dom{1, 3};
  const StateVector out = apply_local_operator(s, dom, local_matrix(terms, dom));
  const Eigen::VectorXcd want = oracle::sum(terms, 4) * oracle::vec(s);
  EXPECT_TRUE(oracle::vec(out).isApprox(want, 1e-13));
  EXPECT_THROW(apply_local_operator(s, dom, Eigen::MatrixXcd::Identity(2, 2)),
               std::invalid_argument);
}

TEST(PauliRotation, MatchesMatrixExponential) {
  std::mt19937_64 rng(17);
  const StateVector s = oracle::random_state(3, rng);
  const std::vector<RealPauliTerm> terms{{0.4, PauliString::parse("Y0")},
                                         {-0.2, PauliString::parse("X0*Y2")},
                                         {0.9, PauliString::parse("Z2")}};
  const double angle = 0.37;
  const StateVector out = apply_pauli_rotation(s, terms, angle);
  const Eigen::MatrixXcd a = oracle::sum(terms, 3);
  const Eigen::MatrixXcd u = (std::complex<double>(0, -angle) * a).exp();
  EXPECT_TRUE(oracle::vec(out).isApprox(u * oracle::vec(s), 1e-12));
  EXPECT_NEAR(out.norm(), 1.0, 1e-14);
}

TEST(PauliRotation, IdentityOnlyIsGlobalPhase) {
  const StateVector s = StateVector::plus(2);
  const std::vector<RealPauliTerm> terms{{1.0, PauliString()}};
  const StateVector out = apply_pauli_rotation(s, terms, 0.5);
  EXPECT_NEAR(fidelity(out, s), 1.0, kTol);
}

TEST(UnitaryExponential, ImaginaryGeneratorGivesExactlyRealResult) {
  const std::vector<RealPauliTerm> terms{{0.8, PauliString::parse("Y0")},
                                         {0.3, PauliString::parse("X0*Y1")}};
  const std::vector<int> dom{0, 1};
  const Eigen::MatrixXcd u = unitary_exponential(local_matrix(terms, dom), 0.2);
  EXPECT_TRUE(u.imag().isZero(0.0));
  const Eigen::MatrixXcd want =
      (std::complex<double>(0, -0.2) * oracle::sum(terms, 2)).exp();
  EXPECT_TRUE(u.isApprox(want, 1e-13));
}

TEST(PauliImaginary, MatchesNormalizedExponential) {
  std::mt19937_64 rng(19);
  const StateVector s = oracle::random_state(3, rng);
  const std::vector<PauliTerm> terms{{-0.5, PauliString::parse("Z1")},
                                     {0.25, PauliString::parse("Z0*Z1")}};
  const StateVector out = apply_pauli_imaginary(s, terms, 0.7);
  Eigen::VectorXcd want = (-0.7 * oracle::sum(terms, 3)).exp() * oracle::vec(s);
  want.normalize();
  EXPECT_TRUE(oracle::vec(out).isApprox(want, 1e-12));
  const std::vector<PauliTerm> bad{{std::complex<double>(0, 1), PauliString::parse("Z0")}};
  EXPECT_THROW(apply_pauli_imaginary(s, bad, 0.1), std::invalid_argument);
}

TEST(DiagonalImaginary, StableForLongTimes) {
  const std::vector<double> e{0.0, -1.0, 2.0, -1.0};
  const StateVector out = apply_diagonal_imaginary(StateVector::plus(2), e, 5000.0);
  EXPECT_NEAR(std::norm(out[1]), 0.5, kTol);
  EXPECT_NEAR(std::norm(out[3]), 0.5, kTol);
  EXPECT_NEAR(std::norm(out[0]), 0.0, kTol);
  EXPECT_THROW(apply_diagonal_imaginary(StateVector::plus(2), e, NAN), std::invalid_argument);
  EXPECT_THROW(apply_diagonal_imaginary(StateVector::plus(1), e, 1.0), std::invalid_argument);
}

TEST(BinaryDump, RoundTrips) {
  std::mt19937_64 rng(23);
  const StateVector s = oracle::random_state(3, rng);
  std::stringstream buf;
  write_state_binary(buf, s);
  EXPECT_EQ(buf.str().size(), 4U + 8U * 16U);
  const StateVector back = read_state_binary(buf);
  EXPECT_EQ(back.n_qubits(), 3);
  EXPECT_TRUE(oracle::vec(back).isApprox(oracle::vec(s), 1e-15));
  std::stringstream truncated(buf.str().substr(0, 10));
  EXPECT_ANY_THROW(read_state_binary(truncated));
}

}  // namespace
}  // namespace qite_mis
