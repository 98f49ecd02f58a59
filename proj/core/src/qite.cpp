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


#include "qite_mis/qite.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "qite_mis/errors.hpp"
#include "qite_mis/seeding.hpp"

namespace qite_mis {
namespace {

// Multiplication table and matrix structure of the 4^k local strings, in
// local_code order over a k-qubit domain. Local basis index bit (k-1-p)
// belongs to domain position p, as in reduced_density_matrix.
struct LocalAlgebra {
  int k = 0;
  std::uint32_t count = 0;
  std::vector<std::uint32_t> x;
  std::vector<std::uint32_t> z;
  std::vector<std::uint8_t> y;
  std::vector<std::uint32_t> product;
  std::vector<std::uint8_t> product_power;

  explicit LocalAlgebra(int qubits) : k(qubits), count(1U << (2 * qubits)) {
    std::vector<int> dom(static_cast<std::size_t>(k));
    for (int p = 0; p < k; ++p) dom[static_cast<std::size_t>(p)] = p;
    std::vector<PauliString> strings;
    strings.reserve(count);
    x.resize(count);
    z.resize(count);
    y.resize(count);
    for (std::uint32_t c = 0; c < count; ++c) {
      const PauliString s = from_local_code(c, dom);
      strings.push_back(s);
      for (int p = 0; p < k; ++p) {
        const std::uint32_t bit = 1U << (k - 1 - p);
        if ((s.x_mask() >> p) & 1U) x[c] |= bit;
        if ((s.z_mask() >> p) & 1U) z[c] |= bit;
      }
      y[c] = static_cast<std::uint8_t>(s.y_count());
    }
    product.resize(std::size_t{count} * count);
    product_power.resize(std::size_t{count} * count);
    for (std::uint32_t i = 0; i < count; ++i) {
      for (std::uint32_t j = 0; j < count; ++j) {
        const PauliProduct pr = mul(strings[i], strings[j]);
        product[std::size_t{i} * count + j] = local_code(pr.string, dom);
        product_power[std::size_t{i} * count + j] =
            static_cast<std::uint8_t>(((pr.i_power % 4) + 4) % 4);
      }
    }
  }

  // Sign and i-power of <a ^ x_c| sigma_c |a>.
  std::complex<double> element(std::uint32_t c, std::uint32_t a) const {
    const std::complex<double> ph = i_pow(y[c]);
    return (std::popcount(a & z[c]) & 1) ? -ph : ph;
  }

  // tr(rho sigma_c) for every code c.
  std::vector<std::complex<double>> expectations(const Eigen::MatrixXcd& rho) const {
    const std::uint32_t dim = 1U << k;
    std::vector<std::complex<double>> e(count);
    for (std::uint32_t c = 0; c < count; ++c) {
      std::complex<double> sum = 0.0;
      for (std::uint32_t a = 0; a < dim; ++a) {
        const std::complex<double> r = rho(a, a ^ x[c]);
        sum += (std::popcount(a & z[c]) & 1) ? -r : r;
      }
      e[c] = sum * i_pow(y[c]);
    }
    return e;
  }

  // Local matrix of sum_c coeff[c] sigma_c.
  Eigen::MatrixXcd matrix(std::span<const std::uint32_t> codes,
                          std::span<const double> coeff) const {
    const std::uint32_t dim = 1U << k;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < codes.size(); ++i) {
      if (coeff[i] == 0.0) continue;
      const std::uint32_t c = codes[i];
      for (std::uint32_t a = 0; a < dim; ++a) {
        m(a ^ x[c], a) += coeff[i] * element(c, a);
      }
    }
    return m;
  }
};

const LocalAlgebra& local_algebra(int k) {
  switch (k) {
    case 1: { static const LocalAlgebra t(1); return t; }
    case 2: { static const LocalAlgebra t(2); return t; }
    case 3: { static const LocalAlgebra t(3); return t; }
    case 4: { static const LocalAlgebra t(4); return t; }
    case 5: { static const LocalAlgebra t(5); return t; }
    default:
      throw ResourceError("domain of " + std::to_string(k) +
                          " qubits exceeds the engine cap of " +
                          std::to_string(kMaxDomainCap));
  }
}

struct TermCodes {
  std::vector<std::uint32_t> codes;
  std::vector<std::complex<double>> coefficients;
  bool real = true;
};

TermCodes encode_term(std::span<const PauliTerm> term, std::span<const int> domain) {
  TermCodes out;
  for (const PauliTerm& t : term) {
    out.codes.push_back(local_code(t.string, domain));
    out.coefficients.push_back(t.coefficient);
    if (t.coefficient.imag() != 0.0 || t.string.y_count() % 2 != 0) out.real = false;
  }
  return out;
}

// Builds Re(S + S^T) and b restricted to `active` codes.
void assemble(const LocalAlgebra& alg, const std::vector<std::complex<double>>& e,
              const TermCodes& term, std::span<const std::uint32_t> active,
              Eigen::MatrixXd& m, Eigen::VectorXd& b) {
  const auto n = static_cast<Eigen::Index>(active.size());
  m.resize(n, n);
  b.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t row = std::size_t{active[static_cast<std::size_t>(i)]} * alg.count;
    for (Eigen::Index j = i; j < n; ++j) {
      const std::size_t idx = row + active[static_cast<std::size_t>(j)];
      const double v =
          2.0 * (i_pow(alg.product_power[idx]) * e[alg.product[idx]]).real();
      m(i, j) = v;
      m(j, i) = v;
    }
    std::complex<double> sh = 0.0;
    for (std::size_t t = 0; t < term.codes.size(); ++t) {
      const std::size_t idx = row + term.codes[t];
      sh += term.coefficients[t] * i_pow(alg.product_power[idx]) * e[alg.product[idx]];
    }
    b(i) = -2.0 * sh.imag();
  }
}

void check_finite(const Eigen::MatrixXd& m, const Eigen::VectorXd& b) {
  if (!m.allFinite() || !b.allFinite()) {
    throw NumericalError("substep system has non-finite entries");
  }
}

struct TermContext {
  std::vector<int> domain;
  const LocalAlgebra* algebra = nullptr;
  TermCodes term;
  std::vector<PauliTerm> pauli_terms;
  std::vector<std::uint32_t> all_codes;
  std::vector<std::uint32_t> odd_y_codes;
};

TermContext make_context(const HamiltonianTerm& t, std::span<const int> domain) {
  TermContext ctx;
  ctx.domain = canonical_domain(domain);
  ctx.algebra = &local_algebra(static_cast<int>(ctx.domain.size()));
  ctx.term = encode_term(t.terms, ctx.domain);
  ctx.pauli_terms = t.terms;
  for (std::uint32_t c = 1; c < ctx.algebra->count; ++c) {
    ctx.all_codes.push_back(c);
    if (ctx.algebra->y[c] % 2 == 1) ctx.odd_y_codes.push_back(c);
  }
  return ctx;
}

}  // namespace

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::kA: return "A";
    case DomainKind::kB: return "B";
    case DomainKind::kFull: return "full";
    case DomainKind::kCustom: return "custom";
  }
  return "custom";
}

DomainKind parse_domain_kind(std::string_view text) {
  if (text == "A" || text == "a") return DomainKind::kA;
  if (text == "B" || text == "b") return DomainKind::kB;
  if (text == "full") return DomainKind::kFull;
  if (text == "custom") return DomainKind::kCustom;
  throw std::invalid_argument("unknown domain kind '" + std::string(text) +
                              "' (expected A, B, full or custom)");
}

int DomainSet::max_size() const {
  std::size_t m = 0;
  for (const auto& d : per_term) m = std::max(m, d.size());
  return static_cast<int>(m);
}

void validate_domains(const DomainSet& domains,
                      std::span<const HamiltonianTerm> terms, int n_qubits,
                      int cap) {
  if (domains.per_term.size() != terms.size()) {
    throw std::invalid_argument("domain set has " +
                                std::to_string(domains.per_term.size()) +
                                " entries for " + std::to_string(terms.size()) +
                                " terms");
  }
  for (std::size_t l = 0; l < terms.size(); ++l) {
    const std::vector<int> d = canonical_domain(domains.per_term[l]);
    if (d.empty()) throw std::invalid_argument("empty domain for term " + terms[l].label());
    if (d.back() >= n_qubits) {
      throw std::invalid_argument("domain of term " + terms[l].label() +
                                  " leaves the register");
    }
    for (int q : terms[l].qubits) {
      if (!std::binary_search(d.begin(), d.end(), q)) {
        throw std::invalid_argument("domain of term " + terms[l].label() +
                                    " misses qubit " + std::to_string(q));
      }
    }
    if (static_cast<int>(d.size()) > cap) {
      throw ResourceError("domain of term " + terms[l].label() + " has " +
                          std::to_string(d.size()) + " qubits, cap is " +
                          std::to_string(cap));
    }
  }
}

DomainSet build_domain_A(const DiagonalHamiltonian& h) {
  DomainSet out{DomainKind::kA, {}};
  for (const HamiltonianTerm& t : term_decomposition(h)) out.per_term.push_back(t.qubits);
  return out;
}

DomainSet build_domain_B(const DiagonalHamiltonian& h, const UnitDiskGraph& g,
                         std::uint64_t seed) {
  if (g.n_vertices() != h.n_qubits()) {
    throw std::invalid_argument("graph and Hamiltonian sizes differ");
  }
  std::mt19937_64 rng(derive_seed(seed, kStreamDomains));
  DomainSet out{DomainKind::kB, {}};
  for (const HamiltonianTerm& t : term_decomposition(h)) {
    std::vector<int> d = t.qubits;
    if (t.kind == HamiltonianTerm::Kind::kPair) {
      const int i = t.qubits[0];
      const int j = t.qubits[1];
      std::vector<int> cand = g.neighbors(i);
      const std::vector<int> nj = g.neighbors(j);
      cand.insert(cand.end(), nj.begin(), nj.end());
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      std::erase_if(cand, [&](int v) { return v == i || v == j; });
      for (int draw = 0; draw < 2 && !cand.empty(); ++draw) {
        const auto pick = static_cast<std::ptrdiff_t>(uniform_below(rng, cand.size()));
        d.push_back(cand[static_cast<std::size_t>(pick)]);
        cand.erase(cand.begin() + pick);
      }
      std::sort(d.begin(), d.end());
    }
    out.per_term.push_back(std::move(d));
  }
  return out;
}

DomainSet build_domain_full(const DiagonalHamiltonian& h) {
  std::vector<int> all(static_cast<std::size_t>(h.n_qubits()));
  for (int q = 0; q < h.n_qubits(); ++q) all[static_cast<std::size_t>(q)] = q;
  DomainSet out{DomainKind::kFull, {}};
  for (std::size_t l = 0; l < term_decomposition(h).size(); ++l) out.per_term.push_back(all);
  return out;
}

DomainSet reference_domain_B_6q(const DiagonalHamiltonian& h) {
  static const std::vector<std::pair<std::pair<int, int>, std::vector<int>>> kListing = {
      {{0, 1}, {0, 1, 3, 5}}, {{0, 3}, {0, 1, 2, 3}}, {{0, 5}, {0, 1, 4, 5}},
      {{1, 2}, {1, 2, 4, 5}}, {{1, 3}, {0, 1, 3, 4}}, {{1, 4}, {1, 2, 4, 5}},
      {{1, 5}, {0, 1, 3, 5}}, {{2, 3}, {0, 2, 3, 4}}, {{2, 4}, {2, 3, 4, 5}},
      {{3, 4}, {0, 3, 4, 5}}, {{3, 5}, {1, 3, 4, 5}}, {{4, 5}, {0, 2, 4, 5}}};
  if (h.n_qubits() != 6) {
    throw std::invalid_argument("the reference 6-qubit domains need 6 qubits");
  }
  DomainSet out{DomainKind::kCustom, {}};
  for (const HamiltonianTerm& t : term_decomposition(h)) {
    if (t.kind == HamiltonianTerm::Kind::kSingle) {
      out.per_term.push_back(t.qubits);
      continue;
    }
    const auto it = std::find_if(kListing.begin(), kListing.end(), [&](const auto& e) {
      return e.first.first == t.qubits[0] && e.first.second == t.qubits[1];
    });
    if (it == kListing.end()) {
      throw std::invalid_argument("pair " + t.label() +
                                  " is not an edge of the reference graph");
    }
    out.per_term.push_back(it->second);
  }
  return out;
}

bool is_domain_B_shape(const DomainSet& domains, const DiagonalHamiltonian& h,
                       const UnitDiskGraph& g) {
  const std::vector<HamiltonianTerm> terms = term_decomposition(h);
  if (domains.per_term.size() != terms.size()) return false;
  for (std::size_t l = 0; l < terms.size(); ++l) {
    const std::vector<int>& d = domains.per_term[l];
    const HamiltonianTerm& t = terms[l];
    if (t.kind == HamiltonianTerm::Kind::kSingle) {
      if (d != t.qubits) return false;
      continue;
    }
    const int i = t.qubits[0];
    const int j = t.qubits[1];
    std::size_t candidates = 0;
    for (int v = 0; v < g.n_vertices(); ++v) {
      if (v != i && v != j && (g.has_edge(v, i) || g.has_edge(v, j))) ++candidates;
    }
    if (d.size() != 2 + std::min<std::size_t>(2, candidates)) return false;
    if (std::count(d.begin(), d.end(), i) != 1 || std::count(d.begin(), d.end(), j) != 1) {
      return false;
    }
    for (int v : d) {
      if (v != i && v != j && !g.has_edge(v, i) && !g.has_edge(v, j)) return false;
    }
  }
  return true;
}

void QiteConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  if (!(regularization_lambda >= 0.0) || !std::isfinite(regularization_lambda)) {
    throw std::invalid_argument("regularization_lambda must be finite and >= 0");
  }
  if (record_every < 1) throw std::invalid_argument("record_every must be at least 1");
  if (domain_cap < 1 || domain_cap > kMaxDomainCap) {
    throw std::invalid_argument("domain_cap must lie in [1, " +
                                std::to_string(kMaxDomainCap) + "]");
  }
}

SubstepSystem substep_linear_system(const StateVector& state,
                                    std::span<const PauliTerm> term,
                                    std::span<const int> domain) {
  const std::vector<int> d = canonical_domain(domain);
  if (d.empty()) throw std::invalid_argument("empty substep domain");
  const LocalAlgebra& alg = local_algebra(static_cast<int>(d.size()));
  const TermCodes codes = encode_term(term, d);
  const std::vector<std::complex<double>> e =
      alg.expectations(reduced_density_matrix(state, d));

  SubstepSystem out;
  out.basis = enumerate_basis(d);
  const auto n = static_cast<Eigen::Index>(out.basis.size());
  out.s.resize(n, n);
  for (std::uint32_t i = 1; i < alg.count; ++i) {
    for (std::uint32_t j = 1; j < alg.count; ++j) {
      const std::size_t idx = std::size_t{i} * alg.count + j;
      out.s(i - 1, j - 1) = i_pow(alg.product_power[idx]) * e[alg.product[idx]];
    }
  }
  std::vector<std::uint32_t> active(alg.count - 1);
  for (std::uint32_t c = 1; c < alg.count; ++c) active[c - 1] = c;
  Eigen::MatrixXd m;
  assemble(alg, e, codes, active, m, out.b);
  return out;
}

Eigen::VectorXd solve_regularized(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                                  double lambda) {
  if (m.rows() != m.cols() || m.rows() != b.size()) {
    throw std::invalid_argument("substep system shapes do not match");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and >= 0");
  }
  check_finite(m, b);
  if (m.rows() == 0) return Eigen::VectorXd();
  if (lambda > 0.0) {
    Eigen::MatrixXd reg = m;
    reg.diagonal().array() += lambda;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(reg);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      Eigen::VectorXd a = ldlt.solve(-b);
      if (a.allFinite()) return a;
    }
    return Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(reg).solve(-b);
  }
  return Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(m).solve(-b);
}

SubstepSolution solve_substep(const SubstepSystem& system, double lambda) {
  if (system.s.rows() != system.s.cols() ||
      system.s.rows() != static_cast<Eigen::Index>(system.basis.size())) {
    throw std::invalid_argument("substep system shapes do not match");
  }
  const Eigen::MatrixXd m = (system.s + system.s.transpose()).real();
  const Eigen::VectorXd a = solve_regularized(m, system.b, lambda);
  SubstepSolution out;
  out.residual = (m * a + system.b).norm();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != 0.0) out.coefficients.push_back({a(i), system.basis[static_cast<std::size_t>(i)]});
  }
  return out;
}

double substep_residual(const StateVector& before, std::span<const PauliTerm> term,
                        const SubstepSolution& solution, double tau) {
  const StateVector exact = apply_pauli_imaginary(before, term, tau);
  const StateVector approx = apply_pauli_rotation(before, solution.coefficients, tau);
  return norm_distance(exact, approx);
}

QiteResult qite_evolve(const DiagonalHamiltonian& h, const DomainSet& domains,
                       const QiteConfig& cfg) {
  cfg.validate();
  const std::vector<HamiltonianTerm> terms = term_decomposition(h);
  validate_domains(domains, terms, h.n_qubits(), cfg.domain_cap);
  std::vector<TermContext> contexts;
  contexts.reserve(terms.size());
  for (std::size_t l = 0; l < terms.size(); ++l) {
    contexts.push_back(make_context(terms[l], domains.per_term[l]));
  }

  QiteResult result{plus_state(h.n_qubits()), {}};
  StateVector& state = result.final_state;
  result.trace.snapshots.push_back({0, 0.0, state});
  result.trace.substeps.reserve(static_cast<std::size_t>(cfg.n_max) * terms.size());

  Eigen::MatrixXd m;
  Eigen::VectorXd b;
  for (int it = 1; it <= cfg.n_max; ++it) {
    const double t = cfg.tau * it;
    for (std::size_t l = 0; l < contexts.size(); ++l) {
      const TermContext& ctx = contexts[l];
      const LocalAlgebra& alg = *ctx.algebra;
      const Eigen::MatrixXcd rho = reduced_density_matrix(state, ctx.domain);
      const bool real = cfg.real_block_reduction && ctx.term.real &&
                        rho.imag().isZero(0.0);
      const std::vector<std::uint32_t>& active = real ? ctx.odd_y_codes : ctx.all_codes;
      assemble(alg, alg.expectations(rho), ctx.term, active, m, b);
      const Eigen::VectorXd a = solve_regularized(m, b, cfg.regularization_lambda);

      SubstepRecord rec;
      rec.iteration = it;
      rec.t = t;
      rec.term_index = static_cast<int>(l);
      rec.residual = (m * a + b).norm();

      std::optional<StateVector> before;
      if (cfg.track_substep_residual) before = state;
      if (!a.isZero(0.0)) {
        const Eigen::MatrixXcd gen = alg.matrix(active, {a.data(), static_cast<std::size_t>(a.size())});
        state = apply_local_operator(std::move(state), ctx.domain,
                                     unitary_exponential(gen, cfg.tau));
        rec.norm_drift = state.renormalize();
        if (rec.norm_drift > StateVector::kDriftWarning) {
          spdlog::warn("qite: norm drifted by {:.3e} at iteration {} term {}",
                       rec.norm_drift, it, l);
        }
      }
      if (before) {
        SubstepSolution sol;
        sol.term_index = static_cast<int>(l);
        for (Eigen::Index i = 0; i < a.size(); ++i) {
          if (a(i) != 0.0) {
            sol.coefficients.push_back(
                {a(i), from_local_code(active[static_cast<std::size_t>(i)], ctx.domain)});
          }
        }
        rec.substep_error = substep_residual(*before, ctx.pauli_terms, sol, cfg.tau);
      }
      result.trace.substeps.push_back(rec);
    }
    if (it % cfg.record_every == 0 || it == cfg.n_max) {
      result.trace.snapshots.push_back({it, t, state});
    }
  }
  return result;
}

void write_trace_csv(std::ostream& out, const QiteTrace& trace) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "iteration,t,term_index,residual,norm_drift\n" << std::setprecision(12);
  for (const SubstepRecord& r : trace.substeps) {
    out << r.iteration << ',' << r.t << ',' << r.term_index << ',' << r.residual << ','
        << r.norm_drift << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace qite_mis
