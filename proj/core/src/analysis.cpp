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


#include "qite_mis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "qite_mis/ite.hpp"

namespace qite_mis {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBinEdgeSlack = 1e-9;

}  // namespace

void FailureSpec::validate() const {
  if (!(delta_e >= 0.0) || !std::isfinite(delta_e)) {
    throw std::invalid_argument("delta_E must be finite and >= 0");
  }
  if (shots < 1) throw std::invalid_argument("the number of shots must be at least 1");
}

double failure_prob(const StateVector& state, const Spectrum& spectrum, double delta_e) {
  if (state.n_qubits() != spectrum.n_qubits()) {
    throw std::invalid_argument("state and spectrum sizes differ");
  }
  double p = 0.0;
  for (const SpectrumLevel& level : spectrum.levels()) {
    if (!spectrum.is_failing(level.energy, delta_e)) continue;
    for (std::uint64_t i : level.members) p += std::norm(state[i]);
  }
  return p;
}

double failure_prob_ite_closed(const Spectrum& spectrum, double t, double delta_e) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
  const double e0 = spectrum.ground_energy();
  double fail = 0.0;
  double total = 0.0;
  for (const SpectrumLevel& level : spectrum.levels()) {
    const double w =
        static_cast<double>(level.degeneracy) * std::exp(-2.0 * t * (level.energy - e0));
    total += w;
    if (spectrum.is_failing(level.energy, delta_e)) fail += w;
  }
  return fail / total;
}

double ite_bound(double t, double delta_e, std::uint64_t g, std::uint64_t d) {
  if (g < 1 || g >= d) throw std::invalid_argument("need 1 <= g < d");
  if (!(t >= 0.0) || !(delta_e >= 0.0)) {
    throw std::invalid_argument("t and delta_E must be >= 0");
  }
  const double ratio = static_cast<double>(g) / static_cast<double>(d - g);
  return 1.0 / (1.0 + ratio * std::exp(2.0 * t * delta_e));
}

QiteBoundCheck qite_bound_check(double eps, double pf_qite, double pf_ite) {
  QiteBoundCheck out;
  if (eps > std::sqrt(2.0)) {
    out.applicable = false;
    out.rhs = kNaN;
    return out;
  }
  out.rhs = eps * std::sqrt(std::max(0.0, 1.0 - eps * eps / 4.0));
  out.holds = std::abs(pf_qite - pf_ite) <= out.rhs + 1e-12;
  return out;
}

double max_angle_for_distance(double eps) {
  if (!(eps >= 0.0) || eps > std::sqrt(2.0)) {
    throw std::invalid_argument("eps must lie in [0, sqrt(2)]");
  }
  return 2.0 * std::asin(eps / 2.0);
}

std::vector<TrajectoryRecord> trajectory_metrics(const QiteTrace& trace,
                                                 const DiagonalHamiltonian& h,
                                                 const QiteConfig& cfg,
                                                 const FailureSpec& spec) {
  spec.validate();
  const std::vector<double> energies = h.energies();
  const Spectrum spec_h = spectrum(h);
  const StateVector plus = plus_state(h.n_qubits());
  const StateVector final_ite = apply_diagonal_imaginary(plus, energies, cfg.t_max());
  const std::uint64_t g = spec_h.ground_degeneracy();
  const std::uint64_t d = spec_h.dimension();

  std::vector<TrajectoryRecord> out;
  out.reserve(trace.snapshots.size());
  for (const Snapshot& snap : trace.snapshots) {
    const StateVector ite = apply_diagonal_imaginary(plus, energies, snap.t);
    TrajectoryRecord r;
    r.t = snap.t;
    r.epsilon = norm_distance(ite, snap.state);
    r.epsilon_bar = norm_distance(final_ite, snap.state);
    r.fidelity_ite = fidelity(ite, snap.state);
    r.fidelity_final = fidelity(final_ite, snap.state);
    r.pf_ite = failure_prob_ite_closed(spec_h, snap.t, spec.delta_e);
    r.pf_qite = failure_prob(snap.state, spec_h, spec.delta_e);
    r.ite_bound = g < d ? ite_bound(snap.t, spec.delta_e, g, d) : kNaN;
    r.qite_bound_rhs = qite_bound_check(r.epsilon, r.pf_qite, r.pf_ite).rhs;
    r.epsilon_aligned =
        std::sqrt(std::max(0.0, 2.0 - 2.0 * std::abs(inner_product(ite, snap.state))));
    out.push_back(r);
  }
  return out;
}

double relative_error(double e0, double ei) {
  if (e0 == 0.0) throw std::invalid_argument("relative error needs E0 != 0");
  return 100.0 * std::abs(e0 - ei) / std::abs(e0);
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRecord> records) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "t,epsilon,epsilon_bar,fidelity_ite,fidelity_final,pf_ite,pf_qite,"
         "ite_bound,qite_bound_rhs\n"
      << std::setprecision(12);
  for (const TrajectoryRecord& r : records) {
    out << r.t << ',' << r.epsilon << ',' << r.epsilon_bar << ',' << r.fidelity_ite << ','
        << r.fidelity_final << ',' << r.pf_ite << ',' << r.pf_qite << ',' << r.ite_bound
        << ',' << r.qite_bound_rhs << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

std::uint64_t Histogram::total() const {
  std::uint64_t s = 0;
  for (std::uint64_t c : counts) s += c;
  return s;
}

Histogram make_histogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
  Histogram h;
  h.bin_width = bin_width;
  if (values.empty()) return h;
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("histogram of non-finite value");
  }
  const auto bin_of = [&](double v) {
    return std::floor(v / bin_width + kBinEdgeSlack);
  };
  const double lo = bin_of(*std::min_element(values.begin(), values.end()));
  const double hi = bin_of(*std::max_element(values.begin(), values.end()));
  h.origin = lo * bin_width;
  h.counts.assign(static_cast<std::size_t>(hi - lo) + 1, 0);
  for (double v : values) ++h.counts[static_cast<std::size_t>(bin_of(v) - lo)];
  return h;
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "bin_low,bin_high,count\n" << std::setprecision(12);
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    out << hist.bin_low(i) << ',' << hist.bin_low(i + 1) << ',' << hist.counts[i] << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace qite_mis
