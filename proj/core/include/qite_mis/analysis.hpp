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
#include <iosfwd>
#include <span>
#include <vector>

#include "qite_mis/hamiltonian.hpp"
#include "qite_mis/qite.hpp"
#include "qite_mis/state.hpp"

namespace qite_mis {

/// Acceptance tolerance and number of shots for one solve.
struct FailureSpec {
  double delta_e = 0.0;
  int shots = 1;

  void validate() const;
};

struct TrajectoryRecord {
  double t = 0.0;
  double epsilon = 0.0;
  double epsilon_bar = 0.0;
  double fidelity_ite = 0.0;
  double fidelity_final = 0.0;
  double pf_ite = 0.0;
  double pf_qite = 0.0;
  double ite_bound = 0.0;
  /// NaN when epsilon > sqrt(2).
  double qite_bound_rhs = 0.0;
  /// Distance after removing the global phase: sqrt(2 - 2 |<x|y>|).
  double epsilon_aligned = 0.0;
};

/// Probability mass on basis states with energy strictly above
/// E0 + delta_e (1e-9 slack).
double failure_prob(const StateVector& state, const Spectrum& spectrum, double delta_e);

/// Failure probability of the exact imaginary-time state at time t,
/// evaluated from the spectrum alone.
double failure_prob_ite_closed(const Spectrum& spectrum, double t, double delta_e);

/// 1 / (1 + g/(d-g) e^{2 t delta_e}) with g the ground degeneracy and d the
/// Hilbert space dimension. Needs 1 <= g < d.
double ite_bound(double t, double delta_e, std::uint64_t g, std::uint64_t d);

struct QiteBoundCheck {
  bool holds = true;
  /// False when eps > sqrt(2); the inequality then says nothing.
  bool applicable = true;
  double rhs = 0.0;
};

/// |pf_qite - pf_ite| <= eps sqrt(1 - eps^2 / 4) (1e-12 slack).
QiteBoundCheck qite_bound_check(double eps, double pf_qite, double pf_ite);

/// Largest angle between two unit vectors at distance eps: 2 asin(eps/2).
/// Needs 0 <= eps <= sqrt(2).
double max_angle_for_distance(double eps);

/// One record per trace snapshot. The final-time reference is the exact
/// state at cfg.t_max().
std::vector<TrajectoryRecord> trajectory_metrics(const QiteTrace& trace,
                                                 const DiagonalHamiltonian& h,
                                                 const QiteConfig& cfg,
                                                 const FailureSpec& spec);

/// 100 |E0 - Ei| / |E0|. Throws for E0 = 0.
double relative_error(double e0, double ei);

/// Header t,epsilon,epsilon_bar,fidelity_ite,fidelity_final,pf_ite,pf_qite,
/// ite_bound,qite_bound_rhs; 12 significant digits.
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRecord> records);

/// Fixed-width histogram. Bin i covers [origin + i w, origin + (i+1) w).
struct Histogram {
  double origin = 0.0;
  double bin_width = 1.0;
  std::vector<std::uint64_t> counts;

  double bin_low(std::size_t i) const { return origin + bin_width * static_cast<double>(i); }
  std::uint64_t total() const;
};

/// Bins start at floor(min/w) w. Values within 1e-9 bin widths below an edge
/// are assigned to the bin above it.
Histogram make_histogram(std::span<const double> values, double bin_width);

/// Columns: bin_low,bin_high,count.
void write_histogram_csv(std::ostream& out, const Histogram& hist);

}  // namespace qite_mis
