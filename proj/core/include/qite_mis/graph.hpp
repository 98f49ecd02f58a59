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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qite_mis/bitstring.hpp"

namespace qite_mis {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Unordered vertex pair, always stored with first < second.
using Edge = std::pair<int, int>;

/// Pairs closer than this to unit distance are rejected: their edge status
/// is not numerically meaningful.
inline constexpr double kUnitDiskSlack = 1e-12;

/// Raised by from_points when two points sit within kUnitDiskSlack of unit
/// distance.
class IllConditionedGraph : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Graph whose edges are given either explicitly or by the unit-disk rule
/// (edge iff Euclidean distance < 1) over planar coordinates.
class UnitDiskGraph {
 public:
  /// Edges by the unit-disk rule.
  static UnitDiskGraph from_points(std::vector<Point> points);
  /// Explicit adjacency without coordinates.
  static UnitDiskGraph from_edges(int n_vertices, std::vector<Edge> edges);
  /// Coordinates plus an edge list that must agree with the unit-disk rule.
  static UnitDiskGraph from_points_and_edges(std::vector<Point> points,
                                             std::vector<Edge> edges);

  int n_vertices() const { return n_; }
  const std::optional<std::vector<Point>>& coords() const { return coords_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t n_edges() const { return edges_.size(); }
  bool has_edge(int i, int j) const;
  int degree(int v) const;
  /// Sorted neighbor list of v.
  std::vector<int> neighbors(int v) const;

  /// Induced subgraph on every vertex but v; later vertices shift down by one.
  UnitDiskGraph without_vertex(int v) const;

  friend bool operator==(const UnitDiskGraph&, const UnitDiskGraph&) = default;

 private:
  UnitDiskGraph() = default;

  int n_ = 0;
  std::optional<std::vector<Point>> coords_;
  std::vector<Edge> edges_;
};

/// Default side of the sampling box for N vertices.
double default_box_side(int n);

/// n points i.i.d. uniform in [0, box_side]^2, connected by the unit-disk
/// rule. Samples that come out ill-conditioned are redrawn from
/// derive_seed(seed, attempt); the result is a pure function of the inputs.
UnitDiskGraph random_unit_disk(int n, double box_side, std::uint64_t seed);

/// Six-vertex, twelve-edge benchmark instance (no coordinates) whose
/// maximum independent sets are {0,2}, {0,4} and {2,5}.
UnitDiskGraph reference_graph_6q();

bool is_independent(const UnitDiskGraph& g, const Bitstring& s);

struct MisResult {
  int size = 0;
  /// Every maximum independent set, ascending by basis index.
  std::vector<Bitstring> witnesses;
};

inline constexpr int kMaxBruteForceVertices = 24;

MisResult brute_force_mis(const UnitDiskGraph& g);

// Text format:
//   n=<N>
//   v <i> <x> <y>     (optional, one per vertex)
//   e <i> <j>         (one per edge)
// Blank lines and lines starting with '#' are ignored.
void write_graph(std::ostream& out, const UnitDiskGraph& g);
UnitDiskGraph read_graph(std::istream& in);
void save_graph(const std::filesystem::path& path, const UnitDiskGraph& g);
UnitDiskGraph load_graph(const std::filesystem::path& path);

}  // namespace qite_mis
