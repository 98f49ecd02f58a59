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

#include "qite_mis/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "qite_mis/errors.hpp"
#include "qite_mis/seeding.hpp"

namespace qite_mis {

Bitstring::Bitstring(int n_bits, std::uint64_t index) : n_(n_bits), index_(index) {
  if (n_bits < 0 || n_bits > kMaxBits) {
    throw std::invalid_argument("bitstring length out of range");
  }
  if (n_bits < 64 && (index >> n_bits) != 0) {
    throw std::invalid_argument("bitstring index has bits beyond its length");
  }
}

Bitstring Bitstring::parse(std::string_view bits) {
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bitstring must contain only 0 and 1");
    }
    index = (index << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return Bitstring(static_cast<int>(bits.size()), index);
}

int Bitstring::weight() const { return std::popcount(index_); }

std::string Bitstring::to_string() const {
  std::string out(static_cast<std::size_t>(n_), '0');
  for (int q = 0; q < n_; ++q) {
    if ((*this)[q]) out[q] = '1';
  }
  return out;
}

namespace {

void check_vertex_count(int n) {
  if (n < 1) throw std::invalid_argument("a graph needs at least one vertex");
  if (n > Bitstring::kMaxBits) {
    throw ResourceError("graphs are limited to 63 vertices");
  }
}

std::vector<Edge> normalize_edges(int n, std::vector<Edge> edges) {
  for (Edge& e : edges) {
    if (e.first == e.second) throw std::invalid_argument("self-loop in edge list");
    if (e.first < 0 || e.second < 0 || e.first >= n || e.second >= n) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::vector<Edge> unit_disk_edges(const std::vector<Point>& points) {
  std::vector<Edge> edges;
  const int n = static_cast<int>(points.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = std::hypot(points[i].x - points[j].x,
                                  points[i].y - points[j].y);
      if (std::abs(d - 1.0) <= kUnitDiskSlack) {
        throw IllConditionedGraph("vertices " + std::to_string(i) + " and " +
                                  std::to_string(j) +
                                  " sit at unit distance within tolerance");
      }
      if (d < 1.0) edges.emplace_back(i, j);
    }
  }
  return edges;
}

void check_points(const std::vector<Point>& points) {
  check_vertex_count(static_cast<int>(points.size()));
  for (const Point& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("vertex coordinates must be finite");
    }
  }
}

}  // namespace

UnitDiskGraph UnitDiskGraph::from_points(std::vector<Point> points) {
  check_points(points);
  UnitDiskGraph g;
  g.n_ = static_cast<int>(points.size());
  g.edges_ = unit_disk_edges(points);
  g.coords_ = std::move(points);
  return g;
}

UnitDiskGraph UnitDiskGraph::from_edges(int n_vertices, std::vector<Edge> edges) {
  check_vertex_count(n_vertices);
  UnitDiskGraph g;
  g.n_ = n_vertices;
  g.edges_ = normalize_edges(n_vertices, std::move(edges));
  return g;
}

UnitDiskGraph UnitDiskGraph::from_points_and_edges(std::vector<Point> points,
                                                   std::vector<Edge> edges) {
  UnitDiskGraph g = from_points(std::move(points));
  if (normalize_edges(g.n_, std::move(edges)) != g.edges_) {
    throw std::invalid_argument(
        "edge list disagrees with the unit-disk rule on the coordinates");
  }
  return g;
}

bool UnitDiskGraph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

int UnitDiskGraph::degree(int v) const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [v](const Edge& e) {
    return e.first == v || e.second == v;
  }));
}

std::vector<int> UnitDiskGraph::neighbors(int v) const {
  std::vector<int> out;
  for (const auto& [i, j] : edges_) {
    if (i == v) out.push_back(j);
    if (j == v) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

UnitDiskGraph UnitDiskGraph::without_vertex(int v) const {
  if (v < 0 || v >= n_) throw std::out_of_range("vertex out of range");
  if (n_ == 1) throw std::invalid_argument("cannot remove the only vertex");
  const auto shift = [v](int u) { return u > v ? u - 1 : u; };
  std::vector<Edge> edges;
  for (const auto& [i, j] : edges_) {
    if (i != v && j != v) edges.emplace_back(shift(i), shift(j));
  }
  if (coords_) {
    std::vector<Point> points = *coords_;
    points.erase(points.begin() + v);
    return from_points_and_edges(std::move(points), std::move(edges));
  }
  return from_edges(n_ - 1, std::move(edges));
}

double default_box_side(int n) { return 0.6 * std::sqrt(static_cast<double>(n)); }

UnitDiskGraph random_unit_disk(int n, double box_side, std::uint64_t seed) {
  check_vertex_count(n);
  if (!(box_side > 0.0) || !std::isfinite(box_side)) {
    throw std::invalid_argument("box side must be positive");
  }
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::mt19937_64 rng(attempt == 0 ? seed : derive_seed(seed, attempt));
    std::vector<Point> points(static_cast<std::size_t>(n));
    for (Point& p : points) {
      p.x = box_side * uniform01(rng);
      p.y = box_side * uniform01(rng);
    }
    try {
      return UnitDiskGraph::from_points(std::move(points));
    } catch (const IllConditionedGraph&) {
      // Redraw from the next derived seed.
    }
  }
}

UnitDiskGraph reference_graph_6q() {
  return UnitDiskGraph::from_edges(
      6, {{0, 1}, {0, 3}, {0, 5}, {1, 2}, {1, 3}, {1, 4},
          {1, 5}, {2, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 5}});
}

bool is_independent(const UnitDiskGraph& g, const Bitstring& s) {
  if (s.size() != g.n_vertices()) {
    throw std::invalid_argument("bitstring length does not match the graph");
  }
  return std::none_of(g.edges().begin(), g.edges().end(),
                      [&](const Edge& e) { return s[e.first] && s[e.second]; });
}

MisResult brute_force_mis(const UnitDiskGraph& g) {
  const int n = g.n_vertices();
  if (n > kMaxBruteForceVertices) {
    throw ResourceError("brute-force MIS is limited to " +
                        std::to_string(kMaxBruteForceVertices) + " vertices");
  }
  // Edge masks in basis-index bit positions (vertex v -> bit n-1-v).
  std::vector<std::uint64_t> edge_masks;
  for (const auto& [i, j] : g.edges()) {
    edge_masks.push_back((std::uint64_t{1} << (n - 1 - i)) |
                         (std::uint64_t{1} << (n - 1 - j)));
  }
  MisResult result;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < count; ++s) {
    const int w = std::popcount(s);
    if (w < result.size) continue;
    const bool independent =
        std::none_of(edge_masks.begin(), edge_masks.end(),
                     [s](std::uint64_t m) { return (s & m) == m; });
    if (!independent) continue;
    if (w > result.size) {
      result.size = w;
      result.witnesses.clear();
    }
    result.witnesses.emplace_back(n, s);
  }
  return result;
}

void write_graph(std::ostream& out, const UnitDiskGraph& g) {
  out << "n=" << g.n_vertices() << '\n';
  if (g.coords()) {
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < g.coords()->size(); ++i) {
      const Point& p = (*g.coords())[i];
      out << "v " << i << ' ' << p.x << ' ' << p.y << '\n';
    }
    out.precision(old_precision);
  }
  for (const auto& [i, j] : g.edges()) out << "e " << i << ' ' << j << '\n';
}

UnitDiskGraph read_graph(std::istream& in) {
  std::string line;
  int n = -1;
  std::vector<std::optional<Point>> points;
  std::vector<Edge> edges;
  int line_no = 0;
  const auto fail = [&](const std::string& what) {
    throw std::invalid_argument("graph line " + std::to_string(line_no) + ": " +
                                what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line.substr(first));
    if (n < 0) {
      if (line.compare(first, 2, "n=") != 0) fail("expected 'n=<N>' header");
      fields.ignore(2);
      if (!(fields >> n) || n < 1) fail("bad vertex count");
      check_vertex_count(n);
      points.assign(static_cast<std::size_t>(n), std::nullopt);
      continue;
    }
    std::string tag;
    fields >> tag;
    if (tag == "v") {
      int i;
      Point p;
      if (!(fields >> i >> p.x >> p.y)) fail("malformed vertex line");
      if (i < 0 || i >= n) fail("vertex index out of range");
      if (points[i]) fail("duplicate vertex line");
      points[i] = p;
    } else if (tag == "e") {
      int i;
      int j;
      if (!(fields >> i >> j)) fail("malformed edge line");
      edges.emplace_back(i, j);
    } else {
      fail("unknown record '" + tag + "'");
    }
    std::string extra;
    if (fields >> extra) fail("trailing content");
  }
  if (n < 0) throw std::invalid_argument("graph file has no 'n=' header");
  const auto present = std::count_if(points.begin(), points.end(),
                                     [](const auto& p) { return p.has_value(); });
  if (present == 0) return UnitDiskGraph::from_edges(n, std::move(edges));
  if (present != n) {
    throw std::invalid_argument("graph file gives coordinates for only some vertices");
  }
  std::vector<Point> coords;
  for (const auto& p : points) coords.push_back(*p);
  return UnitDiskGraph::from_points_and_edges(std::move(coords), std::move(edges));
}

void save_graph(const std::filesystem::path& path, const UnitDiskGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_graph(out, g);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

UnitDiskGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  return read_graph(in);
}

}  // namespace qite_mis
