// Copyright 2026 The Linkage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Generators for the reductions from sparse connectivity and
// one-cycle-vs-two-cycles to 2-SLC. Each emits points whose pairwise
// distances take exactly two values depending on graph adjacency, so the
// 2-SLC objective separates connected from disconnected sources.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linkage/core.hpp"

namespace linkage::hardness {

enum class GraphKind { OneCycle, TwoCycles, Arbitrary };

struct GraphInstance {
  std::size_t n_vertices = 0;
  std::vector<std::pair<Index, Index>> edges;
  GraphKind kind = GraphKind::Arbitrary;

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> deg(n_vertices, 0);
    for (const auto& [a, b] : edges) {
      ++deg[a];
      ++deg[b];
    }
    return deg;
  }
};

/// A single cycle 0-1-...-(n-1)-0.
inline GraphInstance one_cycle(std::size_t n) {
  if (n < 3) throw InputError("one_cycle: need at least 3 vertices");
  GraphInstance g{n, {}, GraphKind::OneCycle};
  for (std::size_t i = 0; i < n; ++i) {
    g.edges.emplace_back(static_cast<Index>(i), static_cast<Index>((i + 1) % n));
  }
  return g;
}

/// Two disjoint cycles on n/2 vertices each.
inline GraphInstance two_cycles(std::size_t n) {
  if (n % 2 != 0 || n < 6) throw InputError("two_cycles: n must be even and >= 6");
  GraphInstance g{n, {}, GraphKind::TwoCycles};
  const std::size_t h = n / 2;
  for (std::size_t base : {std::size_t{0}, h}) {
    for (std::size_t i = 0; i < h; ++i) {
      g.edges.emplace_back(static_cast<Index>(base + i), static_cast<Index>(base + (i + 1) % h));
    }
  }
  return g;
}

inline GraphInstance arbitrary(std::size_t n, std::vector<std::pair<Index, Index>> edges) {
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n || a == b) throw InputError("graph: invalid edge");
  }
  return GraphInstance{n, std::move(edges), GraphKind::Arbitrary};
}

/// xi maximizing the adjacent/non-adjacent distance ratio: 1/sqrt(2) under
/// l2, 1 under l1.
inline double default_xi(Metric metric) {
  switch (metric) {
    case Metric::L2: return 1.0 / std::sqrt(2.0);
    case Metric::L1: return 1.0;
    default: break;
  }
  throw UnsupportedMetric("cycle vectors are defined for l1 and l2");
}

/// v_i = e_i + xi * sum of e_j over neighbours j. Requires a 2-regular graph;
/// the two-value distance property additionally needs every cycle to have
/// length >= 4 (a triangle's neighbours coincide).
inline std::vector<SparsePoint> gen_cycle_vectors(const GraphInstance& g, Metric metric,
                                                  std::optional<double> xi = std::nullopt) {
  const double x = xi.value_or(default_xi(metric));
  const auto deg = g.degrees();
  for (std::size_t v = 0; v < g.n_vertices; ++v) {
    if (deg[v] != 2) {
      throw InputError("gen_cycle_vectors: vertex " + std::to_string(v) + " has degree " +
                       std::to_string(deg[v]) + "; a 2-regular graph is required");
    }
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> raw(g.n_vertices);
  for (std::size_t v = 0; v < g.n_vertices; ++v) raw[v].emplace_back(v, 1.0);
  for (const auto& [a, b] : g.edges) {
    raw[a].emplace_back(b, x);
    raw[b].emplace_back(a, x);
  }
  std::vector<SparsePoint> out;
  out.reserve(g.n_vertices);
  for (auto& r : raw) out.push_back(SparsePoint::from_entries(std::move(r), g.n_vertices));
  return out;
}

/// One vector per edge with unit entries at both endpoints.
inline std::vector<SparsePoint> gen_edge_vectors(const GraphInstance& g) {
  const auto deg = g.degrees();
  for (std::size_t v = 0; v < g.n_vertices; ++v) {
    if (deg[v] == 0) throw InputError("gen_edge_vectors: vertex " + std::to_string(v) + " is isolated");
  }
  std::vector<SparsePoint> out;
  out.reserve(g.edges.size());
  for (const auto& [a, b] : g.edges) {
    out.push_back(SparsePoint::from_entries({{a, 1.0}, {b, 1.0}}, g.n_vertices));
  }
  return out;
}

/// 2-D Hamming instance: (i, i) for every vertex, then (i, j) for every
/// edge, with 1-based vertex labels.
inline PointSet gen_hamming_points(const GraphInstance& g) {
  PointSet ps(2, Metric::L0);
  for (std::size_t v = 0; v < g.n_vertices; ++v) {
    const double c = static_cast<double>(v + 1);
    ps.push_back(std::vector<double>{c, c});
  }
  for (const auto& [a, b] : g.edges) {
    ps.push_back(std::vector<double>{static_cast<double>(a + 1), static_cast<double>(b + 1)});
  }
  return ps;
}

struct JlParams {
  std::size_t target_dim = 0;
  double eps = 0.2;
  Seed seed{};
};

/// ceil(c_jl * ln(n) / eps^2).
inline std::size_t jl_target_dim(std::size_t n, double eps, double c_jl = 8.0) {
  if (!(eps > 0.0)) throw InputError("jl_target_dim: eps must be positive");
  const double ln = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  return static_cast<std::size_t>(std::ceil(c_jl * ln / (eps * eps)));
}

/// v = M v' with M i.i.d. N(0, 1/target_dim). Column j of M is drawn from its
/// own (seed, "jl-column-j") stream, so only columns touched by a nonzero are
/// ever generated.
inline PointSet jl_project(const std::vector<SparsePoint>& vs, const JlParams& p) {
  if (p.target_dim == 0) throw InputError("jl_project: target_dim must be >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.target_dim));
  PointSet out(p.target_dim, Metric::L2);
  std::vector<std::vector<double>> columns;
  std::vector<bool> have;
  std::vector<double> y(p.target_dim);
  for (const auto& v : vs) {
    if (columns.size() < v.dim) {
      columns.resize(v.dim);
      have.resize(v.dim, false);
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (const auto& [j, val] : v.entries) {
      if (!have[j]) {
        RngStream rng(p.seed, "jl-column-" + std::to_string(j));
        columns[j].resize(p.target_dim);
        for (auto& c : columns[j]) c = rng.gaussian() * scale;
        have[j] = true;
      }
      for (std::size_t r = 0; r < p.target_dim; ++r) y[r] += columns[j][r] * val;
    }
    out.push_back(y);
  }
  return out;
}

/// Densifies sparse vectors into a point set (for oracles on small n).
inline PointSet densify(const std::vector<SparsePoint>& vs, Metric metric) {
  if (vs.empty()) throw InputError("densify: no vectors");
  PointSet ps(vs.front().dim, metric);
  for (const auto& v : vs) ps.push_back(v.densify());
  return ps;
}

}  // namespace linkage::hardness
