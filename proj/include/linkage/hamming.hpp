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

// Exact Hamming (l0) MST for small dimension. For every coordinate mask b the
// points are sorted by their projection onto b, and consecutive points with
// equal projections are linked by an edge of weight d - |b|. Two points at
// Hamming distance t agree on some mask of size d - t, so they are joined by
// a path of weight-<=t edges; growing a spanning forest threshold by
// threshold therefore reproduces Kruskal on the full distance graph.

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "linkage/core.hpp"
#include "linkage/graph.hpp"
#include "linkage/mpc.hpp"
#include "linkage/slc.hpp"

namespace linkage::hamming {

inline constexpr std::size_t kMaxDim = 20;

inline void check_input(const PointSet& ps) {
  if (ps.empty()) throw InputError("hamming: empty point set");
  if (ps.dim() > kMaxDim) {
    throw InputError("hamming: dimension " + std::to_string(ps.dim()) + " exceeds the 2^d cap (d <= 20)");
  }
  for (double c : ps.coords()) {
    if (c != std::floor(c)) throw InputError("hamming: coordinates must be integers");
  }
}

/// Graph whose weight-<=t components match the Hamming-distance-<=t
/// components of the input, for every t. Weight-0 edges join duplicates.
struct AuxiliaryGraph {
  WeightedEdgeList graph;
  mpc::MpcTrace trace;
};

inline AuxiliaryGraph build_auxiliary_graph(const PointSet& ps, const mpc::MpcConfig& cfg) {
  check_input(ps);
  const std::size_t n = ps.size(), d = ps.dim();
  AuxiliaryGraph aux;
  aux.graph.n_vertices = n;
  const std::uint32_t masks = 1u << d;
  for (std::uint32_t b = 0; b < masks; ++b) {
    const auto kept = static_cast<std::size_t>(std::popcount(b));
    std::vector<std::pair<std::vector<double>, Index>> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> key;
      key.reserve(kept);
      for (std::size_t j = 0; j < d; ++j) {
        if (b & (1u << j)) key.push_back(ps[i][j]);
      }
      items.emplace_back(std::move(key), static_cast<Index>(i));
    }
    // Stable sort on an index-ordered input breaks ties by point index.
    auto [sorted, trace] = mpc::distributed_sort(std::move(items), cfg, kept + 1);
    aux.trace.merge_parallel(trace);
    const double w = static_cast<double>(d - kept);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (sorted[i].first == sorted[i + 1].first) aux.graph.add(sorted[i].second, sorted[i + 1].second, w);
    }
  }
  return aux;
}

struct HammingMst {
  SpanningTree tree;
  mpc::MpcTrace trace;
  std::vector<mpc::MpcTrace> phase_traces;  // one connectivity run per threshold
};

/// Exact Hamming MST. The forest is augmented for t = 0..d with weight-t
/// edges between current components, one connectivity run per threshold.
inline HammingMst hamming_mst(const PointSet& ps, const mpc::MpcConfig& cfg) {
  auto aux = build_auxiliary_graph(ps, cfg);
  const std::size_t n = ps.size(), d = ps.dim();
  HammingMst out;
  out.tree.n_vertices = n;
  out.trace = aux.trace;

  std::vector<std::vector<WeightedEdge>> by_weight(d + 1);
  for (const auto& e : aux.graph.edges) by_weight[static_cast<std::size_t>(e.weight)].push_back(e);

  UnionFind uf(n);
  for (std::size_t t = 0; t <= d; ++t) {
    // Contract current components; the contracted edge's weight is the index
    // of the original edge so that the chosen forest maps back uniquely.
    WeightedEdgeList contracted{n, {}};
    const auto& group = by_weight[t];
    for (std::size_t i = 0; i < group.size(); ++i) {
      const Index cu = uf.find(group[i].u), cv = uf.find(group[i].v);
      if (cu != cv) contracted.add(cu, cv, static_cast<double>(i));
    }
    if (contracted.edges.empty()) continue;
    auto [forest, trace] = mpc::boruvka_mst(contracted, cfg, "connectivity");
    out.phase_traces.push_back(trace);
    out.trace.append(trace);
    for (const auto& fe : forest.edges) {
      const auto& orig = group[static_cast<std::size_t>(fe.weight)];
      if (uf.unite(orig.u, orig.v)) out.tree.edges.push_back(orig);
    }
  }
  out.tree.sort_edges();
  return out;
}

struct Hamming2d {
  double mst_weight = 0.0;
  std::size_t component_count = 0;  // components of the cost-<=1 graph
  std::size_t distinct_points = 0;
  mpc::MpcTrace trace;
};

/// d = 2 shortcut: link points sharing an x (sorted by (x, y)) and points
/// sharing a y (sorted by (y, x)); with c components of that graph over the
/// distinct points the MST weight is n_distinct + c - 2.
inline Hamming2d hamming_mst_2d(const PointSet& ps, const mpc::MpcConfig& cfg) {
  check_input(ps);
  if (ps.dim() != 2) throw InputError("hamming_mst_2d: dimension must be 2");
  const std::size_t n = ps.size();
  Hamming2d out;
  WeightedEdgeList g{n, {}};
  for (int axis = 0; axis < 2; ++axis) {
    std::vector<std::pair<std::pair<double, double>, Index>> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      items.push_back({{ps[i][axis], ps[i][1 - axis]}, static_cast<Index>(i)});
    }
    auto [sorted, trace] = mpc::distributed_sort(std::move(items), cfg, 3);
    out.trace.merge_parallel(trace);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (sorted[i].first.first == sorted[i + 1].first.first) {
        g.add(sorted[i].second, sorted[i + 1].second, 1.0);
      }
    }
    if (axis == 0) {
      for (std::size_t i = 0; i + 1 < n; ++i) {
        if (sorted[i].first != sorted[i + 1].first) ++out.distinct_points;
      }
      out.distinct_points += 1;
    }
  }
  auto [labels, trace] = mpc::connected_components(g, cfg);
  out.trace.append(trace);
  std::vector<Index> roots = labels;
  std::sort(roots.begin(), roots.end());
  out.component_count = static_cast<std::size_t>(std::unique(roots.begin(), roots.end()) - roots.begin());
  out.mst_weight = static_cast<double>(out.distinct_points + out.component_count) - 2.0;
  return out;
}

inline Clustering hamming_k_slc(const PointSet& ps, std::size_t k, const mpc::MpcConfig& cfg) {
  return k_slc_from_mst(hamming_mst(ps, cfg).tree, k);
}

}  // namespace linkage::hamming
