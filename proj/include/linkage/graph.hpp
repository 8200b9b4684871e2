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

#include <algorithm>
#include <numeric>
#include <tuple>
#include <vector>

#include "linkage/core.hpp"

namespace linkage {

struct WeightedEdge {
  Index u = 0;
  Index v = 0;
  double weight = 0.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Total order (weight, u, v) used everywhere ties must be broken
/// deterministically. Makes the minimum spanning forest unique.
inline bool edge_less(const WeightedEdge& a, const WeightedEdge& b) {
  return std::tie(a.weight, a.u, a.v) < std::tie(b.weight, b.u, b.v);
}

inline WeightedEdge make_edge(Index a, Index b, double w) {
  return a < b ? WeightedEdge{a, b, w} : WeightedEdge{b, a, w};
}

/// Undirected weighted graph over vertices 0..n_vertices-1.
/// Invariant after `normalize()`: u < v, no duplicate pairs (min weight kept).
struct WeightedEdgeList {
  std::size_t n_vertices = 0;
  std::vector<WeightedEdge> edges;

  void add(Index a, Index b, double w) {
    if (a == b) return;
    edges.push_back(make_edge(a, b, w));
  }

  void normalize() {
    for (auto& e : edges) {
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.u == e.v || e.v >= n_vertices || !(e.weight >= 0.0)) {
        throw InputError("WeightedEdgeList: invalid edge");
      }
    }
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
      return std::tie(a.u, a.v, a.weight) < std::tie(b.u, b.v, b.weight);
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const auto& a, const auto& b) { return a.u == b.u && a.v == b.v; }),
                edges.end());
  }
};

/// Spanning forest; for a connected input exactly n_vertices - 1 edges.
struct SpanningTree {
  std::size_t n_vertices = 0;
  std::vector<WeightedEdge> edges;

  double total_weight() const {
    double s = 0.0;
    for (const auto& e : edges) s += e.weight;
    return s;
  }

  std::vector<double> sorted_weights() const {
    std::vector<double> w;
    w.reserve(edges.size());
    for (const auto& e : edges) w.push_back(e.weight);
    std::sort(w.begin(), w.end());
    return w;
  }

  void sort_edges() { std::sort(edges.begin(), edges.end(), edge_less); }
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }

  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<Index> parent_;
  std::vector<Index> size_;
};

/// True iff `tree` is acyclic and has n_vertices - components edges.
inline bool is_spanning_forest(const SpanningTree& tree, std::size_t components = 1) {
  UnionFind uf(tree.n_vertices);
  for (const auto& e : tree.edges) {
    if (e.u >= tree.n_vertices || e.v >= tree.n_vertices) return false;
    if (!uf.unite(e.u, e.v)) return false;
  }
  return tree.edges.size() + components == tree.n_vertices;
}

}  // namespace linkage
