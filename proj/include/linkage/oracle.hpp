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

// Ground truth for tests and reports. Deliberately naive and self-contained:
// nothing here calls into the production pipeline, unit step or MPC code.
// Only the plain data types (PointSet, SpanningTree) are shared.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

#include "linkage/core.hpp"
#include "linkage/errors.hpp"
#include "linkage/graph.hpp"

namespace linkage::oracle {

inline constexpr std::size_t kDenseCap = 20000;

/// Same arithmetic (and evaluation order) as the production distance, so
/// both sides agree bit for bit on every pair.
inline double pair_distance(const PointSet& ps, std::size_t i, std::size_t j) {
  const auto a = ps[i], b = ps[j];
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    switch (ps.metric()) {
      case Metric::L0: acc += (a[k] != b[k]) ? 1.0 : 0.0; break;
      case Metric::L1: acc += std::abs(t); break;
      case Metric::L2: acc += t * t; break;
      case Metric::Linf: acc = std::max(acc, std::abs(t)); break;
    }
  }
  return ps.metric() == Metric::L2 ? std::sqrt(acc) : acc;
}

namespace detail {

struct Key {
  double w = std::numeric_limits<double>::infinity();
  Index a = std::numeric_limits<Index>::max();
  Index b = std::numeric_limits<Index>::max();
  bool operator<(const Key& o) const { return std::tie(w, a, b) < std::tie(o.w, o.a, o.b); }
};

class Dsu {
 public:
  explicit Dsu(std::size_t n) : p_(n) { std::iota(p_.begin(), p_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) { return p_[x] == x ? x : p_[x] = find(p_[x]); }
  bool join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> p_;
};

}  // namespace detail

/// Dense Prim, O(n^2), ties broken by (weight, min id, max id).
inline SpanningTree exact_mst(const PointSet& ps, std::size_t dense_cap = kDenseCap) {
  const std::size_t n = ps.size();
  if (n == 0) throw InputError("exact_mst: empty point set");
  if (n > dense_cap) {
    throw CapacityError("exact_mst: n = " + std::to_string(n) + " exceeds the dense cap of " +
                        std::to_string(dense_cap));
  }
  SpanningTree t{n, {}};
  std::vector<detail::Key> key(n);
  std::vector<bool> in(n, false);
  in[0] = true;
  for (std::size_t v = 1; v < n; ++v) {
    key[v] = {pair_distance(ps, 0, v), 0, static_cast<Index>(v)};
  }
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in[v] && (pick == n || key[v] < key[pick])) pick = v;
    }
    in[pick] = true;
    t.edges.push_back({key[pick].a, key[pick].b, key[pick].w});
    for (std::size_t v = 0; v < n; ++v) {
      if (in[v]) continue;
      const detail::Key cand{pair_distance(ps, pick, v), static_cast<Index>(std::min(pick, v)),
                             static_cast<Index>(std::max(pick, v))};
      if (cand < key[v]) key[v] = cand;
    }
  }
  std::sort(t.edges.begin(), t.edges.end(), [](const auto& x, const auto& y) {
    return std::tie(x.weight, x.u, x.v) < std::tie(y.weight, y.u, y.v);
  });
  return t;
}

/// Kruskal over all n(n-1)/2 pairs.
inline SpanningTree kruskal_mst(const PointSet& ps) {
  const std::size_t n = ps.size();
  if (n == 0) throw InputError("kruskal_mst: empty point set");
  std::vector<detail::Key> all;
  all.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      all.push_back({pair_distance(ps, i, j), static_cast<Index>(i), static_cast<Index>(j)});
    }
  }
  std::sort(all.begin(), all.end());
  detail::Dsu dsu(n);
  SpanningTree t{n, {}};
  for (const auto& k : all) {
    if (dsu.join(k.a, k.b)) t.edges.push_back({k.a, k.b, k.w});
    if (t.edges.size() + 1 == n) break;
  }
  return t;
}

/// max over all partitions into exactly k nonempty clusters of the minimum
/// cross-cluster distance, by restricted-growth-string enumeration.
inline double exhaustive_slc(const PointSet& ps, std::size_t k) {
  const std::size_t n = ps.size();
  if (n > 10 || k > 4) throw CapacityError("exhaustive_slc: limited to n <= 10 and k <= 4");
  if (k < 2 || k > n) throw InputError("exhaustive_slc: need 2 <= k <= n");
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i][j] = pair_distance(ps, i, j);
  }
  std::vector<std::size_t> block(n, 0);
  double best = -1.0;
  // Recursive enumeration of restricted growth strings with max block < k.
  auto recurse = [&](auto&& self, std::size_t i, std::size_t used) -> void {
    if (n - i < k - used) return;  // cannot fill the remaining blocks
    if (i == n) {
      if (used != k) return;
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          if (block[a] != block[b]) worst = std::min(worst, dist[a][b]);
        }
      }
      best = std::max(best, worst);
      return;
    }
    for (std::size_t c = 0; c <= used && c < k; ++c) {
      block[i] = c;
      self(self, i + 1, std::max(used, c + 1));
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

/// Exact closest pair (u < v) between different labels; ties on
/// (distance, u, v). Empty when fewer than two labels are present.
inline std::optional<WeightedEdge> brute_closest_cross_pair(const std::vector<Index>& reps,
                                                            const std::vector<Index>& labels,
                                                            const PointSet& ps) {
  std::optional<detail::Key> best;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      if (labels[i] == labels[j]) continue;
      const detail::Key k{pair_distance(ps, reps[i], reps[j]), std::min(reps[i], reps[j]),
                          std::max(reps[i], reps[j])};
      if (!best || k < *best) best = k;
    }
  }
  if (!best) return std::nullopt;
  return WeightedEdge{best->a, best->b, best->w};
}

/// Every point of `pts` within `radius` of some member of `cover`.
inline bool is_covering(const std::vector<Index>& pts, const std::vector<Index>& cover,
                        double radius, const PointSet& ps) {
  for (Index p : pts) {
    bool hit = false;
    for (Index c : cover) {
      if (pair_distance(ps, p, c) <= radius) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

/// Exact max cell diameter by brute force.
inline double brute_diameter(const std::vector<Index>& pts, const PointSet& ps) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, pair_distance(ps, pts[i], pts[j]));
  }
  return d;
}

struct OracleReport {
  SpanningTree exact_tree;
  std::vector<double> sorted_weights;
  std::vector<double> per_index_ratios;  // approx_i / exact_i
};

inline OracleReport oracle_report(const PointSet& ps, const SpanningTree& approx) {
  OracleReport r;
  r.exact_tree = exact_mst(ps);
  for (const auto& e : r.exact_tree.edges) r.sorted_weights.push_back(e.weight);
  std::sort(r.sorted_weights.begin(), r.sorted_weights.end());
  std::vector<double> aw;
  for (const auto& e : approx.edges) aw.push_back(e.weight);
  std::sort(aw.begin(), aw.end());
  if (aw.size() != r.sorted_weights.size()) throw InputError("oracle_report: tree sizes differ");
  for (std::size_t i = 0; i < aw.size(); ++i) {
    const double e = r.sorted_weights[i];
    r.per_index_ratios.push_back(e > 0.0 ? aw[i] / e : (aw[i] > 0.0 ? std::numeric_limits<double>::infinity() : 1.0));
  }
  return r;
}

}  // namespace linkage::oracle
