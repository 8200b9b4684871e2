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

// One cell's unit step: merge previously computed components along
// closest cross-component pairs while the pair found is within eps * Delta_l,
// emit those pairs as tree edges, then shrink the cell to an
// eps^2 * Delta_l covering that keeps the component labels.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "linkage/core.hpp"
#include "linkage/graph.hpp"
#include "linkage/nearest.hpp"
#include "linkage/partition.hpp"

namespace linkage {

/// Surviving representatives of a cell and the component each belongs to.
/// labels[i] is the component of reps[i]; labels are point ids.
struct ComponentState {
  std::vector<Index> reps;
  std::vector<Index> labels;

  static ComponentState singletons(std::vector<Index> points) {
    ComponentState s;
    s.labels = points;
    s.reps = std::move(points);
    return s;
  }

  std::size_t num_components() const {
    std::vector<Index> l = labels;
    std::sort(l.begin(), l.end());
    return static_cast<std::size_t>(std::unique(l.begin(), l.end()) - l.begin());
  }
};

struct UnitStepOutput {
  std::vector<Index> covering;
  ComponentState induced;
  std::vector<WeightedEdge> tree_edges;  // in emission order
};

struct UnitStepOptions {
  /// Cells with at most this many representatives use brute force.
  std::size_t brute_force_limit = 256;
  /// Merge until one component remains regardless of eps * Delta_l (root cell).
  bool unbounded = false;
};

/// Grid step whose cells have metric diameter equal to `radius`.
inline double covering_grid_step(Metric metric, std::size_t dim, double radius) {
  switch (metric) {
    case Metric::L1: return radius / static_cast<double>(dim);
    case Metric::L2: return radius / std::sqrt(static_cast<double>(dim));
    case Metric::Linf: return radius;
    case Metric::L0: break;
  }
  throw UnsupportedMetric("covering grids support l1, l2 and linf only");
}

/// Subset of `pts` such that every point of `pts` lies within `radius` of a
/// chosen one. A grid anchored at the minimum corner of `pts` keeps the
/// lowest point id of each nonempty grid cell. Output is sorted by id.
inline std::vector<Index> build_covering(std::span<const Index> pts, double radius,
                                         const PointSet& ps) {
  if (pts.empty()) return {};
  const std::size_t d = ps.dim();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (Index p : pts) {
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], ps[p][k]);
      hi[k] = std::max(hi[k], ps[p][k]);
    }
  }
  const Index lowest = *std::min_element(pts.begin(), pts.end());
  if (distance(lo, hi, ps.metric()) <= radius) return {lowest};

  std::map<std::vector<std::int64_t>, Index> keep;
  if (radius <= 0.0) {
    // Only exact duplicates can share a representative.
    std::map<std::vector<double>, Index> dup;
    for (Index p : pts) {
      std::vector<double> key(ps[p].begin(), ps[p].end());
      auto [it, fresh] = dup.emplace(std::move(key), p);
      if (!fresh) it->second = std::min(it->second, p);
    }
    std::vector<Index> out;
    for (const auto& [k, p] : dup) out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
  }
  const double step = covering_grid_step(ps.metric(), d, radius);
  std::vector<std::int64_t> key(d);
  for (Index p : pts) {
    for (std::size_t k = 0; k < d; ++k) {
      key[k] = static_cast<std::int64_t>(std::floor((ps[p][k] - lo[k]) / step));
    }
    auto [it, fresh] = keep.emplace(key, p);
    if (!fresh) it->second = std::min(it->second, p);
  }
  std::vector<Index> out;
  out.reserve(keep.size());
  for (const auto& [k, p] : keep) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

/// Closest cross-component pair for every component, within `radius`.
/// Result is indexed by position of the component's canonical member.
inline std::vector<Candidate> best_outgoing(const ComponentState& st, const PointSet& ps,
                                            const std::vector<Index>& comp, double radius,
                                            ForeignNeighborIndex* index) {
  const std::size_t m = st.reps.size();
  std::vector<Candidate> best(m);
  if (index != nullptr) {
    for (std::size_t i = 0; i < m; ++i) {
      auto& b = best[comp[i]];
      b = index->query(i, radius, b);
    }
    return best;
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (comp[i] == comp[j]) continue;
      const double d = ps.dist(st.reps[i], st.reps[j]);
      if (d > radius) continue;
      const Index a = std::min(st.reps[i], st.reps[j]), b = std::max(st.reps[i], st.reps[j]);
      const Candidate c{d, a, b, true};
      if (c.better_than(best[comp[i]])) best[comp[i]] = c;
      if (c.better_than(best[comp[j]])) best[comp[j]] = c;
    }
  }
  return best;
}

/// Minimum spanning forest of the cross-component graph restricted to pairs
/// of weight <= threshold, under the (weight, min id, max id) order. Equals
/// the edges the greedy closest-pair loop emits with exact pair search.
inline std::vector<WeightedEdge> cross_component_forest(const ComponentState& st,
                                                        const PointSet& ps, double threshold,
                                                        std::size_t brute_force_limit,
                                                        std::vector<Index>& comp_out) {
  const std::size_t m = st.reps.size();
  // Positions keyed by label; comp[i] = position of the first rep with that label.
  std::unordered_map<Index, Index> first;
  std::vector<Index> comp(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto [it, fresh] = first.emplace(st.labels[i], static_cast<Index>(i));
    comp[i] = it->second;
  }
  std::unordered_map<Index, Index> pos_of;
  for (std::size_t i = 0; i < m; ++i) pos_of.emplace(st.reps[i], static_cast<Index>(i));

  UnionFind uf(m);
  for (std::size_t i = 0; i < m; ++i) uf.unite(static_cast<Index>(i), comp[i]);
  auto relabel = [&] {
    for (std::size_t i = 0; i < m; ++i) comp[i] = uf.find(static_cast<Index>(i));
  };
  relabel();

  std::optional<ForeignNeighborIndex> index;
  if (m > brute_force_limit) index.emplace(ps, st.reps);

  std::vector<WeightedEdge> edges;
  while (true) {
    if (index) index->set_labels(comp);
    const auto best = best_outgoing(st, ps, comp, threshold, index ? &*index : nullptr);
    std::vector<WeightedEdge> chosen;
    for (std::size_t c = 0; c < m; ++c) {
      if (comp[c] == c && best[c].found) chosen.push_back(best[c].edge());
    }
    if (chosen.empty()) break;
    std::sort(chosen.begin(), chosen.end(), edge_less);
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    for (const auto& e : chosen) {
      if (uf.unite(pos_of.at(e.u), pos_of.at(e.v))) edges.push_back(e);
    }
    relabel();
  }
  std::sort(edges.begin(), edges.end(), edge_less);
  comp_out = std::move(comp);
  return edges;
}

}  // namespace detail

/// A cross-component pair within (1 + eps) of the closest one, or nothing
/// when fewer than two components exist. The search is exact, so the pair
/// returned is the closest under (distance, min id, max id).
inline std::optional<WeightedEdge> approx_closest_cross_pair(const ComponentState& state,
                                                             double eps, const PointSet& ps,
                                                             std::size_t brute_force_limit = 256) {
  if (eps < 0.0) throw InputError("approx_closest_cross_pair: eps must be >= 0");
  const std::size_t m = state.reps.size();
  if (state.num_components() < 2) return std::nullopt;
  std::unordered_map<Index, Index> first;
  std::vector<Index> comp(m);
  for (std::size_t i = 0; i < m; ++i) {
    comp[i] = first.emplace(state.labels[i], static_cast<Index>(i)).first->second;
  }
  std::optional<detail::ForeignNeighborIndex> index;
  if (m > brute_force_limit) {
    index.emplace(ps, state.reps);
    index->set_labels(comp);
  }
  const auto best = detail::best_outgoing(state, ps, comp, std::numeric_limits<double>::infinity(),
                                          index ? &*index : nullptr);
  detail::Candidate overall;
  for (const auto& c : best) {
    if (c.better_than(overall)) overall = c;
  }
  return overall.edge();
}

/// Runs the unit step for one cell at a level with diameter bound
/// `level_diam` (Delta_l).
inline UnitStepOutput unit_step(const ComponentState& state, double level_diam, double eps,
                                const PointSet& ps, UnitStepOptions opts = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("unit_step: eps must lie in (0, 1)");
  if (state.reps.size() != state.labels.size()) throw InputError("unit_step: reps/labels size mismatch");
  if (level_diam < 0.0) throw InputError("unit_step: negative level diameter");

  const double threshold = opts.unbounded ? std::numeric_limits<double>::infinity() : eps * level_diam;
  UnitStepOutput out;
  std::vector<Index> comp;
  out.tree_edges = detail::cross_component_forest(state, ps, threshold, opts.brute_force_limit, comp);

  // Canonical label = smallest point id of the merged component.
  const std::size_t m = state.reps.size();
  std::vector<Index> canon(m, std::numeric_limits<Index>::max());
  for (std::size_t i = 0; i < m; ++i) canon[comp[i]] = std::min(canon[comp[i]], state.labels[i]);

  out.covering = build_covering(state.reps, eps * eps * level_diam, ps);
  std::unordered_map<Index, Index> pos_of;
  for (std::size_t i = 0; i < m; ++i) pos_of.emplace(state.reps[i], static_cast<Index>(i));
  out.induced.reps = out.covering;
  out.induced.labels.reserve(out.covering.size());
  for (Index p : out.covering) out.induced.labels.push_back(canon[comp[pos_of.at(p)]]);
  return out;
}

}  // namespace linkage
