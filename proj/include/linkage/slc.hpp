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

// Partition-based approximate MST and k-single-linkage extraction.
//
// Each repetition samples a shifted grid hierarchy and runs the unit step in
// every cell, level by level, feeding each cell the coverings its children
// produced. The tree edges of all repetitions are unioned into a sparse graph
// whose exact MST (Boruvka) is the output.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linkage/core.hpp"
#include "linkage/graph.hpp"
#include "linkage/mpc.hpp"
#include "linkage/partition.hpp"
#include "linkage/unit_step.hpp"

namespace linkage {

/// eps = min(eta / (6 c1 L b), eta / (3 c2)). The approximation guarantee is
/// stated for eta <= 3; larger values are still evaluated.
inline double derive_eps(double eta, int levels, double b, double c1, double c2) {
  if (!(eta > 0.0) || levels < 1 || !(b > 0.0) || !(c1 > 0.0) || !(c2 > 0.0)) {
    throw InputError("derive_eps: all inputs must be positive");
  }
  return std::min(eta / (6.0 * c1 * levels * b), eta / (3.0 * c2));
}

inline bool eta_within_guarantee(double eta) { return eta > 0.0 && eta <= 3.0; }

struct SlcParams {
  double eta = 0.5;
  int repetitions = 0;                 // 0 = ceil(log2 n) * repetition_multiplier
  double repetition_multiplier = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double alpha_grid = 2.0;
  int levels = 0;                      // 0 = smallest L with alpha^L >= n
  mpc::MpcConfig mpc;
  bool auto_space = true;              // size space_s so the root cell fits
  std::size_t brute_force_limit = 256;
  Seed seed{42};
};

inline int default_repetitions(std::size_t n, double multiplier) {
  int lg = 0;
  while ((std::size_t{1} << lg) < n) ++lg;
  return std::max(1, static_cast<int>(std::ceil(std::max(1, lg) * multiplier)));
}

/// Words needed per machine so that a cell holding all n points fits in s/3
/// working space: each representative is d coordinates, an id and a label,
/// and the unit step needs twice its input.
inline std::size_t required_space(std::size_t n, std::size_t dim) {
  const std::size_t need = 3 * 2 * n * (dim + 2);
  std::size_t s = 16;
  while (s < need) s <<= 1;
  return s;
}

struct ApproxMstResult {
  SpanningTree tree;
  mpc::MpcTrace trace;          // repetitions (merged as concurrent) then Boruvka
  mpc::MpcTrace boruvka_trace;
  double eps = 0.0;
  int levels = 0;
  int repetitions = 0;
  std::size_t sparsifier_edges = 0;   // union size before dedup
  std::vector<std::size_t> edges_per_repetition;
  std::vector<mpc::MpcTrace> repetition_traces;
  mpc::MpcConfig mpc;
};

namespace detail {

struct RepetitionOutput {
  std::vector<WeightedEdge> edges;
  mpc::MpcTrace trace;
};

inline std::size_t state_words(const ComponentState& s, std::size_t dim) {
  return s.reps.size() * (dim + 2);
}

inline RepetitionOutput run_repetition(const PointSet& ps, const PartitionParams& pparams,
                                       double eps, Seed seed, const SlcParams& params,
                                       const mpc::MpcConfig& cfg) {
  const auto part = sample_partition(ps, pparams, seed);
  const std::size_t n = ps.size(), d = ps.dim();
  std::vector<std::vector<std::int64_t>> finest(n);
  for (std::size_t i = 0; i < n; ++i) finest[i] = part.finest_coords(ps[i]);

  std::map<CellId, ComponentState> cells;
  for (std::size_t i = 0; i < n; ++i) {
    auto& st = cells[part.coarsen(finest[i], 0)];
    st.reps.push_back(static_cast<Index>(i));
    st.labels.push_back(static_cast<Index>(i));
  }

  RepetitionOutput out;
  const int top = part.levels();
  for (int level = 0; level <= top; ++level) {
    const double level_diam = level_diameter(pparams, level, pparams.bbox_side);
    std::vector<const ComponentState*> states;
    states.reserve(cells.size());
    std::vector<mpc::Job<UnitStepOutput>> jobs;
    jobs.reserve(cells.size());
    UnitStepOptions opts;
    opts.brute_force_limit = params.brute_force_limit;
    opts.unbounded = (level == top);
    for (const auto& [id, st] : cells) {
      const ComponentState* sp = &st;
      const std::size_t words = state_words(st, d);
      jobs.push_back({words, 2 * words,
                      [sp, level_diam, eps, &ps, opts] { return unit_step(*sp, level_diam, eps, ps, opts); }});
    }
    auto level_result = mpc::run_level(jobs, cfg, [d](const UnitStepOutput& o) {
      return o.covering.size() * (d + 2) + 3 * o.tree_edges.size();
    });
    out.trace.per_round.push_back(level_result.round);

    std::map<CellId, ComponentState> next;
    for (auto& o : level_result.outputs) {
      out.edges.insert(out.edges.end(), o.tree_edges.begin(), o.tree_edges.end());
      if (level == top) continue;
      for (std::size_t i = 0; i < o.induced.reps.size(); ++i) {
        const Index p = o.induced.reps[i];
        auto& st = next[part.coarsen(finest[p], level + 1)];
        st.reps.push_back(p);
        st.labels.push_back(o.induced.labels[i]);
      }
    }
    cells = std::move(next);
  }
  return out;
}

}  // namespace detail

/// Approximate MST of `ps` under l1, l2 or linf.
inline ApproxMstResult approximate_mst(const PointSet& ps, const SlcParams& params) {
  if (ps.metric() == Metric::L0) {
    throw UnsupportedMetric("approximate_mst: use the exact Hamming MST for l0");
  }
  if (ps.empty()) throw InputError("approximate_mst: empty point set");
  if (!(params.eta > 0.0)) throw InputError("approximate_mst: eta must be positive");

  ApproxMstResult res;
  res.mpc = params.mpc;
  if (params.auto_space) res.mpc.space_s = std::max(res.mpc.space_s, required_space(ps.size(), ps.dim()));
  res.mpc.validate();

  const std::size_t n = ps.size();
  res.tree.n_vertices = n;
  if (n == 1) return res;

  const auto pparams = make_partition_params(ps, params.alpha_grid, params.levels);
  res.levels = pparams.levels;
  res.eps = derive_eps(params.eta, pparams.levels, pparams.b_cut, params.c1, params.c2);
  // The unit step needs eps < 1; only reachable with eta > 3 or tiny c2.
  res.eps = std::min(res.eps, 0.5);
  res.repetitions = params.repetitions > 0 ? params.repetitions
                                           : default_repetitions(n, params.repetition_multiplier);

  std::vector<detail::RepetitionOutput> reps(static_cast<std::size_t>(res.repetitions));
  mpc::MpcConfig inner = res.mpc;
  inner.workers = 1;
  mpc::parallel_for(reps.size(), res.mpc.workers, [&](std::size_t r) {
    const Seed s = derive_seed(params.seed, "repetition-" + std::to_string(r));
    reps[r] = detail::run_repetition(ps, pparams, res.eps, s, params, inner);
  });

  WeightedEdgeList sparsifier{n, {}};
  for (auto& r : reps) {
    res.edges_per_repetition.push_back(r.edges.size());
    sparsifier.edges.insert(sparsifier.edges.end(), r.edges.begin(), r.edges.end());
    res.trace.merge_parallel(r.trace);
    res.repetition_traces.push_back(std::move(r.trace));
  }
  res.sparsifier_edges = sparsifier.edges.size();
  sparsifier.normalize();

  auto [tree, btrace] = mpc::boruvka_mst(sparsifier, res.mpc);
  res.tree = std::move(tree);
  res.boruvka_trace = btrace;
  res.trace.append(btrace);
  return res;
}

/// A k-clustering: labels in [0, k), numbered by first appearance in point
/// order. `objective` is the minimum inter-cluster distance; empty for k = 1.
struct Clustering {
  std::size_t k = 0;
  std::vector<Index> labels;
  std::optional<double> objective;
};

/// Removes the k - 1 heaviest tree edges (ties broken by (weight, u, v)
/// descending) and labels the remaining components.
inline Clustering k_slc_from_mst(const SpanningTree& tree, std::size_t k) {
  const std::size_t n = tree.n_vertices;
  if (k < 1 || k > n) {
    throw InputError("k_slc_from_mst: k must lie in [1, n] (k=" + std::to_string(k) +
                     ", n=" + std::to_string(n) + ")");
  }
  if (tree.edges.size() + 1 != n) throw InputError("k_slc_from_mst: tree does not span the points");
  std::vector<WeightedEdge> sorted = tree.edges;
  std::sort(sorted.begin(), sorted.end(), edge_less);

  Clustering c;
  c.k = k;
  const std::size_t keep = sorted.size() - (k - 1);
  if (k > 1) c.objective = sorted[keep].weight;
  UnionFind uf(n);
  for (std::size_t i = 0; i < keep; ++i) uf.unite(sorted[i].u, sorted[i].v);
  std::vector<Index> cluster_of_root(n, std::numeric_limits<Index>::max());
  c.labels.resize(n);
  Index next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    auto& slot = cluster_of_root[uf.find(static_cast<Index>(v))];
    if (slot == std::numeric_limits<Index>::max()) slot = next++;
    c.labels[v] = slot;
  }
  return c;
}

inline Clustering k_slc_from_mst(const SpanningTree& tree, std::size_t k, const PointSet& ps) {
  if (tree.n_vertices != ps.size()) throw InputError("k_slc_from_mst: tree does not match the point set");
  return k_slc_from_mst(tree, k);
}

struct EdgeGuaranteeReport {
  std::vector<std::pair<double, double>> pairs;  // (exact_i, approx_i), sorted by index
  std::vector<std::size_t> lower_violations;     // approx_i < exact_i
  std::vector<std::size_t> upper_violations;     // approx_i > (1 + eta) exact_i
  double max_ratio = 1.0;

  bool ok() const { return lower_violations.empty() && upper_violations.empty(); }
};

/// Compares the i-th lightest edges of an approximate and an exact tree:
/// w(e_i) <= w(e'_i) <= (1 + eta) w(e_i) for every i.
inline EdgeGuaranteeReport verify_per_edge_guarantee(const SpanningTree& approx,
                                                     const SpanningTree& exact, double eta) {
  if (approx.n_vertices != exact.n_vertices || approx.edges.size() != exact.edges.size()) {
    throw InputError("verify_per_edge_guarantee: trees span different point sets");
  }
  const auto a = approx.sorted_weights();
  const auto e = exact.sorted_weights();
  EdgeGuaranteeReport rep;
  rep.pairs.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    rep.pairs.emplace_back(e[i], a[i]);
    if (a[i] < e[i]) rep.lower_violations.push_back(i);
    if (a[i] > (1.0 + eta) * e[i]) rep.upper_violations.push_back(i);
    double ratio = 1.0;
    if (e[i] > 0.0) {
      ratio = a[i] / e[i];
    } else if (a[i] > 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    }
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

}  // namespace linkage
