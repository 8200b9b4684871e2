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

// Simulated massively-parallel runtime. Machines are logical: work runs in
// process, but every round records how many machines were used, the most
// words held by any one machine and the words exchanged. One word is one
// number or one id; an edge is three words.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "linkage/core.hpp"
#include "linkage/graph.hpp"

namespace linkage::mpc {

struct MpcConfig {
  std::size_t space_s = 1u << 20;  // words per machine
  double alpha_exp = 0.25;         // s ~ n^alpha flavour, used for parameter derivation
  std::size_t max_machines = 0;    // 0 = unbounded
  unsigned workers = 1;            // host threads used to execute machine-local work

  void validate() const {
    if (space_s < 16) throw InputError("MpcConfig: space_s must be >= 16 words");
    if (!(alpha_exp > 0.0 && alpha_exp < 0.5)) throw InputError("MpcConfig: alpha_exp must lie in (0, 0.5)");
  }
};

struct RoundRecord {
  std::string primitive;            // "level", "boruvka", "sort", ...
  std::size_t machines_used = 0;
  std::size_t max_words = 0;        // most words stored on any machine
  std::size_t msg_words = 0;        // total words sent this round
  std::size_t input_words = 0;      // total job input (level rounds only)
};

struct MpcTrace {
  std::vector<RoundRecord> per_round;

  std::size_t rounds() const noexcept { return per_round.size(); }

  std::size_t rounds_of(std::string_view primitive) const {
    return static_cast<std::size_t>(std::count_if(
        per_round.begin(), per_round.end(), [&](const auto& r) { return r.primitive == primitive; }));
  }

  void append(const MpcTrace& later) {
    per_round.insert(per_round.end(), later.per_round.begin(), later.per_round.end());
  }

  /// Folds a trace that ran concurrently with this one: round i of both
  /// becomes one round using the machines of both.
  void merge_parallel(const MpcTrace& other) {
    if (other.per_round.size() > per_round.size()) per_round.resize(other.per_round.size());
    for (std::size_t i = 0; i < other.per_round.size(); ++i) {
      auto& r = per_round[i];
      const auto& o = other.per_round[i];
      if (r.primitive.empty()) r.primitive = o.primitive;
      r.machines_used += o.machines_used;
      r.max_words = std::max(r.max_words, o.max_words);
      r.msg_words += o.msg_words;
      r.input_words += o.input_words;
    }
  }

  /// One JSON object per line: {round, machines, max_words, msg_words}.
  void dump_jsonl(std::ostream& out) const {
    for (std::size_t i = 0; i < per_round.size(); ++i) {
      nlohmann::ordered_json j;
      j["round"] = i;
      j["machines"] = per_round[i].machines_used;
      j["max_words"] = per_round[i].max_words;
      j["msg_words"] = per_round[i].msg_words;
      out << j.dump() << '\n';
    }
  }
};

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Results must be
/// written to per-index slots; no ordering between indices is implied.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(count, 256)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

/// A unit of machine-local work. `space_words` is the peak working space of
/// the job (at least its input size).
template <typename Out>
struct Job {
  std::size_t input_words = 0;
  std::size_t space_words = 0;
  std::function<Out()> run;
};

/// Greedy packing: a job goes to the first machine that still has at least
/// 2s/3 words free; a new machine is opened only when none has. Returns the
/// machine index per job.
inline std::vector<std::size_t> assign_machines(const std::vector<std::size_t>& input_words,
                                                std::size_t space_s) {
  std::vector<std::size_t> assignment(input_words.size());
  std::vector<std::size_t> used;
  std::size_t open = 0;  // machines [0, open) are full; all later ones have room
  for (std::size_t j = 0; j < input_words.size(); ++j) {
    while (open < used.size() && 3 * (space_s - used[open]) < 2 * space_s) ++open;
    if (open == used.size()) used.push_back(0);
    used[open] += input_words[j];
    assignment[j] = open;
  }
  return assignment;
}

template <typename Out>
struct LevelResult {
  std::vector<Out> outputs;
  RoundRecord round;
  std::vector<std::size_t> assignment;
};

/// Executes one bulk-synchronous round of independent jobs. Every job must
/// fit in s/3 words of working space; the run fails with a CapacityError
/// naming the first job that does not.
template <typename Out, typename OutputWords>
LevelResult<Out> run_level(std::vector<Job<Out>>& jobs, const MpcConfig& cfg,
                           OutputWords&& output_words) {
  cfg.validate();
  std::vector<std::size_t> inputs(jobs.size());
  std::size_t total_input = 0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& job = jobs[j];
    const std::size_t space = std::max(job.space_words, job.input_words);
    if (3 * space > cfg.space_s) {
      throw CapacityError("job " + std::to_string(j) + " needs " + std::to_string(space) +
                          " words of working space; at most s/3 = " +
                          std::to_string(cfg.space_s / 3) + " allowed");
    }
    inputs[j] = job.input_words;
    total_input += job.input_words;
  }

  LevelResult<Out> res;
  res.assignment = assign_machines(inputs, cfg.space_s);
  const std::size_t machines =
      jobs.empty() ? 0 : *std::max_element(res.assignment.begin(), res.assignment.end()) + 1;
  if (cfg.max_machines != 0 && machines > cfg.max_machines) {
    throw CapacityError("round needs " + std::to_string(machines) + " machines; limit is " +
                        std::to_string(cfg.max_machines));
  }
  // Every machine but the last holds more than s/3 words of input.
  if (machines * cfg.space_s > 3 * total_input + cfg.space_s) {
    throw std::logic_error("run_level: machine bound 3S/s + 1 violated");
  }

  std::vector<std::size_t> stored(machines, 0), peak(machines, 0);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto m = res.assignment[j];
    stored[m] += jobs[j].input_words;
    peak[m] = std::max(peak[m], std::max(jobs[j].space_words, jobs[j].input_words));
  }

  res.outputs.resize(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t j) { res.outputs[j] = jobs[j].run(); });

  res.round.primitive = "level";
  res.round.machines_used = machines;
  res.round.input_words = total_input;
  for (std::size_t m = 0; m < machines; ++m) {
    res.round.max_words = std::max(res.round.max_words, stored[m] + peak[m]);
  }
  for (const auto& o : res.outputs) res.round.msg_words += output_words(o);
  return res;
}

namespace detail {

/// Load model for record-parallel rounds: edge records and vertex records
/// are spread over machines holding at most s/4 words of records each, so
/// that incoming messages (at most 1.5x the records) still fit.
inline RoundRecord record_round(std::string primitive, std::size_t edge_records,
                                std::size_t vertex_records, std::size_t msg_words,
                                std::size_t space_s) {
  const std::size_t cap = space_s / 4;
  const std::size_t per_edge_machine = std::max<std::size_t>(1, cap / 3);
  const std::size_t per_vertex_machine = std::max<std::size_t>(1, cap / 2);
  RoundRecord r;
  r.primitive = std::move(primitive);
  r.machines_used = (edge_records + per_edge_machine - 1) / per_edge_machine +
                    (vertex_records + per_vertex_machine - 1) / per_vertex_machine;
  const std::size_t edge_load = std::min(edge_records, per_edge_machine) * (3 + 2);
  const std::size_t vertex_load = std::min(vertex_records, per_vertex_machine) * (2 + 3);
  r.max_words = std::max(edge_load, vertex_load);
  r.msg_words = msg_words;
  return r;
}

}  // namespace detail

/// Exact minimum spanning forest by Boruvka phases under the (weight, u, v)
/// order. Each phase costs two rounds: per-component minimum edge selection
/// and relabel/contract. Rounds <= 2*ceil(log2 n) + 2.
inline std::pair<SpanningTree, MpcTrace> boruvka_mst(const WeightedEdgeList& g,
                                                     const MpcConfig& cfg,
                                                     std::string primitive = "boruvka") {
  cfg.validate();
  SpanningTree tree{g.n_vertices, {}};
  MpcTrace trace;
  const std::size_t n = g.n_vertices;

  std::vector<WeightedEdge> live;
  live.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    if (e.u >= n || e.v >= n) throw InputError("boruvka_mst: edge endpoint out of range");
    if (e.u != e.v) live.push_back(make_edge(e.u, e.v, e.weight));
  }

  UnionFind uf(n);
  std::vector<Index> label(n);
  std::iota(label.begin(), label.end(), Index{0});
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> best(n, kNone);
  std::size_t components = n;

  while (true) {
    // Round A: every live edge proposes itself to both endpoint components.
    std::fill(best.begin(), best.end(), kNone);
    for (std::size_t i = 0; i < live.size(); ++i) {
      const Index cu = label[live[i].u], cv = label[live[i].v];
      for (Index c : {cu, cv}) {
        if (best[c] == kNone || edge_less(live[i], live[best[c]])) best[c] = i;
      }
    }
    trace.per_round.push_back(
        detail::record_round(primitive, live.size(), components, 2 * 3 * live.size(), cfg.space_s));

    std::vector<std::size_t> chosen;
    for (std::size_t c = 0; c < n; ++c) {
      if (best[c] != kNone) chosen.push_back(best[c]);
    }
    if (chosen.empty()) break;
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    for (auto i : chosen) {
      // Under a strict total order the chosen edges form a forest.
      if (uf.unite(live[i].u, live[i].v)) {
        tree.edges.push_back(live[i]);
        --components;
      }
    }

    // Round B: relabel endpoints with their new component and drop
    // intra-component edges.
    for (std::size_t v = 0; v < n; ++v) label[v] = uf.find(static_cast<Index>(v));
    std::erase_if(live, [&](const WeightedEdge& e) { return label[e.u] == label[e.v]; });
    trace.per_round.push_back(
        detail::record_round(primitive, live.size(), components, 2 * live.size() + 2 * n, cfg.space_s));
    if (live.empty()) break;
  }
  tree.sort_edges();
  return {std::move(tree), std::move(trace)};
}

/// Labels each vertex with the minimum vertex id of its component.
inline std::pair<std::vector<Index>, MpcTrace> connected_components(const WeightedEdgeList& g,
                                                                    const MpcConfig& cfg) {
  WeightedEdgeList unit{g.n_vertices, {}};
  unit.edges.reserve(g.edges.size());
  for (const auto& e : g.edges) unit.edges.push_back({e.u, e.v, 0.0});
  auto [forest, trace] = boruvka_mst(unit, cfg, "connectivity");
  UnionFind uf(g.n_vertices);
  for (const auto& e : forest.edges) uf.unite(e.u, e.v);
  std::vector<Index> min_of(g.n_vertices, std::numeric_limits<Index>::max());
  for (std::size_t v = 0; v < g.n_vertices; ++v) {
    auto& m = min_of[uf.find(static_cast<Index>(v))];
    m = std::min(m, static_cast<Index>(v));
  }
  std::vector<Index> labels(g.n_vertices);
  for (std::size_t v = 0; v < g.n_vertices; ++v) labels[v] = min_of[uf.find(static_cast<Index>(v))];
  return {std::move(labels), std::move(trace)};
}

/// Rounds allowed to Boruvka-style primitives on n vertices.
inline std::size_t log_round_bound(std::size_t n) {
  std::size_t lg = 0;
  while ((std::size_t{1} << lg) < n) ++lg;
  return 2 * lg + 2;
}

/// Stable sample sort by regular sampling. Items are spread s/4 words per
/// machine; rounds are local sort + sampling, splitter broadcast, routing and
/// the final local merge (at most 4).
template <typename Key, typename Payload, typename Less = std::less<Key>>
std::pair<std::vector<std::pair<Key, Payload>>, MpcTrace> distributed_sort(
    std::vector<std::pair<Key, Payload>> items, const MpcConfig& cfg,
    std::size_t words_per_item = 2, Less less = {}) {
  cfg.validate();
  MpcTrace trace;
  const std::size_t n = items.size();
  const std::size_t per_machine = std::max<std::size_t>(1, (cfg.space_s / 4) / words_per_item);
  const std::size_t p = std::max<std::size_t>(1, (n + per_machine - 1) / per_machine);

  // Position breaks key ties, which makes the sort stable.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto item_less = [&](std::size_t a, std::size_t b) {
    if (less(items[a].first, items[b].first)) return true;
    if (less(items[b].first, items[a].first)) return false;
    return a < b;
  };

  auto push = [&](std::size_t machines, std::size_t max_words, std::size_t msgs) {
    RoundRecord r;
    r.primitive = "sort";
    r.machines_used = machines;
    r.max_words = max_words;
    r.msg_words = msgs;
    trace.per_round.push_back(r);
  };

  if (p == 1) {
    std::sort(order.begin(), order.end(), item_less);
    push(n == 0 ? 0 : 1, n * words_per_item, 0);
  } else {
    if (p * (p - 1) * words_per_item > cfg.space_s) {
      throw CapacityError("distributed_sort: " + std::to_string(p) +
                          " machines produce more samples than fit on one machine");
    }
    // Round 1: local sorts, p-1 regular samples per machine to a coordinator.
    std::vector<std::size_t> samples;
    for (std::size_t m = 0; m < p; ++m) {
      const std::size_t lo = m * per_machine, hi = std::min(n, lo + per_machine);
      std::sort(order.begin() + lo, order.begin() + hi, item_less);
      const std::size_t len = hi - lo;
      for (std::size_t k = 1; k < p; ++k) samples.push_back(order[lo + (k * len) / p]);
    }
    const std::size_t sample_words = samples.size() * words_per_item;
    push(p, std::max(per_machine * words_per_item, sample_words), sample_words);

    // Round 2: splitters chosen and broadcast.
    std::sort(samples.begin(), samples.end(), item_less);
    std::vector<std::size_t> splitters;
    for (std::size_t k = 1; k < p; ++k) splitters.push_back(samples[(k * samples.size()) / p]);
    push(p, std::max(per_machine * words_per_item, sample_words),
         p * splitters.size() * words_per_item);

    // Round 3: route each item to its bucket.
    std::vector<std::vector<std::size_t>> buckets(p);
    for (std::size_t i : order) {
      const auto it = std::upper_bound(splitters.begin(), splitters.end(), i,
                                       [&](std::size_t a, std::size_t b) { return item_less(a, b); });
      buckets[static_cast<std::size_t>(it - splitters.begin())].push_back(i);
    }
    std::size_t biggest = 0;
    for (const auto& b : buckets) biggest = std::max(biggest, b.size());
    const std::size_t route_peak = (per_machine + biggest) * words_per_item;
    if (route_peak > cfg.space_s) {
      throw CapacityError("distributed_sort: bucket of " + std::to_string(biggest) +
                          " items exceeds machine space");
    }
    push(p, route_peak, n * words_per_item);

    // Round 4: local merge of each bucket.
    order.clear();
    for (auto& b : buckets) {
      std::sort(b.begin(), b.end(), item_less);
      order.insert(order.end(), b.begin(), b.end());
    }
    push(p, biggest * words_per_item, 0);
  }

  std::vector<std::pair<Key, Payload>> out;
  out.reserve(n);
  for (std::size_t i : order) out.push_back(std::move(items[i]));
  return {std::move(out), std::move(trace)};
}

}  // namespace linkage::mpc
