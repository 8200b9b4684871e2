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


#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include <json.hpp>

#include "linkage/mpc.hpp"
#include "test_util.hpp"

using namespace linkage;
using namespace linkage::mpc;

namespace {

MpcConfig config(std::size_t s) {
  MpcConfig c;
  c.space_s = s;
  return c;
}

std::vector<Job<int>> sized_jobs(const std::vector<std::size_t>& sizes) {
  std::vector<Job<int>> jobs;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    jobs.push_back({sizes[i], sizes[i], [i] { return static_cast<int>(i); }});
  }
  return jobs;
}

WeightedEdgeList random_graph(std::size_t n, std::size_t m, std::uint64_t seed, int distinct) {
  std::mt19937_64 gen(seed);
  WeightedEdgeList g{n, {}};
  for (std::size_t i = 0; i < m; ++i) {
    const auto a = static_cast<Index>(gen() % n), b = static_cast<Index>(gen() % n);
    if (a == b) continue;
    g.add(a, b, static_cast<double>(gen() % distinct));
  }
  g.normalize();
  return g;
}

// Independent Kruskal on an edge list with (w, u, v) ordering.
std::vector<WeightedEdge> kruskal(const WeightedEdgeList& g) {
  auto es = g.edges;
  std::sort(es.begin(), es.end(), [](const auto& x, const auto& y) {
    return std::tie(x.weight, x.u, x.v) < std::tie(y.weight, y.u, y.v);
  });
  std::vector<Index> parent(g.n_vertices);
  std::iota(parent.begin(), parent.end(), Index{0});
  std::function<Index(Index)> find = [&](Index x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<WeightedEdge> out;
  for (const auto& e : es) {
    const auto a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      out.push_back(e);
    }
  }
  return out;
}

void check_trace(const MpcTrace& t, const MpcConfig& cfg) {
  for (const auto& r : t.per_round) ASSERT_LE(r.max_words, cfg.space_s) << r.primitive;
}

}  // namespace

TEST(MpcConfig, Validate) {
  EXPECT_THROW(config(8).validate(), InputError);
  MpcConfig c;
  c.alpha_exp = 0.5;
  EXPECT_THROW(c.validate(), InputError);
  EXPECT_NO_THROW(config(16).validate());
}

TEST(RunLevel, SingleSmallJob) {
  auto jobs = sized_jobs({250});
  const auto r = run_level(jobs, config(1000), [](int) { return std::size_t{1}; });
  EXPECT_EQ(r.round.machines_used, 1u);
  EXPECT_EQ(r.outputs, std::vector<int>{0});
}

TEST(RunLevel, SixThirdJobs) {
  const std::size_t s = 900;
  auto jobs = sized_jobs(std::vector<std::size_t>(6, s / 3));
  const auto r = run_level(jobs, config(s), [](int) { return std::size_t{0}; });
  EXPECT_LE(r.round.machines_used, 7u);
  EXPECT_LE(r.round.max_words, s);
  // Each job lands on the earliest machine with at least 2s/3 free.
  std::vector<std::size_t> used(r.round.machines_used, 0);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    for (std::size_t m = 0; m < r.assignment[j]; ++m) ASSERT_LT(3 * (s - used[m]), 2 * s);
    used[r.assignment[j]] += jobs[j].input_words;
  }
}

TEST(RunLevel, OversizedJob) {
  auto jobs = sized_jobs({10, 400, 10});
  try {
    run_level(jobs, config(900), [](int) { return std::size_t{0}; });
    FAIL();
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("job 1"), std::string::npos);
  }
}

TEST(RunLevel, MachineLimit) {
  auto jobs = sized_jobs(std::vector<std::size_t>(10, 300));
  MpcConfig c = config(900);
  c.max_machines = 2;
  EXPECT_THROW(run_level(jobs, c, [](int) { return std::size_t{0}; }), CapacityError);
}

TEST(RunLevel, RandomJobsBoundAndReplay) {
  std::mt19937_64 gen(21);
  const std::size_t s = 3000;
  for (int t = 0; t < 50; ++t) {
    std::vector<std::size_t> sizes(100);
    for (auto& x : sizes) x = 1 + gen() % (s / 3);
    auto a = sized_jobs(sizes), b = sized_jobs(sizes);
    const auto ra = run_level(a, config(s), [](int) { return std::size_t{1}; });
    const auto rb = run_level(b, config(s), [](int) { return std::size_t{1}; });
    EXPECT_EQ(ra.assignment, rb.assignment);
    const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    EXPECT_LE(ra.round.machines_used * s, 3 * total + s);
    EXPECT_LE(ra.round.max_words, s);
    EXPECT_EQ(ra.round.msg_words, 100u);
  }
}

TEST(RunLevel, ParallelWorkersSameOutputs) {
  std::vector<std::size_t> sizes(64, 5);
  auto a = sized_jobs(sizes), b = sized_jobs(sizes);
  MpcConfig c = config(1000);
  const auto ra = run_level(a, c, [](int) { return std::size_t{0}; });
  c.workers = 4;
  const auto rb = run_level(b, c, [](int) { return std::size_t{0}; });
  EXPECT_EQ(ra.outputs, rb.outputs);
}

TEST(Boruvka, Examples) {
  WeightedEdgeList path{4, {}};
  path.add(0, 1, 1);
  path.add(1, 2, 1);
  path.add(2, 3, 1);
  auto [t, trace] = boruvka_mst(path, config(1 << 12));
  EXPECT_EQ(t.edges.size(), 3u);
  EXPECT_DOUBLE_EQ(t.total_weight(), 3.0);

  WeightedEdgeList tri{3, {}};
  tri.add(0, 1, 1);
  tri.add(1, 2, 2);
  tri.add(0, 2, 3);
  auto [tt, tr] = boruvka_mst(tri, config(1 << 12));
  EXPECT_EQ(tt.sorted_weights(), (std::vector<double>{1, 2}));
}

TEST(Boruvka, MatchesKruskalEdgeSets) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const std::size_t n = 500;
    const auto g = random_graph(n, 3000, s, s % 2 ? 5 : 1000000);
    const auto cfg = config(1 << 14);
    auto [t, trace] = boruvka_mst(g, cfg);
    auto got = t.edges;
    auto want = kruskal(g);
    auto key = [](const WeightedEdge& e) { return std::make_tuple(e.weight, e.u, e.v); };
    auto cmp = [&](const auto& x, const auto& y) { return key(x) < key(y); };
    std::sort(got.begin(), got.end(), cmp);
    std::sort(want.begin(), want.end(), cmp);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) ASSERT_EQ(key(got[i]), key(want[i]));
    EXPECT_LE(trace.rounds(), log_round_bound(n));
    check_trace(trace, cfg);
  }
}

TEST(Boruvka, ZeroWeightsAndForest) {
  WeightedEdgeList g{6, {}};
  g.add(0, 1, 0);
  g.add(1, 2, 0);
  g.add(3, 4, 2);
  auto [t, trace] = boruvka_mst(g, config(1 << 10));
  EXPECT_EQ(t.edges.size(), 3u);
  EXPECT_TRUE(is_spanning_forest(t, 3));
}

TEST(Connectivity, Examples) {
  WeightedEdgeList two{6, {}};
  for (auto [a, b] : std::vector<std::pair<Index, Index>>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}) {
    two.add(a, b, 7);
  }
  auto [labels, trace] = connected_components(two, config(1 << 10));
  EXPECT_EQ(labels, (std::vector<Index>{0, 0, 0, 3, 3, 3}));

  const std::size_t n = 1000;
  WeightedEdgeList cyc{n, {}};
  for (std::size_t i = 0; i < n; ++i) cyc.add(static_cast<Index>(i), static_cast<Index>((i + 1) % n), 1);
  cyc.normalize();
  auto [cl, ct] = connected_components(cyc, config(1 << 12));
  for (auto l : cl) EXPECT_EQ(l, 0u);
  EXPECT_LE(ct.rounds(), log_round_bound(n));
  EXPECT_EQ(ct.rounds_of("connectivity"), ct.rounds());
}

TEST(Connectivity, MatchesUnionFind) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t n = 400;
    const auto g = random_graph(n, 300, s, 3);
    const auto cfg = config(1 << 12);
    auto [labels, trace] = connected_components(g, cfg);
    std::vector<Index> parent(n);
    std::iota(parent.begin(), parent.end(), Index{0});
    std::function<Index(Index)> find = [&](Index x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& e : g.edges) parent[find(e.u)] = find(e.v);
    std::vector<Index> minimum(n, n);
    for (Index v = 0; v < n; ++v) minimum[find(v)] = std::min(minimum[find(v)], v);
    for (Index v = 0; v < n; ++v) ASSERT_EQ(labels[v], minimum[find(v)]);
    EXPECT_LE(trace.rounds(), log_round_bound(n));
    check_trace(trace, cfg);
  }
}

TEST(Sort, Examples) {
  std::vector<std::pair<int, int>> sorted{{1, 0}, {2, 1}, {2, 2}, {3, 3}};
  auto [a, ta] = distributed_sort(sorted, config(64));
  EXPECT_EQ(a, sorted);
  std::vector<std::pair<int, int>> rev{{3, 0}, {2, 1}, {2, 2}, {1, 3}};
  auto [b, tb] = distributed_sort(rev, config(64));
  EXPECT_EQ(b, (std::vector<std::pair<int, int>>{{1, 3}, {2, 1}, {2, 2}, {3, 0}}));
  EXPECT_LE(tb.rounds(), 4u);
}

TEST(Sort, RandomKeysStable) {
  std::mt19937_64 gen(5);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> items(100000);
  for (std::uint32_t i = 0; i < items.size(); ++i) items[i] = {static_cast<std::uint32_t>(gen() % 5000), i};
  auto want = items;
  std::stable_sort(want.begin(), want.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t s : {std::size_t{1} << 14, std::size_t{1} << 16, std::size_t{1} << 20}) {
    const auto cfg = config(s);
    auto [got, trace] = distributed_sort(items, cfg);
    ASSERT_EQ(got, want);
    EXPECT_LE(trace.rounds(), 4u);
    check_trace(trace, cfg);
  }
}

TEST(Sort, Overflow) {
  std::vector<std::pair<int, int>> items(100000, {0, 0});
  EXPECT_THROW(distributed_sort(items, config(16)), CapacityError);
  EXPECT_THROW(distributed_sort(items, config(1 << 12)), CapacityError);
}

TEST(Trace, JsonLines) {
  MpcTrace t;
  t.per_round.push_back({"level", 3, 100, 40, 90});
  t.per_round.push_back({"boruvka", 1, 20, 5, 0});
  std::ostringstream out;
  t.dump_jsonl(out);
  std::istringstream in(out.str());
  std::string line;
  int i = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.size(), 4u);
    EXPECT_EQ(j["round"], i);
    EXPECT_EQ(j["machines"], t.per_round[i].machines_used);
    EXPECT_EQ(j["max_words"], t.per_round[i].max_words);
    EXPECT_EQ(j["msg_words"], t.per_round[i].msg_words);
    ++i;
  }
  EXPECT_EQ(i, 2);
}

TEST(Trace, MergeParallel) {
  MpcTrace a, b;
  a.per_round.push_back({"level", 2, 10, 5, 1});
  b.per_round.push_back({"level", 3, 20, 6, 2});
  b.per_round.push_back({"level", 1, 7, 1, 1});
  a.merge_parallel(b);
  ASSERT_EQ(a.rounds(), 2u);
  EXPECT_EQ(a.per_round[0].machines_used, 5u);
  EXPECT_EQ(a.per_round[0].max_words, 20u);
  EXPECT_EQ(a.per_round[1].machines_used, 1u);
}

TEST(Graph, NormalizeDedupes) {
  WeightedEdgeList g{3, {}};
  g.add(2, 0, 5);
  g.add(0, 2, 3);
  g.add(1, 0, 1);
  g.normalize();
  ASSERT_EQ(g.edges.size(), 2u);
  for (const auto& e : g.edges) EXPECT_LT(e.u, e.v);
  g.add(0, 3, 1);
  EXPECT_THROW(g.normalize(), InputError);
}
