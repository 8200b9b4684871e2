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
#include <numeric>

#include "linkage/graph.hpp"
#include "linkage/oracle.hpp"
#include "linkage/unit_step.hpp"
#include "test_util.hpp"

using namespace linkage;

namespace {

std::vector<Index> iota_ids(std::size_t n) {
  std::vector<Index> v(n);
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

PointSet line(std::vector<double> xs) {
  PointSet ps(1, Metric::L2);
  for (double x : xs) ps.push_back(std::vector<double>{x});
  return ps;
}

}  // namespace

TEST(Covering, Examples) {
  const auto ps = line({0, 0.1, 0.9, 1.0});
  const auto ids = iota_ids(4);
  const auto cov = build_covering(ids, 0.25, ps);
  EXPECT_LE(cov.size(), 4u);
  EXPECT_TRUE(oracle::is_covering(ids, cov, 0.25, ps));
  EXPECT_EQ(build_covering(ids, 5.0, ps), std::vector<Index>{0});
  const std::vector<Index> one{2};
  EXPECT_EQ(build_covering(one, 0.01, ps), one);
}

TEST(Covering, GridSteps) {
  EXPECT_DOUBLE_EQ(covering_grid_step(Metric::L1, 4, 1.0), 0.25);
  EXPECT_DOUBLE_EQ(covering_grid_step(Metric::L2, 4, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(covering_grid_step(Metric::Linf, 4, 1.0), 1.0);
}

TEST(Covering, RandomBruteForce) {
  for (Metric m : {Metric::L1, Metric::L2, Metric::Linf}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto ps = testutil::uniform_points(300, 3, m, s);
      const auto ids = iota_ids(ps.size());
      for (double r : {0.05, 0.2, 0.7}) {
        const auto cov = build_covering(ids, r, ps);
        ASSERT_TRUE(std::is_sorted(cov.begin(), cov.end()));
        ASSERT_TRUE(std::includes(ids.begin(), ids.end(), cov.begin(), cov.end()));
        ASSERT_TRUE(oracle::is_covering(ids, cov, r, ps)) << to_string(m) << " r=" << r;
      }
    }
  }
}

TEST(ClosestPair, Examples) {
  const auto ps = line({0, 5});
  const auto st = ComponentState::singletons({0, 1});
  const auto e = approx_closest_cross_pair(st, 0.0, ps);
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(e->weight, 5.0);
  ComponentState one{{0, 1}, {0, 0}};
  EXPECT_FALSE(approx_closest_cross_pair(one, 0.0, ps).has_value());
  EXPECT_THROW(approx_closest_cross_pair(st, -0.1, ps), InputError);
}

TEST(ClosestPair, AgainstBruteForce) {
  std::mt19937_64 gen(4);
  for (Metric m : {Metric::L1, Metric::L2, Metric::Linf}) {
    for (std::size_t n : {50u, 200u, 600u}) {
      const auto ps = testutil::uniform_points(n, 3, m, n);
      ComponentState st;
      st.reps = iota_ids(n);
      for (std::size_t i = 0; i < n; ++i) st.labels.push_back(static_cast<Index>(gen() % 3));
      const auto brute = oracle::brute_closest_cross_pair(st.reps, st.labels, ps);
      for (double eps : {0.0, 0.1}) {
        for (std::size_t limit : {std::size_t{0}, std::size_t{100000}}) {
          const auto e = approx_closest_cross_pair(st, eps, ps, limit);
          ASSERT_TRUE(e.has_value());
          EXPECT_GE(e->weight, brute->weight);
          EXPECT_LE(e->weight, (1 + eps) * brute->weight);
          EXPECT_NE(st.labels[e->u], st.labels[e->v]);
        }
      }
    }
  }
}

TEST(UnitStep, SingleComponent) {
  const auto ps = line({0, 1, 2});
  ComponentState st{{0, 1, 2}, {0, 0, 0}};
  const auto out = unit_step(st, 10.0, 0.5, ps);
  EXPECT_TRUE(out.tree_edges.empty());
  for (Index l : out.induced.labels) EXPECT_EQ(l, 0u);
}

TEST(UnitStep, TwoPoints) {
  const auto ps = line({0, 1});
  const auto out = unit_step(ComponentState::singletons({0, 1}), 4.0, 0.5, ps);
  ASSERT_EQ(out.tree_edges.size(), 1u);
  EXPECT_EQ(out.tree_edges[0].weight, 1.0);
  EXPECT_EQ(out.induced.num_components(), 1u);
}

TEST(UnitStep, CollinearThreshold) {
  const auto ps = line({0, 1, 2, 3, 4});
  // eps * Delta = 1.5
  const auto out = unit_step(ComponentState::singletons(iota_ids(5)), 3.0, 0.5, ps);
  ASSERT_EQ(out.tree_edges.size(), 4u);
  for (const auto& e : out.tree_edges) EXPECT_EQ(e.weight, 1.0);
  // eps * Delta = 0.9: nothing merges
  const auto none = unit_step(ComponentState::singletons(iota_ids(5)), 1.8, 0.5, ps);
  EXPECT_TRUE(none.tree_edges.empty());
}

TEST(UnitStep, Preconditions) {
  const auto ps = line({0, 1});
  const auto st = ComponentState::singletons({0, 1});
  EXPECT_THROW(unit_step(st, 1.0, 0.0, ps), InputError);
  EXPECT_THROW(unit_step(st, 1.0, 1.0, ps), InputError);
}

TEST(UnitStep, UnboundedEqualsKruskal) {
  for (Metric m : {Metric::L1, Metric::L2, Metric::Linf}) {
    for (std::size_t n : {10u, 80u, 200u}) {
      const auto ps = testutil::uniform_points(n, 2, m, 31 * n);
      UnitStepOptions opts;
      opts.unbounded = true;
      for (std::size_t limit : {std::size_t{0}, std::size_t{256}}) {
        opts.brute_force_limit = limit;
        const auto out = unit_step(ComponentState::singletons(iota_ids(n)), 1.0, 0.01, ps, opts);
        std::vector<double> w;
        for (const auto& e : out.tree_edges) w.push_back(e.weight);
        std::sort(w.begin(), w.end());
        const auto ref = testutil::kruskal_weights(ps);
        ASSERT_EQ(w.size(), ref.size());
        for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], ref[i], 1e-12);
      }
    }
  }
}

// Replays the literal merge loop with the brute-force closest-pair oracle.
TEST(UnitStep, ReplayAgainstGreedyLoop) {
  std::mt19937_64 gen(8);
  for (Metric m : {Metric::L1, Metric::L2, Metric::Linf}) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 60;
      const auto ps = testutil::uniform_points(n, 2, m, 1000 + trial);
      ComponentState st;
      st.reps = iota_ids(n);
      for (std::size_t i = 0; i < n; ++i) st.labels.push_back(static_cast<Index>(gen() % 20));
      const double delta = 1.0, eps = 0.15;
      for (std::size_t limit : {std::size_t{0}, std::size_t{256}}) {
        UnitStepOptions opts;
        opts.brute_force_limit = limit;
        const auto out = unit_step(st, delta, eps, ps, opts);

        std::vector<Index> labels = st.labels;
        std::vector<double> expected;
        while (true) {
          const auto e = oracle::brute_closest_cross_pair(st.reps, labels, ps);
          if (!e || e->weight > eps * delta) break;
          expected.push_back(e->weight);
          const Index from = labels[e->v], to = labels[e->u];
          for (auto& l : labels) {
            if (l == from) l = to;
          }
        }
        std::vector<double> got;
        UnionFind uf(n);
        for (const auto& e : out.tree_edges) {
          got.push_back(e.weight);
          ASSERT_LE(e.weight, eps * delta);
        }
        // Edges must form a forest over the input components.
        std::map<Index, Index> comp_root;
        for (std::size_t i = 0; i < n; ++i) {
          auto [it, fresh] = comp_root.emplace(st.labels[i], static_cast<Index>(i));
          if (!fresh) uf.unite(it->second, static_cast<Index>(i));
        }
        for (const auto& e : out.tree_edges) ASSERT_TRUE(uf.unite(e.u, e.v));
        std::sort(got.begin(), got.end());
        ASSERT_EQ(got, expected);

        ASSERT_TRUE(oracle::is_covering(st.reps, out.covering, eps * eps * delta, ps));
        // Induced labels agree with the union of input components and edges.
        for (std::size_t a = 0; a < out.covering.size(); ++a) {
          for (std::size_t b = 0; b < out.covering.size(); ++b) {
            ASSERT_EQ(out.induced.labels[a] == out.induced.labels[b],
                      uf.find(out.covering[a]) == uf.find(out.covering[b]));
          }
        }
      }
    }
  }
}

TEST(UnitStep, MonotoneWhenExact) {
  const auto ps = testutil::uniform_points(150, 2, Metric::L2, 3);
  const auto out = unit_step(ComponentState::singletons(iota_ids(150)), 1.0, 0.3, ps);
  // Emission order for the greedy loop is nondecreasing; sorted edges equal it.
  std::vector<double> w;
  for (const auto& e : out.tree_edges) w.push_back(e.weight);
  auto sorted = w;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(w, sorted);
}
