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

#include <cmath>
#include <map>
#include <set>

#include "linkage/oracle.hpp"
#include "linkage/partition.hpp"
#include "test_util.hpp"

using namespace linkage;

TEST(Partition, Constants) {
  EXPECT_EQ(grid_constants(Metric::L2, 4), std::make_pair(2.0, 4.0));
  EXPECT_EQ(grid_constants(Metric::L1, 3), std::make_pair(3.0, 9.0));
  EXPECT_EQ(grid_constants(Metric::Linf, 3), std::make_pair(1.0, 3.0));
  EXPECT_THROW(grid_constants(Metric::L0, 2), UnsupportedMetric);
}

TEST(Partition, LevelDiameter) {
  PartitionParams p;
  p.alpha_grid = 2;
  p.levels = 3;
  p.gamma = 1;
  EXPECT_DOUBLE_EQ(level_diameter(p, 1, 8.0), 2.0);
  EXPECT_DOUBLE_EQ(level_diameter(p, 3, 8.0), 8.0);
  p.gamma = std::sqrt(2.0);
  EXPECT_DOUBLE_EQ(level_diameter(p, 3, 8.0), std::sqrt(2.0) * 8.0);
  EXPECT_THROW(level_diameter(p, 4, 8.0), InputError);
}

TEST(Partition, ZeroShiftCoords) {
  PartitionParams p;
  p.alpha_grid = 2;
  p.levels = 1;
  p.bbox_side = 1.0;
  HierarchicalPartition part(p, {0.0, 0.0}, {0.0, 0.0});
  const std::vector<double> x{0.3, 0.7};
  EXPECT_EQ(part.cell_id(x, 0).coords, (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(part.cell_id(x, 1).coords, (std::vector<std::int64_t>{0, 0}));
  EXPECT_THROW(part.cell_id(x, 2), InputError);
  EXPECT_THROW(part.cell_id(x, -1), InputError);
}

TEST(Partition, RejectsFractionalAlpha) {
  const auto ps = testutil::uniform_points(10, 2, Metric::L2, 1);
  EXPECT_THROW(make_partition_params(ps, 2.5), InputError);
  EXPECT_THROW(make_partition_params(ps, 1.0), InputError);
}

TEST(Partition, Singleton) {
  auto ps = PointSet::from_rows({{0.4, 0.2}}, Metric::L2);
  const auto params = make_partition_params(ps);
  const auto part = sample_partition(ps, params, Seed{3});
  for (int l = 0; l <= part.levels(); ++l) {
    EXPECT_EQ(part.cell_id(ps[0], l).coords, (std::vector<std::int64_t>{0, 0}));
  }
}

TEST(Partition, RootAndNesting) {
  const auto ps = testutil::uniform_points(1000, 3, Metric::L2, 2, -3, 5);
  const auto params = make_partition_params(ps);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto part = sample_partition(ps, params, Seed{s});
    const int L = part.levels();
    std::vector<std::vector<CellId>> ids(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (int l = 0; l <= L; ++l) ids[i].push_back(part.cell_id(ps[i], l));
      ASSERT_EQ(ids[i][L], ids[0][L]);
    }
    for (std::size_t i = 0; i < ps.size(); i += 7) {
      for (std::size_t j = 0; j < ps.size(); ++j) {
        for (int l = 0; l < L; ++l) {
          if (ids[i][l] == ids[j][l]) ASSERT_EQ(ids[i][l + 1], ids[j][l + 1]);
        }
      }
    }
  }
}

TEST(Partition, FarPointsSeparated) {
  const auto ps = testutil::uniform_points(300, 2, Metric::Linf, 4);
  const auto params = make_partition_params(ps);
  const auto part = sample_partition(ps, params, Seed{9});
  for (int l = 0; l < part.levels(); ++l) {
    const double dl = level_diameter(params, l, params.bbox_side);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        if (ps.dist(i, j) > dl) ASSERT_NE(part.cell_id(ps[i], l), part.cell_id(ps[j], l));
      }
    }
  }
}

class PartitionMetric : public ::testing::TestWithParam<Metric> {};

TEST_P(PartitionMetric, DiameterAndDegree) {
  const Metric m = GetParam();
  const std::size_t d = 3;
  const auto ps = testutil::uniform_points(1000, d, m, 5);
  const auto params = make_partition_params(ps);
  const double max_children = std::pow(params.alpha_grid + 1, d);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto part = sample_partition(ps, params, Seed{100 + s});
    for (int l = 0; l <= part.levels(); ++l) {
      std::map<CellId, std::vector<Index>> cells;
      std::map<CellId, std::set<CellId>> children;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto id = part.cell_id(ps[i], l);
        cells[id].push_back(static_cast<Index>(i));
        if (l > 0) children[id].insert(part.cell_id(ps[i], l - 1));
      }
      const double dl = level_diameter(params, l, params.bbox_side);
      for (const auto& [id, pts] : cells) ASSERT_LE(oracle::brute_diameter(pts, ps), dl);
      for (const auto& [id, ch] : children) ASSERT_LE(static_cast<double>(ch.size()), max_children);
    }
  }
}

TEST_P(PartitionMetric, CutProbability) {
  const Metric m = GetParam();
  const auto ps = testutil::uniform_points(200, 2, m, 6);
  const auto params = make_partition_params(ps);
  // Pairs at distance 0.01 placed in the unit square, sharing the point set's box.
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.1, 0.9), ang(0, 2 * M_PI);
  const int trials = 1000;
  for (int pair = 0; pair < 10; ++pair) {
    const double th = ang(gen);
    const std::vector<double> x{u(gen), u(gen)};
    const std::vector<double> y{x[0] + 0.01 * std::cos(th), x[1] + 0.01 * std::sin(th)};
    const double rho = distance(x, y, m);
    std::vector<int> cuts(params.levels + 1, 0);
    for (int t = 0; t < trials; ++t) {
      const auto part = sample_partition(ps, params, Seed{static_cast<std::uint64_t>(t)});
      for (int l = 0; l <= params.levels; ++l) cuts[l] += part.cell_id(x, l) != part.cell_id(y, l);
    }
    for (int l = 0; l <= params.levels; ++l) {
      const double p = std::min(1.0, params.b_cut * rho / level_diameter(params, l, params.bbox_side));
      const double sigma = std::sqrt(p * (1 - p) / trials);
      EXPECT_LE(cuts[l] / double(trials), p + 3 * sigma) << "level " << l;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(All, PartitionMetric, ::testing::Values(Metric::L1, Metric::L2, Metric::Linf));

TEST(Partition, DegenerateInput) {
  auto ps = PointSet::from_rows({{1, 1}, {1, 1}, {1, 1}}, Metric::L2);
  const auto params = make_partition_params(ps);
  EXPECT_EQ(params.bbox_side, 0.0);
  const auto part = sample_partition(ps, params, Seed{1});
  for (int l = 0; l <= part.levels(); ++l) EXPECT_EQ(part.cell_id(ps[0], l), part.cell_id(ps[2], l));
}

TEST(Partition, ShiftDeterministic) {
  const auto ps = testutil::uniform_points(20, 2, Metric::L2, 1);
  const auto params = make_partition_params(ps);
  const auto a = sample_partition(ps, params, Seed{77});
  const auto b = sample_partition(ps, params, Seed{77});
  EXPECT_EQ(a.shift(), b.shift());
  for (double r : a.shift()) {
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, params.bbox_side);
  }
}
