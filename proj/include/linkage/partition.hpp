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

// Randomly shifted hierarchical grid. Level 0 is the finest grid, level L is
// the single root cell. A cell at level l < L is a half-open box of side
// bbox_side / alpha^(L-l); membership depends only on (point, level, shift),
// so the partition is indexable.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "linkage/core.hpp"

namespace linkage {

struct PartitionParams {
  double alpha_grid = 2.0;  // per-level refinement; integer valued so cells nest exactly
  int levels = 1;           // L
  double bbox_side = 0.0;   // Delta, the l_inf extent of the translated input
  double gamma = 1.0;       // diameter approximation of the grid under the metric
  double b_cut = 1.0;       // cut-probability coefficient
};

/// gamma and b for the grid under each supported metric:
/// l2 -> (sqrt d, d), l1 -> (d, d^2), linf -> (1, d).
inline std::pair<double, double> grid_constants(Metric metric, std::size_t dim) {
  const double d = static_cast<double>(dim);
  switch (metric) {
    case Metric::L2: return {std::sqrt(d), d};
    case Metric::L1: return {d, d * d};
    case Metric::Linf: return {1.0, d};
    case Metric::L0: break;
  }
  throw UnsupportedMetric("grid partitions support l1, l2 and linf only");
}

/// Smallest L >= 1 with alpha^L >= n.
inline int default_levels(std::size_t n, double alpha_grid) {
  int levels = 1;
  double cells = alpha_grid;
  while (cells < static_cast<double>(n) && levels < 40) {
    cells *= alpha_grid;
    ++levels;
  }
  return levels;
}

/// Bounding-box extents of a point set: per-dimension minimum and the l_inf
/// diameter max_i (max x_i - min x_i).
struct BoundingBox {
  std::vector<double> lo;
  double side = 0.0;
};

inline BoundingBox bounding_box(const PointSet& ps) {
  BoundingBox box;
  box.lo.assign(ps.dim(), 0.0);
  if (ps.empty()) return box;
  std::vector<double> hi(ps.dim());
  for (std::size_t j = 0; j < ps.dim(); ++j) box.lo[j] = hi[j] = ps[0][j];
  for (std::size_t i = 1; i < ps.size(); ++i) {
    const auto p = ps[i];
    for (std::size_t j = 0; j < ps.dim(); ++j) {
      box.lo[j] = std::min(box.lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }
  for (std::size_t j = 0; j < ps.dim(); ++j) box.side = std::max(box.side, hi[j] - box.lo[j]);
  return box;
}

/// Parameters for `ps` under its own metric. `levels == 0` picks
/// default_levels(n, alpha_grid).
inline PartitionParams make_partition_params(const PointSet& ps, double alpha_grid = 2.0,
                                             int levels = 0) {
  if (alpha_grid < 2.0 || alpha_grid != std::floor(alpha_grid)) {
    throw InputError("alpha_grid must be an integer >= 2");
  }
  const auto [gamma, b] = grid_constants(ps.metric(), ps.dim());
  PartitionParams p;
  p.alpha_grid = alpha_grid;
  p.levels = levels > 0 ? levels : default_levels(ps.size(), alpha_grid);
  p.bbox_side = bounding_box(ps).side;
  p.gamma = gamma;
  p.b_cut = b;
  return p;
}

/// Delta_l = gamma * alpha^-(L-l) * diam_S.
inline double level_diameter(const PartitionParams& params, int level, double diam_S) {
  if (level < 0 || level > params.levels) throw InputError("level_diameter: level out of range");
  return params.gamma * std::pow(1.0 / params.alpha_grid, params.levels - level) * diam_S;
}

struct CellId {
  int level = 0;
  std::vector<std::int64_t> coords;

  friend bool operator==(const CellId&, const CellId&) = default;
  friend auto operator<=>(const CellId&, const CellId&) = default;
};

struct CellIdHash {
  std::size_t operator()(const CellId& c) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(c.level);
    for (auto x : c.coords) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

class HierarchicalPartition {
 public:
  /// Explicit construction; `origin` is the translation that moves the input
  /// box to [0, bbox_side]^d and `shift` is r. Used directly by tests.
  HierarchicalPartition(PartitionParams params, std::vector<double> origin,
                        std::vector<double> shift, Seed seed = {})
      : params_(params), origin_(std::move(origin)), shift_(std::move(shift)), seed_(seed) {
    if (params_.levels < 1) throw InputError("partition needs at least one level");
    if (origin_.size() != shift_.size()) throw InputError("partition: origin/shift dimension mismatch");
    if (params_.alpha_grid < 2.0 || params_.alpha_grid != std::floor(params_.alpha_grid)) {
      throw InputError("alpha_grid must be an integer >= 2");
    }
    finest_scale_ = std::pow(params_.alpha_grid, params_.levels);
    const auto a = static_cast<std::int64_t>(params_.alpha_grid);
    divisors_.assign(static_cast<std::size_t>(params_.levels) + 1, 1);
    for (int l = 1; l <= params_.levels; ++l) divisors_[l] = divisors_[l - 1] * a;
  }

  const PartitionParams& params() const noexcept { return params_; }
  const std::vector<double>& shift() const noexcept { return shift_; }
  const std::vector<double>& origin() const noexcept { return origin_; }
  Seed seed() const noexcept { return seed_; }
  int levels() const noexcept { return params_.levels; }
  std::size_t dim() const noexcept { return shift_.size(); }
  bool degenerate() const noexcept { return params_.bbox_side <= 0.0; }

  /// Grid coordinates at level 0; coarser levels are exact floor divisions
  /// of these, which makes nesting hold bit-for-bit.
  std::vector<std::int64_t> finest_coords(std::span<const double> x) const {
    if (x.size() != dim()) throw InputError("cell_id: dimension mismatch");
    std::vector<std::int64_t> c(dim(), 0);
    if (degenerate()) return c;
    for (std::size_t i = 0; i < dim(); ++i) {
      const double t = (x[i] - origin_[i] - shift_[i]) * finest_scale_ / params_.bbox_side;
      c[i] = static_cast<std::int64_t>(std::floor(t));
    }
    return c;
  }

  CellId coarsen(const std::vector<std::int64_t>& finest, int level) const {
    if (level < 0 || level > params_.levels) throw InputError("cell_id: level out of range");
    CellId id{level, std::vector<std::int64_t>(finest.size(), 0)};
    if (level == params_.levels || degenerate()) return id;
    const std::int64_t m = divisors_[level];
    for (std::size_t i = 0; i < finest.size(); ++i) {
      const std::int64_t a = finest[i];
      std::int64_t q = a / m;
      if ((a % m != 0) && (a < 0)) --q;
      id.coords[i] = q;
    }
    return id;
  }

  CellId cell_id(std::span<const double> x, int level) const {
    if (level < 0 || level > params_.levels) throw InputError("cell_id: level out of range");
    return coarsen(finest_coords(x), level);
  }

 private:
  PartitionParams params_;
  std::vector<double> origin_;
  std::vector<double> shift_;
  Seed seed_;
  double finest_scale_ = 1.0;
  std::vector<std::int64_t> divisors_;
};

/// Draws r uniformly from [0, Delta]^d using the (seed, "partition-shift")
/// stream. The input box is translated so its min corner sits at the origin.
inline HierarchicalPartition sample_partition(const PointSet& ps, const PartitionParams& params,
                                              Seed seed) {
  if (ps.empty()) throw InputError("sample_partition: empty point set");
  auto box = bounding_box(ps);
  RngStream rng(seed, "partition-shift");
  std::vector<double> shift(ps.dim());
  for (auto& r : shift) r = rng.uniform(0.0, params.bbox_side);
  return HierarchicalPartition(params, std::move(box.lo), std::move(shift), seed);
}

inline CellId cell_id(const HierarchicalPartition& part, std::span<const double> x, int level) {
  return part.cell_id(x, level);
}

}  // namespace linkage
