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

// Exact "nearest point in another component" search over a subset of a
// PointSet. A kd-tree whose nodes remember whether all their points share
// one component label lets queries skip the querying component wholesale.
// Used by the unit step once a cell is too large for brute force.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "linkage/core.hpp"
#include "linkage/graph.hpp"

namespace linkage::detail {

/// Lower bound on the metric distance from q to the box [lo, hi].
inline double box_distance(std::span<const double> q, const double* lo, const double* hi,
                           Metric metric) {
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double g = std::max({0.0, lo[i] - q[i], q[i] - hi[i]});
    switch (metric) {
      case Metric::L1: acc += g; break;
      case Metric::L2: acc += g * g; break;
      default: acc = std::max(acc, g); break;
    }
  }
  return metric == Metric::L2 ? std::sqrt(acc) : acc;
}

struct Candidate {
  double dist = std::numeric_limits<double>::infinity();
  Index a = 0;  // smaller point id
  Index b = 0;  // larger point id
  bool found = false;

  bool better_than(const Candidate& o) const {
    if (!o.found) return found;
    if (!found) return false;
    return std::tie(dist, a, b) < std::tie(o.dist, o.a, o.b);
  }
  WeightedEdge edge() const { return {a, b, dist}; }
};

class ForeignNeighborIndex {
 public:
  static constexpr Index kMixed = std::numeric_limits<Index>::max();
  static constexpr std::size_t kLeafSize = 8;

  /// `ids` are point ids into `ps`; queries refer to positions within `ids`.
  ForeignNeighborIndex(const PointSet& ps, std::vector<Index> ids)
      : ps_(ps), dim_(ps.dim()), ids_(std::move(ids)) {
    perm_.resize(ids_.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) perm_[i] = static_cast<Index>(i);
    if (!ids_.empty()) build(0, ids_.size());
    node_label_.assign(nodes_.size(), kMixed);
  }

  std::size_t size() const noexcept { return ids_.size(); }

  /// labels[i] is the component of position i. Must be called before queries
  /// and again whenever labels change.
  void set_labels(const std::vector<Index>& labels) {
    labels_ = &labels;
    if (!nodes_.empty()) refresh(0);
  }

  /// Closest (dist, id, id) to position `pos` whose label differs, among
  /// candidates with dist <= radius. Ties resolve on (min id, max id).
  Candidate query(std::size_t pos, double radius, Candidate best = {}) const {
    if (nodes_.empty()) return best;
    if (best.found && best.dist < radius) radius = best.dist;
    Search s{ps_[ids_[pos]], ids_[pos], (*labels_)[pos], radius, best};
    descend(0, s);
    return s.best;
  }

 private:
  struct Node {
    std::size_t begin, end;
    std::size_t left = 0, right = 0;  // 0 = leaf (root is never a child)
    std::vector<double> lo, hi;
  };

  struct Search {
    std::span<const double> q;
    Index qid;
    Index qlabel;
    double radius;
    Candidate best;
  };

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(Node{begin, end, 0, 0, std::vector<double>(dim_), std::vector<double>(dim_)});
    {
      auto& nd = nodes_[id];
      for (std::size_t k = 0; k < dim_; ++k) {
        nd.lo[k] = std::numeric_limits<double>::infinity();
        nd.hi[k] = -std::numeric_limits<double>::infinity();
      }
      for (std::size_t i = begin; i < end; ++i) {
        const auto p = ps_[ids_[perm_[i]]];
        for (std::size_t k = 0; k < dim_; ++k) {
          nd.lo[k] = std::min(nd.lo[k], p[k]);
          nd.hi[k] = std::max(nd.hi[k], p[k]);
        }
      }
    }
    if (end - begin <= kLeafSize) return id;
    std::size_t axis = 0;
    double spread = -1.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double s = nodes_[id].hi[k] - nodes_[id].lo[k];
      if (s > spread) {
        spread = s;
        axis = k;
      }
    }
    if (spread <= 0.0) return id;  // all points coincide
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(begin),
                     perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                     perm_.begin() + static_cast<std::ptrdiff_t>(end), [&](Index a, Index b) {
                       return ps_[ids_[a]][axis] < ps_[ids_[b]][axis];
                     });
    const std::size_t l = build(begin, mid);
    const std::size_t r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  Index refresh(std::size_t node) {
    const auto& nd = nodes_[node];
    Index lab;
    if (nd.left == 0) {
      lab = (*labels_)[perm_[nd.begin]];
      for (std::size_t i = nd.begin + 1; i < nd.end && lab != kMixed; ++i) {
        if ((*labels_)[perm_[i]] != lab) lab = kMixed;
      }
    } else {
      const Index a = refresh(nd.left);
      const Index b = refresh(nd.right);
      lab = (a == b) ? a : kMixed;
    }
    node_label_[node] = lab;
    return lab;
  }

  void descend(std::size_t node, Search& s) const {
    const auto& nd = nodes_[node];
    if (node_label_[node] == s.qlabel) return;
    const double lb = box_distance(s.q, nd.lo.data(), nd.hi.data(), ps_.metric());
    if (lb > s.radius) return;
    if (nd.left == 0) {
      for (std::size_t i = nd.begin; i < nd.end; ++i) {
        const Index pos = perm_[i];
        if ((*labels_)[pos] == s.qlabel) continue;
        const Index other = ids_[pos];
        const double d = distance(s.q, ps_[other], ps_.metric());
        if (d > s.radius) continue;
        Candidate c{d, std::min(s.qid, other), std::max(s.qid, other), true};
        if (c.better_than(s.best)) {
          s.best = c;
          s.radius = d;
        }
      }
      return;
    }
    const double dl = box_distance(s.q, nodes_[nd.left].lo.data(), nodes_[nd.left].hi.data(), ps_.metric());
    const double dr = box_distance(s.q, nodes_[nd.right].lo.data(), nodes_[nd.right].hi.data(), ps_.metric());
    if (dl <= dr) {
      descend(nd.left, s);
      descend(nd.right, s);
    } else {
      descend(nd.right, s);
      descend(nd.left, s);
    }
  }

  const PointSet& ps_;
  std::size_t dim_;
  std::vector<Index> ids_;
  std::vector<Index> perm_;
  std::vector<Node> nodes_;
  std::vector<Index> node_label_;
  const std::vector<Index>* labels_ = nullptr;
};

}  // namespace linkage::detail
