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

// Shared domain types: metrics, dense and sparse point storage, seeded
// random streams. Everything here is pure and safe to share across threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linkage/errors.hpp"

namespace linkage {

using Index = std::uint32_t;

enum class Metric { L0, L1, L2, Linf };

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::L0: return "l0";
    case Metric::L1: return "l1";
    case Metric::L2: return "l2";
    case Metric::Linf: return "linf";
  }
  return "?";
}

inline Metric parse_metric(std::string_view name) {
  if (name == "l0" || name == "hamming") return Metric::L0;
  if (name == "l1") return Metric::L1;
  if (name == "l2") return Metric::L2;
  if (name == "linf" || name == "inf") return Metric::Linf;
  throw InputError("unknown metric '" + std::string(name) + "'");
}

/// Exact l_p distance between two equal-length coordinate vectors.
/// L0 counts coordinates that differ under exact equality.
inline double distance(std::span<const double> u, std::span<const double> v,
                       Metric metric) {
  if (u.size() != v.size()) {
    throw InputError("distance: dimension mismatch (" + std::to_string(u.size()) +
                     " vs " + std::to_string(v.size()) + ")");
  }
  double acc = 0.0;
  switch (metric) {
    case Metric::L0:
      for (std::size_t i = 0; i < u.size(); ++i) acc += (u[i] != v[i]) ? 1.0 : 0.0;
      return acc;
    case Metric::L1:
      for (std::size_t i = 0; i < u.size(); ++i) acc += std::abs(u[i] - v[i]);
      return acc;
    case Metric::L2:
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double t = u[i] - v[i];
        acc += t * t;
      }
      return std::sqrt(acc);
    case Metric::Linf:
      for (std::size_t i = 0; i < u.size(); ++i) acc = std::max(acc, std::abs(u[i] - v[i]));
      return acc;
  }
  return acc;
}

/// n points in R^d stored row-major, tagged with the metric they are
/// clustered under. Ids are the row indices 0..n-1.
class PointSet {
 public:
  PointSet() = default;

  PointSet(std::size_t dim, Metric metric) : dim_(dim), metric_(metric) {
    if (dim == 0) throw InputError("PointSet: dimension must be >= 1");
  }

  PointSet(std::size_t dim, Metric metric, std::vector<double> coords)
      : PointSet(dim, metric) {
    if (coords.size() % dim != 0) {
      throw InputError("PointSet: coordinate count is not a multiple of the dimension");
    }
    for (double c : coords) {
      if (!std::isfinite(c)) throw InputError("PointSet: non-finite coordinate");
    }
    coords_ = std::move(coords);
  }

  static PointSet from_rows(const std::vector<std::vector<double>>& rows, Metric metric) {
    if (rows.empty()) throw InputError("PointSet: no points");
    PointSet ps(rows.front().size(), metric);
    for (const auto& r : rows) ps.push_back(r);
    return ps;
  }

  void push_back(std::span<const double> p) {
    if (p.size() != dim_) throw InputError("PointSet: ragged point dimension");
    for (double c : p) {
      if (!std::isfinite(c)) throw InputError("PointSet: non-finite coordinate");
    }
    coords_.insert(coords_.end(), p.begin(), p.end());
  }

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  Metric metric() const noexcept { return metric_; }
  void set_metric(Metric m) noexcept { metric_ = m; }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<double> mutable_point(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

  const std::vector<double>& coords() const noexcept { return coords_; }

  double dist(std::size_t i, std::size_t j) const {
    return distance((*this)[i], (*this)[j], metric_);
  }

 private:
  std::size_t dim_ = 0;
  Metric metric_ = Metric::L2;
  std::vector<double> coords_;
};

/// Sparse vector with strictly increasing coordinate indices and nonzero
/// values; `dim` is the ambient dimension.
struct SparsePoint {
  std::vector<std::pair<std::size_t, double>> entries;
  std::size_t dim = 0;

  /// Builds from unsorted (index, value) pairs, summing duplicates and
  /// dropping zeros.
  static SparsePoint from_entries(std::vector<std::pair<std::size_t, double>> raw,
                                  std::size_t dim) {
    std::sort(raw.begin(), raw.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparsePoint p;
    p.dim = dim;
    for (const auto& [i, v] : raw) {
      if (i >= dim) throw InputError("SparsePoint: index out of range");
      if (!p.entries.empty() && p.entries.back().first == i) {
        p.entries.back().second += v;
      } else {
        p.entries.emplace_back(i, v);
      }
    }
    std::erase_if(p.entries, [](const auto& e) { return e.second == 0.0; });
    return p;
  }

  std::vector<double> densify() const {
    std::vector<double> out(dim, 0.0);
    for (const auto& [i, v] : entries) out[i] = v;
    return out;
  }

  friend bool operator==(const SparsePoint&, const SparsePoint&) = default;
};

/// Distance on sparse vectors without densifying; agrees with `distance`
/// on the densified inputs. Implicit zeros take part in every metric.
inline double sparse_distance(const SparsePoint& u, const SparsePoint& v, Metric metric) {
  if (u.dim != v.dim) throw InputError("sparse_distance: dimension mismatch");
  double acc = 0.0;
  auto fold = [&](double diff) {
    switch (metric) {
      case Metric::L0: acc += (diff != 0.0) ? 1.0 : 0.0; break;
      case Metric::L1: acc += std::abs(diff); break;
      case Metric::L2: acc += diff * diff; break;
      case Metric::Linf: acc = std::max(acc, std::abs(diff)); break;
    }
  };
  std::size_t a = 0, b = 0;
  while (a < u.entries.size() || b < v.entries.size()) {
    if (b == v.entries.size() ||
        (a < u.entries.size() && u.entries[a].first < v.entries[b].first)) {
      fold(u.entries[a++].second);
    } else if (a == u.entries.size() || v.entries[b].first < u.entries[a].first) {
      fold(-v.entries[b++].second);
    } else {
      fold(u.entries[a++].second - v.entries[b++].second);
    }
  }
  return metric == Metric::L2 ? std::sqrt(acc) : acc;
}

/// 64-bit seed; identical seeds give bit-identical streams.
struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(const Seed&, const Seed&) = default;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Deterministic xoshiro256** stream keyed by (seed, label). Streams for
/// different labels are seeded independently and never shared; split one per
/// worker before going parallel.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(Seed seed, std::string_view label) {
    std::uint64_t sm = seed.value ^ detail::fnv1a(label);
    for (auto& w : s_) w = detail::splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  /// Standard normal via Box-Muller; platform independent, unlike
  /// std::normal_distribution.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 == 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline RngStream rng_stream(Seed seed, std::string_view label) { return RngStream(seed, label); }

/// Derives a child seed, e.g. one per repetition.
inline Seed derive_seed(Seed seed, std::string_view label) {
  RngStream s(seed, label);
  return Seed{s()};
}

}  // namespace linkage
