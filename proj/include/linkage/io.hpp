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

// Text formats: dense CSV (one point per row) and the sparse line format
// `dim;idx:val,idx:val,...`. Doubles are written in shortest round-trip form.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "linkage/core.hpp"

namespace linkage::io {

namespace detail {

inline double parse_double(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw ParseError("non-numeric field '" + std::string(field) + "'", line);
  }
  return v;
}

inline std::size_t parse_index(std::string_view field, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("bad index '" + std::string(field) + "'", line);
  }
  return v;
}

inline bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace detail

inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Comma-separated numeric rows of uniform width; row order gives the ids.
/// Blank lines are skipped.
inline PointSet read_csv(std::istream& in, Metric metric) {
  PointSet ps;
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank(line)) continue;
    row.clear();
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(detail::parse_double(rest.substr(0, comma), lineno));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (ps.dim() == 0) {
      ps = PointSet(row.size(), metric);
    } else if (row.size() != ps.dim()) {
      throw ParseError("expected " + std::to_string(ps.dim()) + " fields, found " +
                           std::to_string(row.size()),
                       lineno);
    }
    ps.push_back(row);
  }
  if (ps.empty()) throw InputError("csv input contains no points");
  return ps;
}

inline PointSet load_csv(const std::string& path, Metric metric = Metric::L2) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_csv(in, metric);
}

inline void write_csv(std::ostream& out, const PointSet& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto p = ps[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j) out << ',';
      out << format_double(p[j]);
    }
    out << '\n';
  }
}

inline void write_sparse(std::ostream& out, const std::vector<SparsePoint>& vs) {
  for (const auto& v : vs) {
    out << v.dim << ';';
    for (std::size_t i = 0; i < v.entries.size(); ++i) {
      if (i) out << ',';
      out << v.entries[i].first << ':' << format_double(v.entries[i].second);
    }
    out << '\n';
  }
}

inline std::vector<SparsePoint> read_sparse(std::istream& in) {
  std::vector<SparsePoint> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank(line)) continue;
    std::string_view rest(line);
    while (!rest.empty() && rest.back() == '\r') rest.remove_suffix(1);
    const auto semi = rest.find(';');
    if (semi == std::string_view::npos) throw ParseError("missing ';' after dimension", lineno);
    SparsePoint p;
    p.dim = detail::parse_index(rest.substr(0, semi), lineno);
    rest.remove_prefix(semi + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto colon = item.find(':');
      if (colon == std::string_view::npos) throw ParseError("entry without ':'", lineno);
      const auto idx = detail::parse_index(item.substr(0, colon), lineno);
      const double val = detail::parse_double(item.substr(colon + 1), lineno);
      if (idx >= p.dim) throw ParseError("index out of range", lineno);
      if (!p.entries.empty() && idx <= p.entries.back().first) {
        throw ParseError("indices must be strictly increasing", lineno);
      }
      if (val == 0.0) throw ParseError("explicit zero entry", lineno);
      p.entries.emplace_back(idx, val);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// Per-dimension z-score with population variance. Zero-variance dimensions
/// are only centred.
inline PointSet normalize_zscore(const PointSet& ps) {
  const std::size_t n = ps.size(), d = ps.dim();
  if (n < 2) throw InputError("normalize_zscore: need at least 2 points");
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  std::vector<bool> constant(d, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      mean[j] += ps[i][j];
      if (ps[i][j] != ps[0][j]) constant[j] = false;
    }
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double t = ps[i][j] - mean[j];
      sd[j] += t * t;
    }
  }
  for (auto& s : sd) s = std::sqrt(s / static_cast<double>(n));
  PointSet out = ps;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = out.mutable_point(i);
    for (std::size_t j = 0; j < d; ++j) {
      if (constant[j]) {
        p[j] = 0.0;
        continue;
      }
      p[j] -= mean[j];
      if (sd[j] > 0.0) p[j] /= sd[j];
    }
  }
  return out;
}

}  // namespace linkage::io
