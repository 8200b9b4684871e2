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

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linkage/core.hpp"
#include "linkage/errors.hpp"
#include "linkage/hamming.hpp"
#include "linkage/io.hpp"
#include "linkage/mpc.hpp"
#include "linkage/oracle.hpp"
#include "linkage/slc.hpp"

namespace linkage {

struct RunConfig {
  std::string input_path;
  Metric metric = Metric::L2;
  double eta = 0.5;
  std::vector<std::size_t> k_list{2};
  int repetitions = 0;               // 0 = ceil(log2 n)
  double c1 = 1.0;
  double c2 = 1.0;
  std::size_t space_s = 0;           // 0 = sized to fit the input
  std::uint64_t seed = 42;
  bool normalize = false;
  std::string output_path;
  std::vector<double> eta_sweep;     // extra etas for the approximation-vs-eta curve
  int timing_runs = 3;
  std::size_t dense_cap = oracle::kDenseCap;

  void validate() const {
    if (!(eta > 0.0)) throw InputError("config: eta must be positive");
    if (k_list.empty()) throw InputError("config: k list is empty");
    for (auto k : k_list) {
      if (k == 0) throw InputError("config: k must be at least 1");
    }
    for (auto e : eta_sweep) {
      if (!(e > 0.0)) throw InputError("config: eta sweep values must be positive");
    }
    if (timing_runs < 1) throw InputError("config: timing_runs must be at least 1");
    if (repetitions < 0) throw InputError("config: repetitions must be non-negative");
    if (!(c1 > 0.0 && c2 > 0.0)) throw InputError("config: c1 and c2 must be positive");
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["input"] = input_path;
    j["metric"] = to_string(metric);
    j["eta"] = eta;
    j["k"] = k_list;
    j["repetitions"] = repetitions;
    j["c1"] = c1;
    j["c2"] = c2;
    j["space_s"] = space_s;
    j["seed"] = seed;
    j["normalize"] = normalize;
    j["out"] = output_path;
    j["eta_sweep"] = eta_sweep;
    j["timing_runs"] = timing_runs;
    j["dense_cap"] = dense_cap;
    return j;
  }

  /// Missing keys keep their defaults; unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("config: expected a JSON object");
    RunConfig c;
    try {
      for (const auto& [key, v] : j.items()) {
        if (key == "input") c.input_path = v.get<std::string>();
        else if (key == "metric") c.metric = parse_metric(v.get<std::string>());
        else if (key == "eta") c.eta = v.get<double>();
        else if (key == "k") c.k_list = v.get<std::vector<std::size_t>>();
        else if (key == "repetitions") c.repetitions = v.get<int>();
        else if (key == "c1") c.c1 = v.get<double>();
        else if (key == "c2") c.c2 = v.get<double>();
        else if (key == "space_s") c.space_s = v.get<std::size_t>();
        else if (key == "seed") c.seed = v.get<std::uint64_t>();
        else if (key == "normalize") c.normalize = v.get<bool>();
        else if (key == "out") c.output_path = v.get<std::string>();
        else if (key == "eta_sweep") c.eta_sweep = v.get<std::vector<double>>();
        else if (key == "timing_runs") c.timing_runs = v.get<int>();
        else if (key == "dense_cap") c.dense_cap = v.get<std::size_t>();
        else throw InputError("config: unknown key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config: cannot open " + path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(std::string("config: ") + e.what());
    }
    return from_json(j);
  }
};

struct CurveRow {
  std::size_t k = 0;
  std::optional<double> approx;
  std::optional<double> oracle;

  std::optional<double> ratio() const {
    if (!approx || !oracle || *oracle == 0.0) return std::nullopt;
    return *approx / *oracle;
  }
};

struct EtaRow {
  double eta = 0.0;
  double eps = 0.0;
  std::optional<double> max_ratio;
  std::optional<bool> within_bound;
};

struct Report {
  nlohmann::ordered_json json;
  std::vector<CurveRow> k_curve;
  std::vector<EtaRow> eta_curve;
  mpc::MpcTrace trace;
};

namespace detail {

template <class F>
double median_ms(int runs, F&& fn) {
  std::vector<double> ms;
  for (int r = 0; r < runs; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  return ms[ms.size() / 2];
}

inline nlohmann::ordered_json opt_num(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

inline nlohmann::ordered_json trace_summary(const mpc::MpcTrace& t) {
  nlohmann::ordered_json j;
  std::size_t machines = 0, words = 0, msg = 0;
  nlohmann::ordered_json by = nlohmann::ordered_json::object();
  for (const auto& r : t.per_round) {
    machines = std::max(machines, r.machines_used);
    words = std::max(words, r.max_words);
    msg += r.msg_words;
    const std::string key = r.primitive.empty() ? "unnamed" : r.primitive;
    by[key] = (by.contains(key) ? by[key].get<std::size_t>() : 0) + 1;
  }
  j["rounds"] = t.rounds();
  j["max_machines"] = machines;
  j["max_words"] = words;
  j["total_msg_words"] = msg;
  j["rounds_by_primitive"] = by;
  return j;
}

inline std::string strip_json_ext(const std::string& path) {
  std::filesystem::path p(path);
  if (p.extension() == ".json") p.replace_extension();
  return p.string();
}

}  // namespace detail

/// Loads the configured dataset, applying normalization when requested.
inline PointSet load_dataset(const RunConfig& cfg) {
  PointSet ps = io::load_csv(cfg.input_path, cfg.metric);
  if (cfg.normalize) {
    if (cfg.metric == Metric::L0) throw InputError("config: normalize is meaningless for l0");
    ps = io::normalize_zscore(ps);
  }
  return ps;
}

inline Report run_experiment(const RunConfig& cfg, const PointSet& ps) {
  cfg.validate();
  const std::size_t n = ps.size();
  for (auto k : cfg.k_list) {
    if (k > n) throw InputError("config: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  }

  mpc::MpcConfig mcfg;
  mcfg.space_s = cfg.space_s == 0 ? required_space(n, ps.dim()) : cfg.space_s;

  SlcParams params;
  params.eta = cfg.eta;
  params.repetitions = cfg.repetitions;
  params.c1 = cfg.c1;
  params.c2 = cfg.c2;
  params.mpc = mcfg;
  params.auto_space = false;
  params.seed = Seed{cfg.seed};

  Report rep;
  SpanningTree approx;
  nlohmann::ordered_json pipeline;
  auto run_approx = [&] {
    if (cfg.metric == Metric::L0) {
      auto h = hamming::hamming_mst(ps, mcfg);
      approx = std::move(h.tree);
      rep.trace = std::move(h.trace);
      pipeline = nlohmann::ordered_json::object();
      pipeline["algorithm"] = "hamming-exact";
    } else {
      auto r = approximate_mst(ps, params);
      approx = std::move(r.tree);
      rep.trace = std::move(r.trace);
      pipeline = nlohmann::ordered_json::object();
      pipeline["algorithm"] = "partition";
      pipeline["eps"] = r.eps;
      pipeline["levels"] = r.levels;
      pipeline["repetitions"] = r.repetitions;
      pipeline["sparsifier_edges"] = r.sparsifier_edges;
    }
  };
  const double approx_ms = detail::median_ms(cfg.timing_runs, run_approx);
  pipeline["space_s"] = mcfg.space_s;
  pipeline["tree_weight"] = approx.total_weight();

  std::optional<SpanningTree> exact;
  std::optional<double> oracle_ms;
  if (n <= cfg.dense_cap) {
    oracle_ms = detail::median_ms(cfg.timing_runs, [&] { exact = oracle::exact_mst(ps, cfg.dense_cap); });
  }

  std::vector<std::size_t> ks = cfg.k_list;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  nlohmann::ordered_json objectives = nlohmann::ordered_json::array();
  for (auto k : ks) {
    CurveRow row;
    row.k = k;
    row.approx = k_slc_from_mst(approx, k).objective;
    if (exact) row.oracle = k_slc_from_mst(*exact, k).objective;
    nlohmann::ordered_json o;
    o["k"] = k;
    if (k == 1) {
      o["approx_objective"] = "undefined";
      o["oracle_objective"] = "undefined";
      o["ratio"] = "undefined";
    } else {
      o["approx_objective"] = detail::opt_num(row.approx);
      o["oracle_objective"] = detail::opt_num(row.oracle);
      o["ratio"] = detail::opt_num(row.ratio());
    }
    objectives.push_back(o);
    rep.k_curve.push_back(row);
  }

  nlohmann::ordered_json edges = nullptr;
  if (exact) {
    const auto g = verify_per_edge_guarantee(approx, *exact, cfg.eta);
    edges = nlohmann::ordered_json::object();
    edges["max_ratio"] = g.max_ratio;
    edges["bound"] = 1.0 + cfg.eta;
    edges["within_bound"] = g.ok();
    edges["lower_violations"] = g.lower_violations.size();
    edges["upper_violations"] = g.upper_violations.size();
  }

  nlohmann::ordered_json sweep = nlohmann::ordered_json::array();
  for (double eta : cfg.eta_sweep) {
    if (cfg.metric == Metric::L0) throw InputError("config: eta sweep does not apply to l0");
    SlcParams p = params;
    p.eta = eta;
    const auto r = approximate_mst(ps, p);
    EtaRow row;
    row.eta = eta;
    row.eps = r.eps;
    if (exact) {
      const auto g = verify_per_edge_guarantee(r.tree, *exact, eta);
      row.max_ratio = g.max_ratio;
      row.within_bound = g.ok();
    }
    nlohmann::ordered_json o;
    o["eta"] = eta;
    o["eps"] = row.eps;
    o["max_ratio"] = detail::opt_num(row.max_ratio);
    o["within_bound"] = row.within_bound ? nlohmann::ordered_json(*row.within_bound) : nullptr;
    sweep.push_back(o);
    rep.eta_curve.push_back(row);
  }

  auto& j = rep.json;
  j["config"] = cfg.to_json();
  j["dataset"] = {{"n", n}, {"dim", ps.dim()}};
  j["pipeline"] = pipeline;
  j["objectives"] = objectives;
  j["edge_ratios"] = edges;
  j["eta_sweep"] = sweep;
  j["rounds"] = rep.trace.rounds();
  j["trace"] = detail::trace_summary(rep.trace);
  nlohmann::ordered_json timings;
  timings["runs"] = cfg.timing_runs;
  timings["approx_ms_median"] = approx_ms;
  timings["oracle_ms_median"] = detail::opt_num(oracle_ms);
  j["timings"] = timings;
  return rep;
}

inline Report run_experiment(const RunConfig& cfg) { return run_experiment(cfg, load_dataset(cfg)); }

inline void write_k_curve(std::ostream& out, const std::vector<CurveRow>& rows) {
  auto cell = [](const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); };
  out << "k,approx_objective,oracle_objective,ratio\n";
  for (const auto& r : rows) {
    out << r.k << ',';
    if (r.k == 1) {
      out << "undefined,undefined,undefined\n";
      continue;
    }
    out << cell(r.approx) << ',' << cell(r.oracle) << ',' << cell(r.ratio()) << '\n';
  }
}

inline void write_eta_curve(std::ostream& out, const std::vector<EtaRow>& rows) {
  out << "eta,eps,max_ratio,within_bound\n";
  for (const auto& r : rows) {
    out << io::format_double(r.eta) << ',' << io::format_double(r.eps) << ','
        << (r.max_ratio ? io::format_double(*r.max_ratio) : std::string()) << ','
        << (r.within_bound ? (*r.within_bound ? "true" : "false") : "") << '\n';
  }
}

/// Writes `<out>.json` plus `<out>.k.csv` and, with a sweep, `<out>.eta.csv`.
inline std::vector<std::string> write_report(const Report& rep, const std::string& output_path) {
  std::vector<std::string> written;
  auto open = [&](const std::string& path) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write " + path);
    written.push_back(path);
    return f;
  };
  const std::string stem = detail::strip_json_ext(output_path);
  {
    auto f = open(output_path);
    f << rep.json.dump(2) << '\n';
  }
  {
    auto f = open(stem + ".k.csv");
    write_k_curve(f, rep.k_curve);
  }
  if (!rep.eta_curve.empty()) {
    auto f = open(stem + ".eta.csv");
    write_eta_curve(f, rep.eta_curve);
  }
  return written;
}

}  // namespace linkage
