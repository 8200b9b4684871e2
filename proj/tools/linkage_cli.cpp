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


#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "linkage/linkage.hpp"

namespace {

using namespace linkage;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;
constexpr int kCapacityError = 3;

struct Sink {
  std::ofstream file;
  std::ostream* out = &std::cout;

  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw InputError("cannot write " + path);
    out = &file;
  }
};

std::vector<std::size_t> parse_k_list(const std::string& s) {
  std::vector<std::size_t> ks;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = std::min(s.find(',', pos), s.size());
    const std::string tok = s.substr(pos, comma - pos);
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || p != tok.data() + tok.size()) {
      throw InputError("--k: bad entry '" + tok + "'");
    }
    ks.push_back(v);
    pos = comma + 1;
  }
  return ks;
}

void warn_eta(double eta) {
  if (eta > 3.0) std::cerr << "warning: eta > 3 lies outside the proven guarantee range\n";
}

struct PipelineOptions {
  std::string input;
  std::string metric = "l2";
  double eta = 0.5;
  std::uint64_t seed = 42;
  int repetitions = 0;
  std::size_t space = 0;
  double c1 = 1.0;
  double c2 = 1.0;
  bool normalize = false;

  void add_to(CLI::App* app) {
    app->add_option("--input", input, "CSV point file")->required();
    app->add_option("--metric", metric, "l1 | l2 | linf | l0");
    app->add_option("--eta", eta, "approximation slack");
    app->add_option("--seed", seed, "RNG seed");
    app->add_option("--repetitions", repetitions, "independent partitions (0 = ceil(log2 n))");
    app->add_option("--space", space, "words per simulated machine (0 = fit the input)");
    app->add_option("--c1", c1, "eps-rule constant for the partition term");
    app->add_option("--c2", c2, "eps-rule constant for the unit-step term");
    app->add_flag("--normalize", normalize, "z-score each dimension first");
  }

  PointSet load() const {
    RunConfig c;
    c.input_path = input;
    c.metric = parse_metric(metric);
    c.normalize = normalize;
    return load_dataset(c);
  }

  SlcParams params() const {
    SlcParams p;
    p.eta = eta;
    p.seed = Seed{seed};
    p.repetitions = repetitions;
    p.c1 = c1;
    p.c2 = c2;
    p.mpc.space_s = space == 0 ? 16 : space;
    p.auto_space = space == 0;
    return p;
  }
};

struct Pipeline {
  SpanningTree tree;
  mpc::MpcTrace trace;
};

Pipeline run_pipeline(const PointSet& ps, const SlcParams& p) {
  if (ps.metric() == Metric::L0) {
    mpc::MpcConfig cfg = p.mpc;
    if (p.auto_space) cfg.space_s = required_space(ps.size(), ps.dim());
    auto h = hamming::hamming_mst(ps, cfg);
    return {std::move(h.tree), std::move(h.trace)};
  }
  auto r = approximate_mst(ps, p);
  return {std::move(r.tree), std::move(r.trace)};
}

int cmd_run(const std::string& config_path, PipelineOptions& o, const std::string& k_arg,
            const std::string& out, const std::vector<double>& sweep, int timing_runs,
            const CLI::App& sub) {
  RunConfig cfg;
  if (!config_path.empty()) cfg = RunConfig::load(config_path);
  if (sub.count("--input")) cfg.input_path = o.input;
  if (sub.count("--metric")) cfg.metric = parse_metric(o.metric);
  if (sub.count("--eta")) cfg.eta = o.eta;
  if (sub.count("--seed")) cfg.seed = o.seed;
  if (sub.count("--repetitions")) cfg.repetitions = o.repetitions;
  if (sub.count("--c1")) cfg.c1 = o.c1;
  if (sub.count("--c2")) cfg.c2 = o.c2;
  if (sub.count("--space")) cfg.space_s = o.space;
  if (sub.count("--normalize")) cfg.normalize = true;
  if (sub.count("--k")) cfg.k_list = parse_k_list(k_arg);
  if (sub.count("--out")) cfg.output_path = out;
  if (sub.count("--eta-sweep")) cfg.eta_sweep = sweep;
  if (sub.count("--timing-runs")) cfg.timing_runs = timing_runs;
  if (cfg.input_path.empty()) throw InputError("run: --input or a config with \"input\" is required");
  cfg.validate();
  warn_eta(cfg.eta);

  const auto rep = run_experiment(cfg);
  if (cfg.output_path.empty()) {
    std::cout << rep.json.dump(2) << '\n';
  } else {
    for (const auto& f : write_report(rep, cfg.output_path)) std::cerr << "wrote " << f << '\n';
  }
  const auto& edges = rep.json["edge_ratios"];
  if (!edges.is_null() && !edges["within_bound"].get<bool>()) {
    std::cerr << "warning: per-index edge ratio exceeds 1 + eta\n";
  }
  return kOk;
}

int cmd_verify(const PipelineOptions& o, std::size_t dense_cap) {
  warn_eta(o.eta);
  const PointSet ps = o.load();
  const auto run = run_pipeline(ps, o.params());
  const auto exact = oracle::exact_mst(ps, dense_cap);
  const auto g = verify_per_edge_guarantee(run.tree, exact, o.eta);
  nlohmann::ordered_json j;
  j["n"] = ps.size();
  j["edges"] = g.pairs.size();
  j["max_ratio"] = g.max_ratio;
  j["bound"] = 1.0 + o.eta;
  j["lower_violations"] = g.lower_violations;
  j["upper_violations"] = g.upper_violations;
  j["ok"] = g.ok();
  std::cout << j.dump(2) << '\n';
  return g.ok() ? kOk : kVerifyFailed;
}

int cmd_trace(const PipelineOptions& o, const std::string& out) {
  const PointSet ps = o.load();
  const auto run = run_pipeline(ps, o.params());
  Sink sink(out);
  run.trace.dump_jsonl(*sink.out);
  return kOk;
}

int cmd_gen(const std::string& kind, std::size_t n, const std::string& metric_name,
            const std::string& variant, const std::string& format, std::optional<double> jl_eps,
            std::uint64_t seed, const std::string& out) {
  const Metric metric = parse_metric(metric_name);
  const bool connected = variant == "connected";
  if (!connected && variant != "disconnected") {
    throw InputError("gen-hardness: --variant must be connected or disconnected");
  }

  using namespace hardness;
  Sink sink(out);
  if (kind == "hamming") {
    const auto g = connected ? one_cycle(n) : two_cycles(n);
    io::write_csv(*sink.out, gen_hamming_points(g));
    return kOk;
  }

  std::vector<SparsePoint> vs;
  if (kind == "cycle" || kind == "twocycles") {
    vs = gen_cycle_vectors(kind == "cycle" ? one_cycle(n) : two_cycles(n), metric);
  } else if (kind == "connectivity") {
    vs = gen_edge_vectors(connected ? one_cycle(n) : two_cycles(n));
  } else {
    throw InputError("gen-hardness: unknown kind '" + kind + "'");
  }
  if (metric != Metric::L1 && metric != Metric::L2) {
    throw UnsupportedMetric("gen-hardness: vector instances are defined for l1 and l2");
  }

  if (jl_eps) {
    if (metric != Metric::L2) throw InputError("gen-hardness: --jl-eps requires l2");
    JlParams p;
    p.eps = *jl_eps;
    p.target_dim = jl_target_dim(vs.size(), p.eps);
    p.seed = Seed{seed};
    io::write_csv(*sink.out, jl_project(vs, p));
  } else if (format == "sparse") {
    io::write_sparse(*sink.out, vs);
  } else if (format == "dense") {
    io::write_csv(*sink.out, densify(vs, metric));
  } else {
    throw InputError("gen-hardness: --format must be dense or sparse");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition-based single-linkage clustering"};
  app.require_subcommand(1);

  PipelineOptions run_opts;
  std::string config_path, k_arg = "2", run_out;
  std::vector<double> sweep;
  int timing_runs = 3;
  auto* run = app.add_subcommand("run", "approximate k-SLC experiment with JSON and CSV reports");
  run_opts.add_to(run);
  run->get_option("--input")->required(false);
  run->add_option("--config", config_path, "JSON run config; flags override it");
  run->add_option("--k", k_arg, "comma-separated cluster counts");
  run->add_option("--out", run_out, "report path (curves written beside it)");
  run->add_option("--eta-sweep", sweep, "extra eta values for the eta curve")->delimiter(',');
  run->add_option("--timing-runs", timing_runs, "runs per timing median");

  std::string kind, metric_name = "l2", variant = "connected", format = "sparse", gen_out;
  std::size_t n = 64;
  std::optional<double> jl_eps;
  std::uint64_t gen_seed = 42;
  auto* gen = app.add_subcommand("gen-hardness", "hardness instance generators");
  gen->add_option("--kind", kind, "cycle | twocycles | connectivity | hamming")->required();
  gen->add_option("--n", n, "vertices of the underlying graph");
  gen->add_option("--metric", metric_name, "l1 | l2");
  gen->add_option("--variant", variant, "connected | disconnected (connectivity, hamming)");
  gen->add_option("--format", format, "sparse | dense");
  gen->add_option("--jl-eps", jl_eps, "project with a JL map of this distortion (l2, dense output)");
  gen->add_option("--seed", gen_seed, "JL seed");
  gen->add_option("--out", gen_out, "output path (default stdout)");

  PipelineOptions verify_opts;
  std::size_t dense_cap = oracle::kDenseCap;
  auto* verify = app.add_subcommand("verify", "check per-index edge ratios against the exact MST");
  verify_opts.add_to(verify);
  verify->add_option("--dense-cap", dense_cap, "largest n for the exact oracle");

  PipelineOptions trace_opts;
  std::string trace_out;
  auto* trace = app.add_subcommand("trace-dump", "per-round MPC trace as JSON lines");
  trace_opts.add_to(trace);
  trace->add_option("--out", trace_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*run) return cmd_run(config_path, run_opts, k_arg, run_out, sweep, timing_runs, *run);
    if (*gen) return cmd_gen(kind, n, metric_name, variant, format, jl_eps, gen_seed, gen_out);
    if (*verify) return cmd_verify(verify_opts, dense_cap);
    if (*trace) return cmd_trace(trace_opts, trace_out);
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kCapacityError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
