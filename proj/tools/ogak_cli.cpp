// Copyright 2026 The ogak Authors
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

// Command-line driver. Everything numeric goes through the C interface.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ogak/ogak.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Failure {
  int code;
  std::string message;
};

void check(ogak_status status, const char* what) {
  if (status != OGAK_OK) {
    throw Failure{kExitFailure, std::string(what) + ": " + ogak_status_name(status) + ": " +
                                    ogak_last_error()};
  }
}

// Owning wrappers so early exits release handles.
struct Dataset {
  ogak_dataset* h = nullptr;
  Dataset() = default;
  Dataset(const Dataset&) = delete;
  Dataset& operator=(const Dataset&) = delete;
  ~Dataset() { ogak_dataset_free(h); }
};

struct Model {
  ogak_model* h = nullptr;
  Model() = default;
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
  ~Model() { ogak_model_free(h); }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// key=value lines, '#' comments. Keys take the long flag name without dashes.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kExitUsage, "cannot open config file " + path};
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Failure{kExitUsage, path + ":" + std::to_string(row) + ": expected key=value"};
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

/// Fills options not given on the command line from the config file.
void apply_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  for (const auto& [key, value] : read_config(path)) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw Failure{kExitUsage, "unknown config key '" + key + "' for " + cmd->get_name()};
    }
    if (opt->count() > 0) continue;  // flags win
    opt->add_result(value);
    opt->run_callback();
  }
}

/// "0..16" (half-open) or "3,7,9" or a mix.
std::vector<std::size_t> parse_sensors(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    try {
      const auto dots = part.find("..");
      if (dots == std::string::npos) {
        out.push_back(std::stoull(part));
      } else {
        const std::size_t lo = std::stoull(part.substr(0, dots));
        const std::size_t hi = std::stoull(part.substr(dots + 2));
        if (hi <= lo) throw Failure{kExitUsage, "empty sensor range " + part};
        for (std::size_t s = lo; s < hi; ++s) out.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw Failure{kExitUsage, "bad sensor list entry '" + part + "'"};
    }
  }
  return out;
}

void refuse_existing(const fs::path& p, bool force) {
  std::error_code ec;
  if (!fs::exists(p, ec)) {
    fs::create_directories(p);
    return;
  }
  if (!force) throw Failure{kExitFailure, p.string() + " already exists (use --force to overwrite)"};
  fs::remove_all(p);
  fs::create_directories(p);
}

/// A dataset dir has manifest.txt; a generated root holds train/ and test/.
fs::path resolve_split(const fs::path& dir, const char* split) {
  if (fs::exists(dir / "manifest.txt")) return dir;
  return dir / split;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void manifest(const fs::path& path, const std::string& command, const ogak_train_config* cfg,
              const std::string& dataset, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::vector<const char*> keys;
  std::vector<const char*> values;
  for (const auto& [k, v] : kv) {
    keys.push_back(k.c_str());
    values.push_back(v.c_str());
  }
  check(ogak_write_run_manifest(path.string().c_str(), command.c_str(), cfg,
                                dataset.empty() ? nullptr : dataset.c_str(), keys.data(),
                                values.data(), kv.size()),
        "run manifest");
}

// ---- generate

struct GenerateArgs {
  std::string config;
  std::string problem = "poisson1d";
  std::size_t dim = 1;
  std::string domain;
  std::size_t grid = 501;
  std::string mesh;
  double mesh_volume = 0.0;
  std::size_t output_sensors = 0;
  double wave = 1.0;
  double helmholtz_k = 15.0;
  double gp_scale = 0.1;
  double gp_variance = 1.0;
  double gp_jitter = 1e-10;
  double gp_rank_floor = 0.0;
  std::uint64_t seed = 0;
  std::size_t train = 500;
  std::size_t test = 200;
  bool no_normalize = false;
  std::string out;
  bool force = false;
};

int run_generate(CLI::App* cmd, GenerateArgs& a) {
  apply_config(cmd, a.config);
  if (a.out.empty()) throw Failure{kExitUsage, "generate needs --out"};
  ogak_generate_config c;
  ogak_generate_config_default(&c);
  c.problem = a.problem.c_str();
  c.dim = a.dim;
  c.domain = a.domain.empty() ? nullptr : a.domain.c_str();
  c.grid = a.grid;
  c.mesh_path = a.mesh.empty() ? nullptr : a.mesh.c_str();
  c.mesh_volume = a.mesh_volume;
  c.output_sensors = a.output_sensors;
  c.wave = a.wave;
  c.helmholtz_k = a.helmholtz_k;
  c.gp_scale = a.gp_scale;
  c.gp_variance = a.gp_variance;
  c.gp_jitter = a.gp_jitter;
  c.gp_rank_floor = a.gp_rank_floor;
  c.seed = a.seed;
  c.train = a.train;
  c.test = a.test;
  c.normalize = a.no_normalize ? 0 : 1;
  check(ogak_generate(&c, a.out.c_str(), a.force ? 1 : 0), "generate");
  ogak_train_config tc;
  ogak_train_config_default(&tc);
  tc.seed = a.seed;
  manifest(fs::path(a.out) / "run_manifest.txt", "generate", &tc, (fs::path(a.out) / "train").string(),
           {{"problem", a.problem}, {"gp_scale", std::to_string(a.gp_scale)}});
  std::fprintf(stderr, "wrote %s/train and %s/test\n", a.out.c_str(), a.out.c_str());
  return 0;
}

// ---- train

struct TrainArgs {
  std::string config;
  std::string data;
  std::string train_dir;
  std::string test_dir;
  std::string mode = "oga";
  std::size_t nmax = 256;
  std::size_t dict = 512;
  std::uint64_t seed = 0;
  unsigned power = 1;
  bool normalized = false;
  std::string sensors;
  std::size_t sensor_count = 0;
  std::size_t cadence_dense = 64;
  std::size_t cadence_stride = 8;
  std::size_t cache_limit_mb = 3072;
  std::string out;
  bool force = false;
};

void progress(const ogak_record* r, size_t done, size_t total, void*) {
  if (r->sensor == OGAK_NO_SENSOR) {
    std::fprintf(stderr, "%5zu  %s  %s  %s  %s  %s\n", r->n, num(r->residual_H).c_str(),
                 num(r->eps_u).c_str(), num(r->eps_G).c_str(), num(r->score).c_str(),
                 num(r->gram_cond).c_str());
  } else {
    std::fprintf(stderr, "sensor %zu (%zu/%zu)  n=%zu  residual_H=%s\n", r->sensor, done, total,
                 r->n, num(r->residual_H).c_str());
  }
}

int run_train(CLI::App* cmd, TrainArgs& a, unsigned threads) {
  apply_config(cmd, a.config);
  if (a.out.empty()) throw Failure{kExitUsage, "train needs --out"};
  std::string train_dir = a.train_dir;
  std::string test_dir = a.test_dir;
  if (!a.data.empty()) {
    if (train_dir.empty()) train_dir = resolve_split(a.data, "train").string();
    if (test_dir.empty() && fs::exists(fs::path(a.data) / "test" / "manifest.txt")) {
      test_dir = (fs::path(a.data) / "test").string();
    }
  }
  if (train_dir.empty()) throw Failure{kExitUsage, "train needs --data or --train-dir"};
  ogak_train_config c;
  ogak_train_config_default(&c);
  if (a.mode == "oga") {
    c.mode = OGAK_MODE_OGA;
  } else if (a.mode == "pwoga") {
    c.mode = OGAK_MODE_PWOGA;
  } else {
    throw Failure{kExitUsage, "unknown mode '" + a.mode + "' (known: oga, pwoga)"};
  }
  const std::vector<std::size_t> sensors = parse_sensors(a.sensors);
  if (!sensors.empty() && c.mode != OGAK_MODE_PWOGA) {
    throw Failure{kExitUsage, "--sensors needs --mode pwoga"};
  }
  c.n_max = a.nmax;
  c.dict_samples = a.dict;
  c.seed = a.seed;
  c.power = a.power;
  c.normalized = a.normalized ? 1 : 0;
  c.threads = threads;
  c.cadence_dense = a.cadence_dense;
  c.cadence_stride = a.cadence_stride;
  c.cache_limit = a.cache_limit_mb << 20;
  c.sensors = sensors.empty() ? nullptr : sensors.data();
  c.n_sensors = sensors.size();
  c.sensor_count = a.sensor_count;

  Dataset train;
  Dataset test;
  check(ogak_dataset_load(train_dir.c_str(), &train.h), "load training data");
  if (!test_dir.empty()) check(ogak_dataset_load(test_dir.c_str(), &test.h), "load test data");
  refuse_existing(a.out, a.force);
  if (c.mode == OGAK_MODE_OGA) {
    std::fprintf(stderr, "%5s  %-12s  %-12s  %-12s  %-12s  %-12s\n", "n", "residual_H", "eps_u",
                 "eps_G", "score", "gram_cond");
  }
  Model model;
  check(ogak_train(train.h, test.h, &c, progress, nullptr, &model.h), "train");
  const fs::path out(a.out);
  check(ogak_model_save(model.h, (out / "model.bin").string().c_str()), "save model");
  check(ogak_model_write_trace(model.h, (out / "trace.csv").string().c_str()), "write trace");
  ogak_model_info info;
  check(ogak_model_info_get(model.h, &info), "model info");
  manifest(out / "run_manifest.txt", "train", &c, train_dir,
           {{"test_dataset", test_dir}, {"threads", std::to_string(threads)},
            {"breakdowns", std::to_string(info.breakdowns)}});
  std::printf("model: %s\ntrace: %s\natoms = %zu\nbreakdowns = %zu\n",
              (out / "model.bin").string().c_str(), (out / "trace.csv").string().c_str(),
              info.atoms, info.breakdowns);
  if (info.breakdowns > 0 && c.mode == OGAK_MODE_OGA) {
    std::fprintf(stderr, "projection breakdown; last good model saved\n");
    return kExitFailure;
  }
  return 0;
}

// ---- eval

struct EvalArgs {
  std::string config;
  std::string model;
  std::string data;
  std::string oracle;
  double wave = 1.0;
  double helmholtz_k = 15.0;
  bool kernel_error = false;
  std::string out;
  bool force = false;
};

int run_eval(CLI::App* cmd, EvalArgs& a) {
  apply_config(cmd, a.config);
  if (a.model.empty() || a.data.empty()) throw Failure{kExitUsage, "eval needs --model and --data"};
  const fs::path out = a.out.empty() ? fs::path(a.model).parent_path() / "eval" : fs::path(a.out);
  const std::string data_dir = resolve_split(a.data, "test").string();
  Model model;
  Dataset data;
  check(ogak_model_load(a.model.c_str(), &model.h), "load model");
  check(ogak_dataset_load(data_dir.c_str(), &data.h), "load data");
  refuse_existing(out, a.force);
  const std::string errors = (out / "abs_error.csv").string();
  ogak_eval_options o;
  ogak_eval_options_default(&o);
  o.oracle = a.oracle.empty() ? nullptr : a.oracle.c_str();
  o.wave = a.wave;
  o.helmholtz_k = a.helmholtz_k;
  o.want_kernel = a.kernel_error ? 1 : 0;
  o.abs_error_path = errors.c_str();
  ogak_eval_report r;
  check(ogak_evaluate(model.h, data.h, &o, &r), "evaluate");
  const std::string report = "[eval]\nmodel = " + a.model + "\ndata = " + data_dir +
                             "\neps_u = " + num(r.eps_u) + "\neps_G = " + num(r.eps_G) + "\n";
  std::ofstream(out / "report.txt") << report;
  manifest(out / "run_manifest.txt", "eval", nullptr, data_dir,
           {{"model", a.model}, {"model_hash", [&] {
              char h[17];
              check(ogak_hash_file(a.model.c_str(), h), "hash model");
              return std::string(h);
            }()}});
  std::printf("%s", report.c_str());
  return 0;
}

// ---- rate

struct RateArgs {
  std::string config;
  std::string trace;
  std::string column;
  std::string sensor = "all";
  std::size_t nlo = 16;
  std::size_t nhi = 0;
  std::string out;
  bool force = false;
};

int run_rate(CLI::App* cmd, RateArgs& a) {
  apply_config(cmd, a.config);
  if (a.trace.empty()) throw Failure{kExitUsage, "rate needs --trace"};
  const std::size_t nhi = a.nhi == 0 ? static_cast<std::size_t>(-1) : a.nhi;
  std::vector<std::string> columns = {"eps_u", "eps_G", "residual_H"};
  if (!a.column.empty()) columns = {a.column};
  std::string report;
  std::string csv = "column,slope,intercept,n_lo,n_hi,r_squared,points\n";
  std::size_t fitted = 0;
  std::string last_error;
  for (const auto& col : columns) {
    ogak_rate_report r;
    const ogak_status s = ogak_rate(a.trace.c_str(), col.c_str(), a.sensor.c_str(), a.nlo, nhi, &r);
    if (s != OGAK_OK) {
      last_error = col + ": " + ogak_last_error();
      // A single requested column must fit; in the default sweep an
      // unevaluated column (eps_G without an oracle) is skipped.
      if (!a.column.empty() || s != OGAK_E_FIT) check(s, ("rate " + col).c_str());
      report += "[rate " + col + "]\nstatus = " + ogak_last_error() + "\n\n";
      continue;
    }
    ++fitted;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "[rate %s]\nslope = %.6g\nintercept = %.6g\nn_lo = %zu\nn_hi = %zu\n"
                  "r_squared = %.6g\npoints = %zu\n\n",
                  col.c_str(), r.slope, r.intercept, r.n_lo, r.n_hi, r.r_squared, r.points);
    report += buf;
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%zu,%zu,%.17g,%zu\n", col.c_str(), r.slope,
                  r.intercept, r.n_lo, r.n_hi, r.r_squared, r.points);
    csv += buf;
  }
  if (fitted == 0) throw Failure{kExitFailure, "rate: " + last_error};
  const fs::path out = a.out.empty() ? fs::path(a.trace).parent_path() / "rate" : fs::path(a.out);
  refuse_existing(out, a.force);
  std::ofstream(out / "rate.txt") << report;
  std::ofstream(out / "rate.csv") << csv;
  manifest(out / "run_manifest.txt", "rate", nullptr, "",
           {{"trace", a.trace}, {"sensor", a.sensor}, {"n_lo", std::to_string(a.nlo)}});
  std::printf("%s", report.c_str());
  return 0;
}

// ---- repro

struct ReproArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::uint64_t seed = 7;
  bool force = false;
};

void log_line(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

int run_repro(CLI::App* cmd, ReproArgs& a, unsigned threads) {
  apply_config(cmd, a.config);
  const std::string out = a.out.empty() ? "repro-" + a.preset : a.out;
  int passed = 0;
  check(ogak_repro(a.preset.c_str(), out.c_str(), a.seed, threads, a.force ? 1 : 0, log_line,
                   nullptr, &passed),
        "repro");
  std::ifstream summary(fs::path(out) / "summary.txt");
  std::printf("%s", std::string(std::istreambuf_iterator<char>(summary), {}).c_str());
  return passed ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ogak: learn Green's functions with orthogonal greedy algorithms"};
  app.set_version_flag("--version", ogak_version());
  app.require_subcommand(1);
  unsigned threads = ogak_default_threads();
  app.add_option("--threads", threads, "Worker threads (default: OGAK_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  GenerateArgs g;
  auto* gen = app.add_subcommand("generate", "Synthesize a train/test dataset");
  gen->add_option("--config", g.config, "key=value file; command-line flags win");
  gen->add_option("--problem", g.problem, "poisson1d|helmholtz1d|cosine|logcos|logdiscrete");
  gen->add_option("--dim", g.dim, "Spatial dimension");
  gen->add_option("--domain", g.domain, "interval|disk|cube (default by dimension)");
  gen->add_option("--grid", g.grid, "Interval nodes, disk nodes, or cube nodes per axis");
  gen->add_option("--mesh", g.mesh, "Import a point-cloud CSV instead");
  gen->add_option("--mesh-volume", g.mesh_volume, "Domain volume for an unweighted mesh");
  gen->add_option("--output-sensors", g.output_sensors, "Restrict outputs to spread nodes");
  gen->add_option("--wave", g.wave, "Cosine kernel wave number");
  gen->add_option("--helmholtz-k", g.helmholtz_k, "Helmholtz wave number");
  gen->add_option("--gp-scale", g.gp_scale, "GP correlation length");
  gen->add_option("--gp-variance", g.gp_variance, "GP variance");
  gen->add_option("--gp-jitter", g.gp_jitter, "Initial Cholesky jitter");
  gen->add_option("--gp-rank-floor", g.gp_rank_floor, "Eigen cut-off; 0 uses Cholesky");
  gen->add_option("--seed", g.seed, "Random seed");
  gen->add_option("--train", g.train, "Training pairs");
  gen->add_option("--test", g.test, "Test pairs");
  gen->add_flag("--no-normalize", g.no_normalize, "Keep raw forcing norms");
  gen->add_option("--out", g.out, "Output directory");
  gen->add_flag("--force", g.force, "Overwrite an existing output");

  TrainArgs t;
  auto* tr = app.add_subcommand("train", "Fit a kernel model");
  tr->add_option("--config", t.config, "key=value file; command-line flags win");
  tr->add_option("--data", t.data, "Generated root (train/ and test/) or a dataset directory");
  tr->add_option("--train-dir", t.train_dir, "Training dataset directory");
  tr->add_option("--test-dir", t.test_dir, "Held-out dataset for eps_u during training");
  tr->add_option("--mode", t.mode, "oga|pwoga");
  tr->add_option("--nmax", t.nmax, "Neurons (per sensor for pwoga)");
  tr->add_option("--dict", t.dict, "Dictionary samples per iteration");
  tr->add_option("--seed", t.seed, "Random seed");
  tr->add_option("--power", t.power, "ReLU power k");
  tr->add_flag("--normalized", t.normalized, "Score by normalized correlation");
  tr->add_option("--sensors", t.sensors, "pwoga sensors, e.g. 0..16 or 3,7,9");
  tr->add_option("--sensor-count", t.sensor_count, "pwoga: this many spread sensors");
  tr->add_option("--cadence-dense", t.cadence_dense, "Evaluate every step up to this n");
  tr->add_option("--cadence-stride", t.cadence_stride, "Then every stride-th step");
  tr->add_option("--cache-limit-mb", t.cache_limit_mb, "Feature cache budget");
  tr->add_option("--out", t.out, "Output directory");
  tr->add_flag("--force", t.force, "Overwrite an existing output");

  EvalArgs e;
  auto* ev = app.add_subcommand("eval", "Evaluate a model on held-out data");
  ev->add_option("--config", e.config, "key=value file; command-line flags win");
  ev->add_option("--model", e.model, "model.bin");
  ev->add_option("--data", e.data, "Dataset directory or generated root (uses test/)");
  ev->add_option("--oracle", e.oracle, "Reference kernel for eps_G");
  ev->add_option("--wave", e.wave, "Wave number for --oracle cosine");
  ev->add_option("--helmholtz-k", e.helmholtz_k, "Wave number for --oracle helmholtz1d");
  ev->add_flag("--kernel-error", e.kernel_error, "Fail unless eps_G can be computed");
  ev->add_option("--out", e.out, "Report directory (default: <model dir>/eval)");
  ev->add_flag("--force", e.force, "Overwrite an existing output");

  RateArgs r;
  auto* ra = app.add_subcommand("rate", "Fit log-log convergence rates to a trace");
  ra->add_option("--config", r.config, "key=value file; command-line flags win");
  ra->add_option("--trace", r.trace, "trace.csv");
  ra->add_option("--column", r.column, "residual_H|eps_u|eps_G (default: all)");
  ra->add_option("--sensor", r.sensor, "Sensor label in a pointwise trace");
  ra->add_option("--nlo", r.nlo, "Window start");
  ra->add_option("--nhi", r.nhi, "Window end (default: last n)");
  ra->add_option("--out", r.out, "Report directory (default: <trace dir>/rate)");
  ra->add_flag("--force", r.force, "Overwrite an existing output");

  ReproArgs p;
  std::string preset_help = "One of:";
  for (std::size_t i = 0; i < ogak_preset_count(); ++i) {
    preset_help += std::string(" ") + ogak_preset_name(i);
  }
  auto* rp = app.add_subcommand("repro", "Run a reproduction preset end to end");
  rp->add_option("preset", p.preset, preset_help)->required();
  rp->add_option("--config", p.config, "key=value file; command-line flags win");
  rp->add_option("--out", p.out, "Output directory (default: repro-<preset>)");
  rp->add_option("--seed", p.seed, "Random seed");
  rp->add_flag("--force", p.force, "Overwrite an existing output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    // Help and version print and succeed; every other parse failure is usage.
    const int rc = app.exit(err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_generate(gen, g);
    if (tr->parsed()) return run_train(tr, t, threads);
    if (ev->parsed()) return run_eval(ev, e);
    if (ra->parsed()) return run_rate(ra, r);
    return run_repro(rp, p, threads);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.code;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return kExitFailure;
  }
}
