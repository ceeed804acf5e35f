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

#include "ogak/ogak.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <fmt/format.h>

#include "ogak/dataio.hpp"
#include "ogak/error.hpp"
#include "ogak/experiments.hpp"
#include "ogak/metrics.hpp"
#include "ogak/parallel.hpp"

struct ogak_dataset {
  ogak::DataSet data;
};

struct ogak_model {
  ogak::AnyModel model;
};

namespace {

thread_local std::string g_error;

ogak_status code_of(ogak::ErrorKind kind) {
  switch (kind) {
    case ogak::ErrorKind::Argument: return OGAK_E_ARGUMENT;
    case ogak::ErrorKind::Resource: return OGAK_E_RESOURCE;
    case ogak::ErrorKind::Io: return OGAK_E_IO;
    case ogak::ErrorKind::Format: return OGAK_E_FORMAT;
    case ogak::ErrorKind::Metric: return OGAK_E_METRIC;
    case ogak::ErrorKind::Generation: return OGAK_E_GENERATION;
    case ogak::ErrorKind::Fit: return OGAK_E_FIT;
    case ogak::ErrorKind::Internal: return OGAK_E_INTERNAL;
  }
  return OGAK_E_INTERNAL;
}

template <typename F>
ogak_status guarded(F&& body) {
  g_error.clear();
  try {
    body();
    return OGAK_OK;
  } catch (const ogak::Error& e) {
    g_error = e.what();
    return code_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return OGAK_E_RESOURCE;
  } catch (const std::exception& e) {
    g_error = e.what();
    return OGAK_E_INTERNAL;
  } catch (...) {
    g_error = "unknown failure";
    return OGAK_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) ogak::fail(ogak::ErrorKind::Argument, fmt::format("{} is null", what));
}

std::string str_or(const char* s, const char* fallback = "") { return s ? s : fallback; }

ogak::KernelFitConfig fit_config(const ogak_train_config& c) {
  ogak::KernelFitConfig f;
  f.n_max = c.n_max;
  f.dict_samples = c.dict_samples;
  f.seed = c.seed;
  f.power = c.power;
  f.normalized = c.normalized != 0;
  f.threads = c.threads == 0 ? ogak::default_threads() : c.threads;
  f.cadence.dense_until = c.cadence_dense;
  f.cadence.stride = c.cadence_stride;
  f.cache_limit = c.cache_limit;
  return f;
}

ogak_record to_c(const ogak::IterationRecord& r, std::size_t sensor) {
  ogak_record out;
  out.sensor = sensor;
  out.n = r.n;
  out.residual_H = r.residual_H;
  out.eps_u = r.eps_u;
  out.eps_G = r.eps_G;
  out.score = r.score;
  out.gram_cond = r.gram_cond;
  out.orthogonality = r.orthogonality;
  out.coef_l1 = r.coef_l1;
  out.atom_index = r.atom_index;
  return out;
}

void copy_out(const ogak::RowMatrix& m, double* buf, std::size_t len) {
  need(buf, "output buffer");
  const auto size = static_cast<std::size_t>(m.size());
  if (len < size) {
    ogak::fail(ogak::ErrorKind::Argument,
               fmt::format("output buffer holds {} values, {} needed", len, size));
  }
  std::memcpy(buf, m.data(), size * sizeof(double));
}

}  // namespace

extern "C" {

const char* ogak_version(void) { return ogak::version_string(); }

const char* ogak_status_name(ogak_status status) {
  switch (status) {
    case OGAK_OK: return "ok";
    case OGAK_E_ARGUMENT: return "argument error";
    case OGAK_E_RESOURCE: return "resource error";
    case OGAK_E_IO: return "io error";
    case OGAK_E_FORMAT: return "format error";
    case OGAK_E_METRIC: return "metric error";
    case OGAK_E_GENERATION: return "generation error";
    case OGAK_E_FIT: return "fit error";
    case OGAK_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ogak_last_error(void) { return g_error.c_str(); }

unsigned ogak_default_threads(void) { return ogak::default_threads(); }

void ogak_generate_config_default(ogak_generate_config* c) {
  if (c == nullptr) return;
  const ogak::GenerateConfig d;
  c->problem = "poisson1d";
  c->dim = d.dim;
  c->domain = nullptr;
  c->grid = d.grid;
  c->mesh_path = nullptr;
  c->mesh_volume = 0.0;
  c->output_sensors = 0;
  c->wave = d.oracle.wave;
  c->helmholtz_k = d.oracle.helmholtz_k;
  c->gp_scale = d.gp.length_scale;
  c->gp_variance = d.gp.variance;
  c->gp_jitter = d.gp.jitter;
  c->gp_rank_floor = d.gp.rank_floor;
  c->seed = 0;
  c->train = d.split.train;
  c->test = d.split.test;
  c->normalize = 1;
}

ogak_status ogak_generate(const ogak_generate_config* c, const char* out_dir, int force) {
  return guarded([&] {
    need(c, "config");
    need(out_dir, "output directory");
    ogak::GenerateConfig g;
    g.problem = str_or(c->problem, "poisson1d");
    g.dim = c->dim;
    g.domain = str_or(c->domain);
    g.grid = c->grid;
    g.mesh_path = str_or(c->mesh_path);
    g.mesh_volume = c->mesh_volume;
    g.output_sensors = c->output_sensors;
    g.oracle.wave = c->wave;
    g.oracle.helmholtz_k = c->helmholtz_k;
    g.gp.length_scale = c->gp_scale;
    g.gp.variance = c->gp_variance;
    g.gp.jitter = c->gp_jitter;
    g.gp.rank_floor = c->gp_rank_floor;
    g.gp.seed = c->seed;
    g.split = {c->train, c->test, c->normalize != 0};
    // Refuse before spending time on synthesis.
    std::error_code ec;
    if (!force && ogak::fs::exists(out_dir, ec)) ogak::prepare_output(out_dir, false);
    ogak::write_generated(out_dir, ogak::generate(g), force != 0);
  });
}

ogak_status ogak_dataset_load(const char* dir, ogak_dataset** out) {
  return guarded([&] {
    need(dir, "dataset directory");
    need(out, "output handle");
    *out = nullptr;
    auto* h = new ogak_dataset{ogak::load_dataset(dir)};
    *out = h;
  });
}

ogak_status ogak_dataset_save(const ogak_dataset* data, const char* dir) {
  return guarded([&] {
    need(data, "dataset");
    need(dir, "dataset directory");
    ogak::save_dataset(dir, data->data);
  });
}

ogak_status ogak_dataset_info_get(const ogak_dataset* data, ogak_dataset_info* out) {
  return guarded([&] {
    need(data, "dataset");
    need(out, "info");
    const auto& d = data->data;
    out->samples = d.samples();
    out->input_dim = d.input.dim;
    out->input_nodes = d.input.size();
    out->output_dim = d.output.dim;
    out->output_nodes = d.output.size();
    out->normalized = d.normalized ? 1 : 0;
  });
}

ogak_status ogak_dataset_forcings(const ogak_dataset* data, double* buf, size_t len) {
  return guarded([&] {
    need(data, "dataset");
    copy_out(data->data.forcings, buf, len);
  });
}

ogak_status ogak_dataset_responses(const ogak_dataset* data, double* buf, size_t len) {
  return guarded([&] {
    need(data, "dataset");
    copy_out(data->data.responses, buf, len);
  });
}

ogak_status ogak_dataset_rank(const ogak_dataset* data, double threshold_rel, size_t* rank,
                              double* sv, size_t sv_cap, size_t* sv_len) {
  return guarded([&] {
    need(data, "dataset");
    need(rank, "rank");
    const auto diag = ogak::data_rank_diagnostic(data->data.forcings, threshold_rel);
    *rank = diag.rank;
    const auto count = static_cast<std::size_t>(diag.singular_values.size());
    if (sv_len) *sv_len = count;
    if (sv) {
      for (std::size_t i = 0; i < count && i < sv_cap; ++i) {
        sv[i] = diag.singular_values(static_cast<Eigen::Index>(i));
      }
    }
  });
}

void ogak_dataset_free(ogak_dataset* data) { delete data; }

void ogak_train_config_default(ogak_train_config* c) {
  if (c == nullptr) return;
  const ogak::KernelFitConfig d;
  c->mode = OGAK_MODE_OGA;
  c->n_max = d.n_max;
  c->dict_samples = d.dict_samples;
  c->seed = d.seed;
  c->power = d.power;
  c->normalized = 0;
  c->threads = 0;
  c->cadence_dense = d.cadence.dense_until;
  c->cadence_stride = d.cadence.stride;
  c->cache_limit = d.cache_limit;
  c->sensors = nullptr;
  c->n_sensors = 0;
  c->sensor_count = 0;
}

ogak_status ogak_train(const ogak_dataset* data, const ogak_dataset* eval,
                       const ogak_train_config* config, ogak_progress_fn progress, void* user,
                       ogak_model** out) {
  return guarded([&] {
    need(data, "dataset");
    need(config, "config");
    need(out, "output handle");
    *out = nullptr;
    ogak::TrainConfig tc;
    tc.mode = config->mode == OGAK_MODE_PWOGA ? ogak::TrainMode::Pointwise : ogak::TrainMode::Kernel;
    tc.fit = fit_config(*config);
    if (config->sensors != nullptr) {
      tc.sensors.assign(config->sensors, config->sensors + config->n_sensors);
    }
    tc.sensor_count = config->sensor_count;
    ogak::TrainCallbacks cb;
    if (progress) {
      cb.on_record = [&](std::size_t sensor, const ogak::IterationRecord& r) {
        const ogak_record rec = to_c(r, sensor == ogak::kNoSensor ? OGAK_NO_SENSOR : sensor);
        progress(&rec, 0, 1, user);
      };
      cb.on_sensor = [&](std::size_t done, std::size_t total, std::size_t sensor,
                         const ogak::GreedyModel& m) {
        ogak::IterationRecord last;
        last.residual_H = m.trace.initial_residual;
        if (!m.trace.records.empty()) last = m.trace.records.back();
        const ogak_record rec = to_c(last, sensor);
        progress(&rec, done, total, user);
      };
    }
    auto outcome = ogak::train(data->data, eval ? &eval->data : nullptr, tc, cb);
    *out = new ogak_model{std::move(outcome.model)};
  });
}

ogak_status ogak_model_load(const char* path, ogak_model** out) {
  return guarded([&] {
    need(path, "model path");
    need(out, "output handle");
    *out = nullptr;
    *out = new ogak_model{ogak::load_model(path)};
  });
}

ogak_status ogak_model_save(const ogak_model* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "model path");
    std::visit([&](const auto& m) { ogak::save_model(path, m); }, model->model);
  });
}

ogak_status ogak_model_write_trace(const ogak_model* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "trace path");
    ogak::write_model_trace(path, model->model);
  });
}

ogak_status ogak_model_info_get(const ogak_model* model, ogak_model_info* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "info");
    const auto& trace = ogak::trace_of(model->model);
    out->breakdowns = ogak::breakdown_count(model->model);
    out->trace_len = trace.records.size();
    out->initial_residual = trace.initial_residual;
    if (const auto* k = std::get_if<ogak::KernelModel>(&model->model)) {
      out->mode = OGAK_MODE_OGA;
      out->input_dim = k->input.dim;
      out->input_nodes = k->input.size();
      out->output_nodes = k->output.size();
      out->sensors = 0;
      out->atoms = k->model.atoms.size();
    } else {
      const auto& p = std::get<ogak::PointwiseModel>(model->model);
      out->mode = OGAK_MODE_PWOGA;
      out->input_dim = p.input.dim;
      out->input_nodes = p.input.size();
      out->output_nodes = p.output.size();
      out->sensors = p.sensors.size();
      out->atoms = 0;
      for (const auto& m : p.models) out->atoms += m.atoms.size();
    }
  });
}

ogak_status ogak_model_trace(const ogak_model* model, size_t index, ogak_record* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "record");
    const auto& recs = ogak::trace_of(model->model).records;
    ogak::require(index < recs.size(),
                  fmt::format("trace index {} out of range ({} records)", index, recs.size()));
    *out = to_c(recs[index], OGAK_NO_SENSOR);
  });
}

ogak_status ogak_model_predict(const ogak_model* model, const double* forcings, size_t rows,
                               size_t cols, double* out, size_t out_len) {
  return guarded([&] {
    need(model, "model");
    need(forcings, "forcings");
    const ogak::RowMatrix f =
        Eigen::Map<const ogak::RowMatrix>(forcings, static_cast<Eigen::Index>(rows),
                                          static_cast<Eigen::Index>(cols));
    ogak::RowMatrix pred;
    if (const auto* k = std::get_if<ogak::KernelModel>(&model->model)) {
      ogak::require(cols == k->input.size(),
                    fmt::format("forcings have {} columns, model expects {}", cols, k->input.size()));
      pred = ogak::predict_all(*k, f);
    } else {
      const auto& p = std::get<ogak::PointwiseModel>(model->model);
      ogak::require(cols == p.input.size(),
                    fmt::format("forcings have {} columns, model expects {}", cols, p.input.size()));
      pred = ogak::predict_pointwise(p, f);
    }
    copy_out(pred, out, out_len);
  });
}

void ogak_model_free(ogak_model* model) { delete model; }

void ogak_eval_options_default(ogak_eval_options* o) {
  if (o == nullptr) return;
  o->oracle = nullptr;
  o->wave = 1.0;
  o->helmholtz_k = 15.0;
  o->want_kernel = 0;
  o->abs_error_path = nullptr;
}

ogak_status ogak_evaluate(const ogak_model* model, const ogak_dataset* data,
                          const ogak_eval_options* options, ogak_eval_report* out) {
  return guarded([&] {
    need(model, "model");
    need(data, "dataset");
    need(out, "report");
    ogak_eval_options o;
    ogak_eval_options_default(&o);
    if (options) o = *options;
    std::optional<ogak::KernelOracle> oracle;
    if (o.oracle != nullptr) {
      ogak::OracleParams params;
      params.wave = o.wave;
      params.helmholtz_k = o.helmholtz_k;
      const auto& in = data->data.input;
      if (std::string(o.oracle) == "logdiscrete" && in.size() >= 2) {
        params.h = in.nodes(1, 0) - in.nodes(0, 0);
      }
      oracle = ogak::make_oracle(o.oracle, in.dim, params);
    }
    const auto report = ogak::evaluate(model->model, data->data, oracle, o.want_kernel != 0);
    if (o.abs_error_path) ogak::write_matrix_csv(o.abs_error_path, report.abs_error);
    out->eps_u = report.eps_u;
    out->eps_G = report.eps_G;
  });
}

ogak_status ogak_rate(const char* trace_path, const char* column, const char* sensor, size_t n_lo,
                      size_t n_hi, ogak_rate_report* out) {
  return guarded([&] {
    need(trace_path, "trace path");
    need(column, "column");
    need(out, "report");
    const std::string col = column;
    ogak::TraceColumn c;
    if (col == "residual_H") {
      c = ogak::TraceColumn::ResidualH;
    } else if (col == "eps_u") {
      c = ogak::TraceColumn::EpsU;
    } else if (col == "eps_G") {
      c = ogak::TraceColumn::EpsG;
    } else {
      ogak::fail(ogak::ErrorKind::Argument,
                 fmt::format("unknown column '{}' (known: residual_H, eps_u, eps_G)", col));
    }
    const auto table = ogak::read_trace(trace_path);
    const auto trace = table.select(str_or(sensor, "all"));
    const auto f = ogak::fit_rate(trace, c, n_lo, n_hi);
    out->slope = f.slope;
    out->intercept = f.intercept;
    out->n_lo = f.n_lo;
    out->n_hi = f.n_hi;
    out->r_squared = f.r_squared;
    out->points = f.points;
  });
}

ogak_status ogak_write_run_manifest(const char* path, const char* command,
                                    const ogak_train_config* config, const char* dataset_dir,
                                    const char* const* keys, const char* const* values,
                                    size_t n_extra) {
  return guarded([&] {
    need(path, "manifest path");
    ogak::RunManifestInfo info;
    info.command = str_or(command);
    if (config) {
      info.seed = config->seed;
      info.dict_samples = config->dict_samples;
      info.power = config->power;
      info.n_max = config->n_max;
      info.normalized = config->normalized != 0;
      info.mode = config->mode == OGAK_MODE_PWOGA ? "pwoga" : "oga";
    }
    if (dataset_dir) info.dataset = dataset_dir;
    ogak::Manifest extra;
    for (std::size_t i = 0; i < n_extra; ++i) {
      need(keys[i], "manifest key");
      extra[keys[i]] = str_or(values[i]);
    }
    ogak::write_run_manifest(path, info, extra);
  });
}

ogak_status ogak_hash_file(const char* path, char out[17]) {
  return guarded([&] {
    need(path, "path");
    need(out, "output buffer");
    const std::string h = ogak::hash_file(path);
    std::memcpy(out, h.c_str(), 17);
  });
}

size_t ogak_preset_count(void) { return ogak::preset_names().size(); }

const char* ogak_preset_name(size_t index) {
  const auto& names = ogak::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

ogak_status ogak_repro(const char* preset, const char* out_dir, uint64_t seed, unsigned threads,
                       int force, ogak_log_fn log, void* user, int* passed) {
  return guarded([&] {
    need(preset, "preset");
    need(out_dir, "output directory");
    ogak::ReproOptions o;
    o.out = out_dir;
    o.seed = seed;
    o.threads = threads == 0 ? ogak::default_threads() : threads;
    o.force = force != 0;
    if (log) o.log = [&](const std::string& line) { log(line.c_str(), user); };
    const auto result = ogak::run_preset(preset, o);
    if (passed) *passed = result.passed() ? 1 : 0;
  });
}

}  // extern "C"
