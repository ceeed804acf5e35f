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

#include "ogak/pointwise_oga.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ogak/error.hpp"
#include "ogak/parallel.hpp"

namespace ogak {

namespace {

class SensorProblem final : public FieldProblem {
 public:
  SensorProblem(const DataSet& data, const RowMatrix& weighted, const Matrix& coords,
                std::size_t sensor, std::size_t capacity)
      : FieldProblem(data.responses.col(static_cast<Eigen::Index>(sensor)),
                     Vector::Ones(data.responses.rows()),
                     1.0 / static_cast<double>(data.samples()), capacity),
        data_(data),
        weighted_(weighted),
        coords_(coords) {}

  std::size_t atom_dim() const override { return data_.input.dim; }
  BiasBounds bounds() const override { return bias_bounds(data_.input); }

  void score(const RandomDictionary& dict, std::span<double> out, unsigned threads) const override {
    const Vector v = scale() * (weighted_.transpose() * residual());
    score_on_nodes(dict, coords_, v, out, threads);
  }

 protected:
  void feature(const Atom& atom, Eigen::Ref<Vector> out) const override {
    out.noalias() = weighted_ * evaluate_atom(atom, data_.input);
  }

 private:
  const DataSet& data_;
  const RowMatrix& weighted_;
  const Matrix& coords_;
};

struct Shared {
  const DataSet& data;
  const RowMatrix& weighted;
  const Matrix& coords;
  const DataSet* eval;
  const RowMatrix* eval_weighted;
  const RowMatrix* reference;
  std::vector<std::size_t> slots;  // cadence points, ascending
  std::size_t n_max;
};

struct SensorResult {
  GreedyModel model;
  // Per slot (plus one trailing "final" slot): squared test errors per
  // sample and the squared kernel slice error.
  std::vector<double> err;
  std::vector<double> kernel_err;
  Vector ref_u;  // squared test responses at this sensor
  double ref_kernel = 0.0;
};

/// Per-sensor diagnostics with caches of held-out features and node values.
class SensorEvaluator {
 public:
  SensorEvaluator(const Shared& sh, std::size_t sensor, SensorResult& out)
      : sh_(sh), sensor_(static_cast<Eigen::Index>(sensor)), out_(out) {
    const std::size_t slots = sh_.slots.size() + 1;
    if (sh_.eval != nullptr) {
      const auto nt = sh_.eval->responses.rows();
      features_.resize(nt, static_cast<Eigen::Index>(sh_.n_max));
      out_.err.assign(slots * static_cast<std::size_t>(nt), 0.0);
      out_.ref_u = sh_.eval->responses.col(sensor_).array().square();
    }
    if (sh_.reference != nullptr) {
      values_.resize(static_cast<Eigen::Index>(sh_.data.input.size()),
                     static_cast<Eigen::Index>(sh_.n_max));
      out_.kernel_err.assign(slots, 0.0);
      const auto row = sh_.reference->row(sensor_);
      out_.ref_kernel = row.array().square().matrix().dot(sh_.data.input.weights);
    }
  }

  Evaluation operator()(const GreedyModel& model) {
    const auto n = static_cast<Eigen::Index>(model.size());
    const Eigen::Map<const Vector> alpha(model.coefficients.data(), n);
    for (; cached_ < n; ++cached_) {
      const Vector g = evaluate_atom(model.atoms[static_cast<std::size_t>(cached_)], sh_.data.input);
      if (sh_.eval != nullptr) features_.col(cached_).noalias() = *sh_.eval_weighted * g;
      if (sh_.reference != nullptr) values_.col(cached_) = g;
    }
    const auto it = std::lower_bound(sh_.slots.begin(), sh_.slots.end(), static_cast<std::size_t>(n));
    const bool on_slot = it != sh_.slots.end() && *it == static_cast<std::size_t>(n);
    const std::size_t slot = on_slot ? static_cast<std::size_t>(it - sh_.slots.begin()) : sh_.slots.size();
    Evaluation ev;
    if (sh_.eval != nullptr) {
      const Vector pred = features_.leftCols(n) * alpha;
      const Vector err = (sh_.eval->responses.col(sensor_) - pred).array().square();
      store(out_.err, slot, err);
      final_u_ = err;
      const double ref = out_.ref_u.sum();
      ev.eps_u = ref > 0.0 ? std::sqrt(err.sum() / ref) : kMissing;
    }
    if (sh_.reference != nullptr) {
      const Vector slice = values_.leftCols(n) * alpha;
      const Vector diff = sh_.reference->row(sensor_).transpose() - slice;
      const double e = diff.array().square().matrix().dot(sh_.data.input.weights);
      out_.kernel_err[slot] = e;
      final_g_ = e;
      ev.eps_G = out_.ref_kernel > 0.0 ? std::sqrt(e / out_.ref_kernel) : kMissing;
    }
    last_n_ = static_cast<std::size_t>(n);
    return ev;
  }

  /// Copies the last evaluation into every later slot and the final slot.
  void fill_forward() {
    const std::size_t total = sh_.slots.size();
    for (std::size_t k = 0; k <= total; ++k) {
      if (k < total && sh_.slots[k] <= last_n_) continue;
      if (sh_.eval != nullptr) store(out_.err, k, final_u_);
      if (sh_.reference != nullptr) out_.kernel_err[k] = final_g_;
    }
  }

 private:
  static void store(std::vector<double>& buf, std::size_t slot, const Vector& v) {
    const auto len = static_cast<std::size_t>(v.size());
    std::copy(v.data(), v.data() + len, buf.begin() + static_cast<std::ptrdiff_t>(slot * len));
  }

  const Shared& sh_;
  Eigen::Index sensor_;
  SensorResult& out_;
  Matrix features_;
  Matrix values_;
  Eigen::Index cached_ = 0;
  std::size_t last_n_ = 0;
  Vector final_u_;
  double final_g_ = 0.0;
};

SensorResult fit_sensor(const Shared& sh, const GreedyOptions& base, std::size_t sensor) {
  SensorResult out;
  SensorProblem problem(sh.data, sh.weighted, sh.coords, sensor, sh.n_max);
  GreedyOptions options = base;
  options.seed = sensor_seed(base.seed, sensor);
  options.threads = 1;
  SensorEvaluator evaluator(sh, sensor, out);
  const bool diagnostics = sh.eval != nullptr || sh.reference != nullptr;
  if (diagnostics) {
    options.evaluate = [&evaluator](const GreedyModel& m) { return evaluator(m); };
  }
  out.model = run_oga(problem, options);
  if (diagnostics) {
    if (out.model.size() == 0) evaluator(out.model);
    evaluator.fill_forward();
  }
  return out;
}

}  // namespace

std::vector<std::size_t> spread_sensors(std::size_t m, std::size_t count) {
  std::vector<std::size_t> out;
  if (count >= m) {
    for (std::size_t i = 0; i < m; ++i) out.push_back(i);
    return out;
  }
  require(count >= 1, "need at least one sensor");
  // Centers of count equal blocks.
  for (std::size_t k = 0; k < count; ++k) out.push_back((2 * k + 1) * m / (2 * count));
  return out;
}

PointwiseModel fit_pointwise(const DataSet& data, const KernelFitConfig& config,
                             std::span<const std::size_t> sensors, const PointwiseHooks& hooks) {
  validate(data);
  const GreedyOptions base = greedy_options(config);
  std::vector<std::size_t> chosen(sensors.begin(), sensors.end());
  if (chosen.empty()) chosen = spread_sensors(data.output.size(), data.output.size());
  std::sort(chosen.begin(), chosen.end());
  require(std::adjacent_find(chosen.begin(), chosen.end()) == chosen.end(),
          "sensor list contains duplicates");
  require(chosen.back() < data.output.size(),
          fmt::format("sensor {} out of range for {} output nodes", chosen.back(), data.output.size()));
  if (hooks.eval != nullptr) {
    validate(*hooks.eval);
    require(hooks.eval->output.size() == data.output.size() &&
                hooks.eval->input.size() == data.input.size(),
            "evaluation data uses different meshes");
  }
  if (hooks.reference_kernel != nullptr) {
    require(static_cast<std::size_t>(hooks.reference_kernel->rows()) == data.output.size() &&
                static_cast<std::size_t>(hooks.reference_kernel->cols()) == data.input.size(),
            "reference kernel table does not match the meshes");
  }
  const unsigned threads = std::max(1u, base.threads);
  const double cache_bytes = static_cast<double>(data.samples() + data.input.size() +
                                                 (hooks.eval ? hooks.eval->samples() : 0)) *
                             static_cast<double>(config.n_max) * sizeof(double);
  if (cache_bytes * threads * 4 > static_cast<double>(config.cache_limit)) {
    fail(ErrorKind::Resource, "per-sensor feature caches exceed the cache limit");
  }

  const RowMatrix weighted = data.forcings * data.input.weights.asDiagonal();
  RowMatrix eval_weighted;
  if (hooks.eval != nullptr) eval_weighted = hooks.eval->forcings * data.input.weights.asDiagonal();
  const Matrix coords = coordinate_columns(data.input);
  Shared sh{data, weighted, coords, hooks.eval, hooks.eval ? &eval_weighted : nullptr,
            hooks.reference_kernel, {}, config.n_max};
  for (std::size_t n = 1; n <= config.n_max; ++n) {
    if (config.cadence.due(n, config.n_max)) sh.slots.push_back(n);
  }
  const std::size_t slots = sh.slots.size() + 1;
  const std::size_t nt = hooks.eval ? hooks.eval->samples() : 0;

  std::vector<double> acc_err(slots * nt, 0.0);
  Vector acc_ref_u = Vector::Zero(static_cast<Eigen::Index>(nt));
  std::vector<double> acc_kernel(slots, 0.0);
  double acc_ref_kernel = 0.0;
  std::vector<double> acc_res(config.n_max + 1, 0.0);
  std::vector<IterationRecord> agg(config.n_max + 1);
  std::size_t reached = 0;

  PointwiseModel out;
  out.sensors = chosen;
  out.input = data.input;
  out.output = data.output;
  out.models.reserve(chosen.size());

  const std::size_t chunk = static_cast<std::size_t>(threads) * 4;
  std::vector<SensorResult> results;
  for (std::size_t first = 0; first < chosen.size(); first += chunk) {
    const std::size_t count = std::min(chunk, chosen.size() - first);
    results.clear();
    results.resize(count);
    parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) results[k] = fit_sensor(sh, base, chosen[first + k]);
    });
    // Reduction in sensor order keeps the aggregate independent of threads.
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t s = chosen[first + k];
      const double w = data.output.weights[static_cast<Eigen::Index>(s)];
      SensorResult& r = results[k];
      const auto& recs = r.model.trace.records;
      double last = r.model.trace.initial_residual;
      for (std::size_t n = 1; n <= config.n_max; ++n) {
        if (n <= recs.size()) {
          last = recs[n - 1].residual_H;
          IterationRecord& a = agg[n];
          a.score = std::max(a.score, recs[n - 1].score);
          a.gram_cond = std::max(a.gram_cond, recs[n - 1].gram_cond);
          a.orthogonality = std::max(a.orthogonality, recs[n - 1].orthogonality);
          a.coef_l1 = std::max(a.coef_l1, recs[n - 1].coef_l1);
        }
        acc_res[n] += w * last * last;
      }
      reached = std::max(reached, recs.size());
      acc_res[0] += w * r.model.trace.initial_residual * r.model.trace.initial_residual;
      if (nt > 0) {
        for (std::size_t i = 0; i < r.err.size(); ++i) acc_err[i] += w * r.err[i];
        acc_ref_u += w * r.ref_u;
      }
      if (hooks.reference_kernel != nullptr) {
        for (std::size_t i = 0; i < slots; ++i) acc_kernel[i] += w * r.kernel_err[i];
        acc_ref_kernel += w * r.ref_kernel;
      }
      out.models.push_back(std::move(r.model));
      if (hooks.on_sensor) hooks.on_sensor(out.models.size(), chosen.size(), s, out.models.back());
    }
  }

  auto eps_at = [&](std::size_t slot, IterationRecord& rec) {
    if (nt > 0) {
      double total = 0.0;
      for (std::size_t j = 0; j < nt; ++j) {
        const double ref = acc_ref_u[static_cast<Eigen::Index>(j)];
        if (!(ref > 0.0)) {
          fail(ErrorKind::Metric, fmt::format("reference solution {} has zero norm on the sensors", j));
        }
        total += std::sqrt(acc_err[slot * nt + j] / ref);
      }
      rec.eps_u = total / static_cast<double>(nt);
    }
    if (hooks.reference_kernel != nullptr) {
      if (!(acc_ref_kernel > 0.0)) fail(ErrorKind::Metric, "reference kernel has zero norm");
      rec.eps_G = std::sqrt(acc_kernel[slot] / acc_ref_kernel);
    }
  };

  out.aggregate.initial_residual = std::sqrt(acc_res[0]);
  for (std::size_t n = 1; n <= reached; ++n) {
    IterationRecord rec = agg[n];
    rec.n = n;
    rec.residual_H = std::sqrt(acc_res[n]);
    const auto it = std::lower_bound(sh.slots.begin(), sh.slots.end(), n);
    if (it != sh.slots.end() && *it == n) {
      eps_at(static_cast<std::size_t>(it - sh.slots.begin()), rec);
    } else if (n == reached) {
      eps_at(sh.slots.size(), rec);
    }
    out.aggregate.records.push_back(rec);
  }
  return out;
}

RowMatrix assemble_kernel(const PointwiseModel& model) {
  RowMatrix table(static_cast<Eigen::Index>(model.models.size()),
                  static_cast<Eigen::Index>(model.input.size()));
  for (std::size_t k = 0; k < model.models.size(); ++k) {
    table.row(static_cast<Eigen::Index>(k)) = evaluate_model(model.models[k], model.input).transpose();
  }
  return table;
}

RowMatrix predict_pointwise(const PointwiseModel& model, const RowMatrix& forcings) {
  require(static_cast<std::size_t>(forcings.cols()) == model.input.size(),
          fmt::format("forcings have {} columns for a {}-node input mesh", forcings.cols(),
                      model.input.size()));
  const RowMatrix table = assemble_kernel(model);
  return (forcings * model.input.weights.asDiagonal()) * table.transpose();
}

Vector predict_pointwise(const PointwiseModel& model, std::span<const double> forcing) {
  const Eigen::Map<const Eigen::RowVectorXd> f(forcing.data(), static_cast<Eigen::Index>(forcing.size()));
  const RowMatrix one = f;
  return predict_pointwise(model, one).row(0).transpose();
}

Mesh sensor_mesh(const PointwiseModel& model) { return sub_mesh(model.output, model.sensors); }

}  // namespace ogak
