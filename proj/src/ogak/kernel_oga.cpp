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

#include "ogak/kernel_oga.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ogak/error.hpp"
#include "ogak/metrics.hpp"
#include "ogak/parallel.hpp"
#include "ogak/products.hpp"

namespace ogak {

namespace {

void check_cache(std::size_t rows, std::size_t n_max, std::size_t limit, const char* what) {
  const double bytes = static_cast<double>(rows) * static_cast<double>(n_max) * sizeof(double);
  if (bytes > static_cast<double>(limit)) {
    fail(ErrorKind::Resource,
         fmt::format("{} cache needs {:.0f} MiB for n_max = {}, above the {:.0f} MiB limit", what,
                     bytes / (1 << 20), n_max, static_cast<double>(limit) / (1 << 20)));
  }
}

Vector tiled(const Vector& w, std::size_t copies) {
  Vector out(w.size() * static_cast<Eigen::Index>(copies));
  for (std::size_t j = 0; j < copies; ++j) out.segment(static_cast<Eigen::Index>(j) * w.size(), w.size()) = w;
  return out;
}

class KernelProblem final : public FieldProblem {
 public:
  KernelProblem(const DataSet& data, std::size_t capacity)
      : FieldProblem(Eigen::Map<const Vector>(data.responses.data(), data.responses.size()),
                     tiled(data.output.weights, data.samples()),
                     1.0 / static_cast<double>(data.samples()), capacity),
        data_(data),
        weighted_forcings_(data.forcings * data.input.weights.asDiagonal()) {}

  std::size_t atom_dim() const override { return data_.output.dim + data_.input.dim; }
  BiasBounds bounds() const override { return bias_bounds_product(data_.output, data_.input); }

  void score(const RandomDictionary& dict, std::span<double> out, unsigned threads) const override {
    const auto n = static_cast<Eigen::Index>(data_.samples());
    const auto mu = static_cast<Eigen::Index>(data_.output.size());
    const auto mf = static_cast<Eigen::Index>(data_.input.size());
    const Eigen::Map<const RowMatrix> r(residual().data(), n, mu);
    RowMatrix field = r.transpose() * weighted_forcings_;
    field = (data_.output.weights * scale()).asDiagonal() * field;
    const std::size_t dx = data_.output.dim;
    parallel_for(dict.n_samples(), threads, [&](std::size_t begin, std::size_t end) {
      Eigen::ArrayXd px(mu);
      Eigen::ArrayXd py(mf);
      Eigen::ArrayXd z(mf);
      for (std::size_t i = begin; i < end; ++i) {
        const auto w = dict.direction(i);
        const Eigen::Map<const Vector> wx(w.data(), static_cast<Eigen::Index>(dx));
        const Eigen::Map<const Vector> wy(w.data() + dx, static_cast<Eigen::Index>(data_.input.dim));
        px = (data_.output.nodes * wx).array() + dict.biases[static_cast<Eigen::Index>(i)];
        py = (data_.input.nodes * wy).array();
        const double top = py.maxCoeff();
        double acc = 0.0;
        for (Eigen::Index s = 0; s < mu; ++s) {
          if (px[s] + top <= 0.0) continue;
          z = py + px[s];
          ridge_inplace(z, dict.power);
          acc += (z * field.row(s).transpose().array()).sum();
        }
        out[i] = acc;
      }
    });
  }

 protected:
  void feature(const Atom& atom, Eigen::Ref<Vector> out) const override {
    const RowMatrix table = kernel_table(atom, data_.output, data_.input);
    Eigen::Map<RowMatrix> fields(out.data(), static_cast<Eigen::Index>(data_.samples()),
                                 static_cast<Eigen::Index>(data_.output.size()));
    fields.noalias() = weighted_forcings_ * table.transpose();
  }

 private:
  const DataSet& data_;
  RowMatrix weighted_forcings_;
};

/// Incrementally caches held-out response fields of selected atoms.
class KernelEvaluator {
 public:
  KernelEvaluator(const DataSet* eval, const RowMatrix* reference, const Mesh& output,
                  const Mesh& input, std::size_t n_max)
      : eval_(eval), reference_(reference), output_(output), input_(input) {
    if (eval_ != nullptr) {
      weighted_ = eval_->forcings * input.weights.asDiagonal();
      fields_.resize(eval_->responses.size(), static_cast<Eigen::Index>(n_max));
    }
  }

  Evaluation operator()(const GreedyModel& model) {
    Evaluation ev;
    const auto n = static_cast<Eigen::Index>(model.size());
    const Eigen::Map<const Vector> alpha(model.coefficients.data(), n);
    if (eval_ != nullptr) {
      for (; cached_ < n; ++cached_) {
        const RowMatrix table = kernel_table(model.atoms[static_cast<std::size_t>(cached_)], output_, input_);
        Eigen::Map<RowMatrix> f(fields_.col(cached_).data(), eval_->responses.rows(),
                                eval_->responses.cols());
        f.noalias() = weighted_ * table.transpose();
      }
      Vector flat = fields_.leftCols(n) * alpha;
      const Eigen::Map<const RowMatrix> pred(flat.data(), eval_->responses.rows(),
                                             eval_->responses.cols());
      ev.eps_u = relative_l2_solutions(pred, eval_->responses, output_);
    }
    if (reference_ != nullptr) {
      RowMatrix table = RowMatrix::Zero(reference_->rows(), reference_->cols());
      for (Eigen::Index i = 0; i < n; ++i) {
        table += alpha[i] * kernel_table(model.atoms[static_cast<std::size_t>(i)], output_, input_);
      }
      ev.eps_G = relative_l2_kernel(table, *reference_, output_, input_);
    }
    return ev;
  }

 private:
  const DataSet* eval_;
  const RowMatrix* reference_;
  const Mesh& output_;
  const Mesh& input_;
  RowMatrix weighted_;
  Matrix fields_;
  Eigen::Index cached_ = 0;
};

}  // namespace

GreedyOptions greedy_options(const KernelFitConfig& config) {
  require(config.n_max >= 1, "n_max must be at least 1");
  require(config.dict_samples >= 1, "dictionary size must be at least 1");
  GreedyOptions options;
  options.n_max = config.n_max;
  options.dict_samples = config.dict_samples;
  options.power = config.power;
  options.seed = config.seed;
  options.normalized = config.normalized;
  options.threads = config.threads == 0 ? 1 : config.threads;
  options.inject = config.inject;
  options.cadence = config.cadence;
  return options;
}

RowMatrix kernel_table(const Atom& atom, const Mesh& output, const Mesh& input) {
  require(atom.dim() == output.dim + input.dim,
          fmt::format("atom dimension {} differs from {} + {}", atom.dim(), output.dim, input.dim));
  const Eigen::Map<const Vector> wx(atom.direction.data(), static_cast<Eigen::Index>(output.dim));
  const Eigen::Map<const Vector> wy(atom.direction.data() + output.dim,
                                    static_cast<Eigen::Index>(input.dim));
  const Eigen::ArrayXd px = (output.nodes * wx).array() + atom.bias;
  const Eigen::ArrayXd py = (input.nodes * wy).array();
  RowMatrix table(static_cast<Eigen::Index>(output.size()), static_cast<Eigen::Index>(input.size()));
  Eigen::ArrayXd z(py.size());
  for (Eigen::Index s = 0; s < px.size(); ++s) {
    z = py + px[s];
    ridge_inplace(z, atom.power);
    table.row(s) = atom.sign * z.matrix().transpose();
  }
  return table;
}

KernelModel fit_kernel(const DataSet& data, const KernelFitConfig& config, const FitHooks& hooks) {
  validate(data);
  const GreedyOptions base = greedy_options(config);
  const std::size_t rows = data.samples() * data.output.size();
  std::size_t eval_rows = 0;
  if (hooks.eval != nullptr) {
    validate(*hooks.eval);
    require(hooks.eval->output.size() == data.output.size() &&
                hooks.eval->input.size() == data.input.size(),
            "evaluation data uses different meshes");
    eval_rows = hooks.eval->samples() * data.output.size();
  }
  if (hooks.reference_kernel != nullptr) {
    require(static_cast<std::size_t>(hooks.reference_kernel->rows()) == data.output.size() &&
                static_cast<std::size_t>(hooks.reference_kernel->cols()) == data.input.size(),
            "reference kernel table does not match the meshes");
  }
  check_cache(rows + eval_rows, config.n_max, config.cache_limit, "response field");

  KernelProblem problem(data, config.n_max);
  GreedyOptions options = base;
  KernelEvaluator evaluator(hooks.eval, hooks.reference_kernel, data.output, data.input,
                            config.n_max);
  if (hooks.eval != nullptr || hooks.reference_kernel != nullptr) {
    options.evaluate = [&evaluator](const GreedyModel& m) { return evaluator(m); };
  }
  options.on_record = hooks.on_record;
  KernelModel out;
  out.model = run_oga(problem, options);
  out.input = data.input;
  out.output = data.output;
  return out;
}

RowMatrix evaluate_kernel(const KernelModel& model, const Mesh& output, const Mesh& input) {
  RowMatrix table = RowMatrix::Zero(static_cast<Eigen::Index>(output.size()),
                                    static_cast<Eigen::Index>(input.size()));
  for (std::size_t i = 0; i < model.model.size(); ++i) {
    table += model.model.coefficients[i] * kernel_table(model.model.atoms[i], output, input);
  }
  return table;
}

RowMatrix evaluate_kernel(const KernelModel& model) {
  return evaluate_kernel(model, model.output, model.input);
}

Vector predict(const KernelModel& model, std::span<const double> forcing) {
  return kernel_apply(evaluate_kernel(model), forcing, model.input);
}

RowMatrix predict_all(const KernelModel& model, const RowMatrix& forcings) {
  return kernel_apply_all(evaluate_kernel(model), forcings, model.input);
}

}  // namespace ogak
