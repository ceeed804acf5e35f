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

#include "ogak/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "ogak/error.hpp"
#include "ogak/parallel.hpp"
#include "ogak/products.hpp"

namespace ogak {

const char* to_string(FitStatus status) noexcept {
  switch (status) {
    case FitStatus::Completed: return "completed";
    case FitStatus::Stagnated: return "stagnated";
    case FitStatus::Breakdown: return "projection breakdown";
    case FitStatus::Converged: return "converged";
  }
  return "unknown";
}

double GreedyModel::operator()(std::span<const double> z) const {
  double v = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) v += coefficients[i] * atoms[i](z);
  return v;
}

Vector evaluate_model(const GreedyModel& model, const Mesh& mesh) {
  require(model.dim == 0 || model.dim == mesh.dim,
          fmt::format("model dimension {} differs from mesh dimension {}", model.dim, mesh.dim));
  Vector values = Vector::Zero(static_cast<Eigen::Index>(mesh.size()));
  for (std::size_t i = 0; i < model.size(); ++i) {
    values += model.coefficients[i] * evaluate_atom(model.atoms[i], mesh);
  }
  return values;
}

FieldProblem::FieldProblem(Vector target, Vector weights, double scale, std::size_t capacity)
    : target_(std::move(target)), weights_(std::move(weights)), scale_(scale) {
  require(target_.size() == weights_.size(), "target and weights differ in length");
  require(scale_ > 0.0, "inner product scale must be positive");
  require(capacity >= 1, "feature cache needs room for at least one atom");
  features_.resize(target_.size(), static_cast<Eigen::Index>(capacity));
  residual_ = target_;
  target_norm_sq_ = weighted_norm_sq(target_);
}

double FieldProblem::weighted_norm_sq(const Vector& v) const {
  const Vector terms = weights_.cwiseProduct(v).cwiseProduct(v);
  return scale_ * compensated_sum({terms.data(), static_cast<std::size_t>(terms.size())});
}

double FieldProblem::atom_norm_sq(const Atom& atom) const {
  Vector f(target_.size());
  feature(atom, f);
  return weighted_norm_sq(f);
}

double FieldProblem::push(const Atom& atom, std::span<double> gram_row) {
  require(count_ < capacity(), fmt::format("feature cache full at {} atoms", count_));
  require(gram_row.size() == count_ + 1, "gram row has the wrong length");
  const auto slot = static_cast<Eigen::Index>(count_);
  feature(atom, features_.col(slot));
  const Vector wf = weights_.cwiseProduct(features_.col(slot));
  Eigen::Map<Vector> row(gram_row.data(), slot + 1);
  row.noalias() = scale_ * (features_.leftCols(slot + 1).transpose() * wf);
  const Vector terms = target_.cwiseProduct(wf);
  ++count_;
  return scale_ * compensated_sum({terms.data(), static_cast<std::size_t>(terms.size())});
}

void FieldProblem::pop() {
  require(count_ > 0, "no atom to remove");
  --count_;
}

double FieldProblem::update(std::span<const double> alpha) {
  require(alpha.size() == count_, "coefficient count differs from atom count");
  const Eigen::Map<const Vector> a(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  residual_ = target_;
  if (count_ > 0) residual_.noalias() -= features_.leftCols(static_cast<Eigen::Index>(count_)) * a;
  return weighted_norm_sq(residual_);
}

void FieldProblem::correlations(std::span<double> out) const {
  require(out.size() == count_, "correlation buffer has the wrong length");
  Eigen::Map<Vector> o(out.data(), static_cast<Eigen::Index>(count_));
  const Vector wr = weights_.cwiseProduct(residual_);
  o.noalias() = scale_ * (features_.leftCols(static_cast<Eigen::Index>(count_)).transpose() * wr);
}

Matrix coordinate_columns(const Mesh& mesh) {
  Matrix x(static_cast<Eigen::Index>(mesh.size()), static_cast<Eigen::Index>(mesh.dim));
  x = mesh.nodes;
  return x;
}

void score_on_nodes(const RandomDictionary& dict, const Matrix& nodes_by_coord,
                    const Vector& field, std::span<double> out, unsigned threads) {
  require(static_cast<std::size_t>(nodes_by_coord.cols()) == dict.dim,
          "node coordinates differ from the dictionary dimension");
  require(out.size() == dict.n_samples(), "score buffer has the wrong length");
  const Eigen::Index m = nodes_by_coord.rows();
  parallel_for(dict.n_samples(), threads, [&](std::size_t begin, std::size_t end) {
    Eigen::ArrayXd z(m);
    for (std::size_t i = begin; i < end; ++i) {
      const auto w = dict.direction(i);
      z.setConstant(dict.biases[static_cast<Eigen::Index>(i)]);
      for (std::size_t k = 0; k < dict.dim; ++k) {
        z += w[k] * nodes_by_coord.col(static_cast<Eigen::Index>(k)).array();
      }
      ridge_inplace(z, dict.power);
      out[i] = (z * field.array()).sum();
    }
  });
}

Projection project(const Matrix& gram, const Vector& rhs, bool force_pseudo) {
  require(gram.rows() == gram.cols() && gram.rows() == rhs.size() && rhs.size() >= 1,
          "projection needs a square Gram matrix matching the right-hand side");
  Projection p;
  if (!force_pseudo) {
    const Eigen::LLT<Matrix> llt(gram);
    if (llt.info() == Eigen::Success) {
      const double rc = llt.rcond();
      p.cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
      if (p.cond <= kConditionLimit) {
        p.alpha = llt.solve(rhs);
        for (int step = 0; step < 2; ++step) {
          const Vector r = rhs - gram * p.alpha;
          p.alpha += llt.solve(r);
        }
        p.ok = p.alpha.allFinite();
        if (p.ok) return p;
      }
    }
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) {
    p.ok = false;
    return p;
  }
  const Vector& lambda = eig.eigenvalues();
  const double top = lambda.cwiseAbs().maxCoeff();
  const double bottom = lambda.minCoeff();
  p.cond = bottom > 0.0 ? top / bottom : std::numeric_limits<double>::infinity();
  p.pseudo = true;
  Vector proj = eig.eigenvectors().transpose() * rhs;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    proj[i] = lambda[i] > kEigenFloor * top ? proj[i] / lambda[i] : 0.0;
  }
  p.alpha = eig.eigenvectors() * proj;
  p.ok = top > 0.0 && p.alpha.allFinite();
  return p;
}

Selection select_atom(const RandomDictionary& dict, const GreedyProblem& problem,
                      bool normalized, unsigned threads) {
  require(dict.n_samples() >= 1, "dictionary is empty");
  std::vector<double> scores(dict.n_samples());
  problem.score(dict, scores, threads);
  std::vector<double> keys(scores);
  if (normalized) {
    std::vector<double> norms(dict.n_samples());
    parallel_for(dict.n_samples(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) norms[i] = problem.atom_norm_sq(dict.atom(2 * i));
    });
    for (std::size_t i = 0; i < keys.size(); ++i) {
      keys[i] = norms[i] > 0.0 ? scores[i] / std::sqrt(norms[i]) : 0.0;
    }
  }
  std::size_t best = 0;
  double best_key = std::abs(keys[0]);
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (std::abs(keys[i]) > best_key) {
      best_key = std::abs(keys[i]);
      best = i;
    }
  }
  Selection sel;
  sel.index = 2 * best + (scores[best] < 0.0 ? 1 : 0);
  sel.score = std::abs(scores[best]);
  sel.stagnant = best_key == 0.0 || !std::isfinite(best_key);
  return sel;
}

GreedyModel run_oga(GreedyProblem& problem, const GreedyOptions& options) {
  require(options.n_max >= 1, "n_max must be at least 1");
  require(options.dict_samples >= 1, "dictionary size must be at least 1");
  GreedyModel model;
  model.dim = problem.atom_dim();
  const double r0_sq = problem.target_norm_sq();
  const double r0 = std::sqrt(r0_sq);
  model.trace.initial_residual = r0;
  if (!(r0 > 0.0)) {
    model.status = FitStatus::Stagnated;
    return model;
  }
  const std::size_t n_max = options.n_max;
  const BiasBounds bounds = problem.bounds();
  Matrix gram = Matrix::Zero(static_cast<Eigen::Index>(n_max), static_cast<Eigen::Index>(n_max));
  Vector rhs = Vector::Zero(static_cast<Eigen::Index>(n_max));
  std::vector<double> row;
  std::vector<double> corr;
  double prev_sq = r0_sq;
  int stagnant_runs = 0;
  std::size_t attempt = 0;

  while (model.size() < n_max) {
    ++attempt;
    RandomDictionary dict = sample_dictionary(model.dim, options.power, bounds,
                                              options.dict_samples,
                                              iteration_seed(options.seed, attempt));
    if (attempt == 1) append_samples(dict, options.inject);
    const Selection sel = select_atom(dict, problem, options.normalized, options.threads);
    stagnant_runs = sel.score <= kStagnationTol * r0_sq ? stagnant_runs + 1 : 0;
    if (sel.stagnant) {
      if (stagnant_runs >= kStagnationRuns) {
        model.status = FitStatus::Stagnated;
        break;
      }
      continue;
    }

    const std::size_t n = model.size() + 1;
    const auto ni = static_cast<Eigen::Index>(n);
    Atom atom = dict.atom(sel.index);
    row.assign(n, 0.0);
    rhs[ni - 1] = problem.push(atom, row);
    for (Eigen::Index i = 0; i < ni; ++i) {
      gram(ni - 1, i) = row[static_cast<std::size_t>(i)];
      gram(i, ni - 1) = row[static_cast<std::size_t>(i)];
    }
    const Matrix a = gram.topLeftCorner(ni, ni);
    const Vector b = rhs.head(ni);
    const double bound = std::sqrt(prev_sq) + kMonotoneTol * r0;
    double new_sq = 0.0;
    double orth = 0.0;
    // A projection is accepted only if it keeps the residual monotone and
    // the new residual orthogonal to every selected atom.
    auto accept = [&](const Projection& p) {
      if (!p.ok) return false;
      new_sq = problem.update({p.alpha.data(), n});
      if (!(std::sqrt(new_sq) <= bound)) return false;
      corr.assign(n, 0.0);
      problem.correlations(corr);
      orth = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double gi = std::sqrt(gram(ii, ii));
        if (gi > 0.0) orth = std::max(orth, std::abs(corr[i]) / (r0 * gi));
      }
      return orth <= kOrthogonalityTol;
    };
    Projection proj = project(a, b);
    bool good = accept(proj);
    if (!good && !proj.pseudo) {
      proj = project(a, b, true);
      good = accept(proj);
    }
    if (!good) {
      problem.pop();
      problem.update(model.coefficients);
      model.status = FitStatus::Breakdown;
      break;
    }

    model.atoms.push_back(std::move(atom));
    model.coefficients.assign(proj.alpha.data(), proj.alpha.data() + n);
    prev_sq = new_sq;

    IterationRecord rec;
    rec.n = n;
    rec.residual_H = std::sqrt(new_sq);
    rec.score = sel.score;
    rec.gram_cond = proj.cond;
    rec.atom_index = sel.index;
    rec.orthogonality = orth;
    for (const double c : model.coefficients) rec.coef_l1 += std::abs(c);
    if (options.evaluate && options.cadence.due(n, n_max)) {
      const Evaluation ev = options.evaluate(model);
      rec.eps_u = ev.eps_u;
      rec.eps_G = ev.eps_G;
    }
    model.trace.records.push_back(rec);
    if (options.on_record) options.on_record(rec);
    if (rec.residual_H <= kConvergedTol * r0) {
      model.status = FitStatus::Converged;
      break;
    }
    if (stagnant_runs >= kStagnationRuns) {
      model.status = FitStatus::Stagnated;
      break;
    }
  }

  if (options.evaluate && !model.trace.records.empty()) {
    IterationRecord& last = model.trace.records.back();
    if (std::isnan(last.eps_u) && std::isnan(last.eps_G)) {
      const Evaluation ev = options.evaluate(model);
      last.eps_u = ev.eps_u;
      last.eps_G = ev.eps_G;
    }
  }
  return model;
}

namespace {

class FunctionProblem final : public FieldProblem {
 public:
  FunctionProblem(std::span<const double> target, const Mesh& mesh, std::size_t capacity)
      : FieldProblem(Eigen::Map<const Vector>(target.data(), static_cast<Eigen::Index>(target.size())),
                     mesh.weights, 1.0, capacity),
        mesh_(mesh),
        coords_(coordinate_columns(mesh)) {}

  std::size_t atom_dim() const override { return mesh_.dim; }
  BiasBounds bounds() const override { return bias_bounds(mesh_); }

  void score(const RandomDictionary& dict, std::span<double> out, unsigned threads) const override {
    const Vector field = weights().cwiseProduct(residual());
    score_on_nodes(dict, coords_, field, out, threads);
  }

 protected:
  void feature(const Atom& atom, Eigen::Ref<Vector> out) const override {
    out = evaluate_atom(atom, mesh_);
  }

 private:
  const Mesh& mesh_;
  Matrix coords_;
};

}  // namespace

GreedyModel fit_function(std::span<const double> target, const Mesh& mesh,
                         const GreedyOptions& options) {
  require(target.size() == mesh.size(),
          fmt::format("target has {} values for {} mesh nodes", target.size(), mesh.size()));
  for (std::size_t i = 0; i < target.size(); ++i) {
    require(std::isfinite(target[i]), fmt::format("target value {} is not finite", i));
  }
  require(options.n_max >= 1, "n_max must be at least 1");
  FunctionProblem problem(target, mesh, options.n_max);
  return run_oga(problem, options);
}

}  // namespace ogak
