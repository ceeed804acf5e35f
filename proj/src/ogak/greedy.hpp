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

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "ogak/dictionary.hpp"
#include "ogak/geometry.hpp"
#include "ogak/rng.hpp"
#include "ogak/linalg.hpp"

namespace ogak {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct IterationRecord {
  std::size_t n = 0;
  double residual_H = 0.0;
  double eps_u = kMissing;
  double eps_G = kMissing;
  double score = 0.0;
  double gram_cond = 1.0;
  /// max_i |<r, g_i>_H| / (|G|_H |g_i|_H) over the selected atoms.
  double orthogonality = 0.0;
  /// sum |alpha_i|, logged for inspection only.
  double coef_l1 = 0.0;
  /// Index of the chosen atom inside that iteration's dictionary.
  std::size_t atom_index = 0;
};

struct FitTrace {
  double initial_residual = 0.0;
  std::vector<IterationRecord> records;
};

enum class FitStatus { Completed, Stagnated, Breakdown, Converged };

const char* to_string(FitStatus status) noexcept;

struct GreedyModel {
  std::size_t dim = 0;
  std::vector<Atom> atoms;
  std::vector<double> coefficients;
  FitTrace trace;
  FitStatus status = FitStatus::Completed;

  std::size_t size() const noexcept { return atoms.size(); }
  double operator()(std::span<const double> z) const;
};

/// Values of sum_i alpha_i g_i at every mesh node.
Vector evaluate_model(const GreedyModel& model, const Mesh& mesh);

/// Inner-product structure the engine drives. Implementations own the
/// residual and whatever per-atom data the Gram system needs.
class GreedyProblem {
 public:
  virtual ~GreedyProblem() = default;

  virtual std::size_t atom_dim() const = 0;
  virtual BiasBounds bounds() const = 0;
  virtual double target_norm_sq() const = 0;
  /// <r, g>_H for the positive atom of every dictionary sample.
  virtual void score(const RandomDictionary& dict, std::span<double> out,
                     unsigned threads) const = 0;
  virtual double atom_norm_sq(const Atom& atom) const = 0;
  /// Selected atom count.
  virtual std::size_t size() const = 0;
  /// Appends an atom. gram_row receives <g_new, g_i>_H for i = 0..size()-1
  /// with the new atom last; returns <G, g_new>_H.
  virtual double push(const Atom& atom, std::span<double> gram_row) = 0;
  virtual void pop() = 0;
  /// Recomputes the residual for the given coefficients; returns |r|_H^2.
  virtual double update(std::span<const double> alpha) = 0;
  /// <r, g_i>_H for every selected atom.
  virtual void correlations(std::span<double> out) const = 0;
};

/// Problem whose atoms map to feature vectors in a weighted space:
/// <a, b>_H = scale * sum_l weight_l a_l b_l. Covers plain function fitting,
/// full kernel estimation and the per-sensor problems alike.
class FieldProblem : public GreedyProblem {
 public:
  FieldProblem(Vector target, Vector weights, double scale, std::size_t capacity);

  double target_norm_sq() const override { return target_norm_sq_; }
  double atom_norm_sq(const Atom& atom) const override;
  std::size_t size() const override { return count_; }
  double push(const Atom& atom, std::span<double> gram_row) override;
  void pop() override;
  double update(std::span<const double> alpha) override;
  void correlations(std::span<double> out) const override;

  const Vector& residual() const noexcept { return residual_; }
  const Vector& weights() const noexcept { return weights_; }
  double scale() const noexcept { return scale_; }
  std::size_t capacity() const noexcept { return static_cast<std::size_t>(features_.cols()); }
  /// Feature vector of selected atom i.
  auto feature_of(std::size_t i) const { return features_.col(static_cast<Eigen::Index>(i)); }

 protected:
  virtual void feature(const Atom& atom, Eigen::Ref<Vector> out) const = 0;
  double weighted_norm_sq(const Vector& v) const;

 private:
  Vector target_;
  Vector weights_;
  double scale_;
  double target_norm_sq_;
  Matrix features_;
  std::size_t count_ = 0;
  Vector residual_;
};

/// Scores sum_t c_t * sign * ridge(w . z_t + beta) for every positive atom,
/// with the nodes stored column-wise (one column per coordinate).
void score_on_nodes(const RandomDictionary& dict, const Matrix& nodes_by_coord,
                    const Vector& field, std::span<double> out, unsigned threads);

/// Coordinate-major copy of mesh nodes for score_on_nodes.
Matrix coordinate_columns(const Mesh& mesh);

struct Projection {
  Vector alpha;
  double cond = 1.0;
  bool pseudo = false;
  bool ok = true;
};

inline constexpr double kConditionLimit = 1e14;
inline constexpr double kEigenFloor = 1e-12;

/// Solves gram * alpha = rhs. Cholesky with iterative refinement when the
/// condition estimate is below kConditionLimit, otherwise an eigenvalue
/// truncated pseudo-solve dropping eigenvalues below kEigenFloor * max.
Projection project(const Matrix& gram, const Vector& rhs, bool force_pseudo = false);

struct Cadence {
  std::size_t dense_until = 64;
  std::size_t stride = 8;
  bool due(std::size_t n, std::size_t n_max) const noexcept {
    return n <= dense_until || (stride > 0 && n % stride == 0) || n == n_max;
  }
};

struct Evaluation {
  double eps_u = kMissing;
  double eps_G = kMissing;
};

struct GreedyOptions {
  std::size_t n_max = 256;
  std::size_t dict_samples = 512;
  unsigned power = 1;
  std::uint64_t seed = 0;
  bool normalized = false;
  unsigned threads = 1;
  /// Appended to the first dictionary, e.g. planted atoms in tests.
  std::vector<Atom> inject;
  Cadence cadence;
  std::function<Evaluation(const GreedyModel&)> evaluate;
  std::function<void(const IterationRecord&)> on_record;
};

inline constexpr double kStagnationTol = 1e-14;
inline constexpr int kStagnationRuns = 3;
inline constexpr double kMonotoneTol = 1e-12;
inline constexpr double kOrthogonalityTol = 1e-8;
// Residual/r0 at or below this is round-off; further atoms would fit noise.
inline constexpr double kConvergedTol = 1e-12;

/// Dictionary seed for attempt number `attempt` (1-based) of a run.
constexpr std::uint64_t iteration_seed(std::uint64_t seed, std::size_t attempt) noexcept {
  return derive_seed(seed, attempt);
}

struct Selection {
  std::size_t index = 0;  // atom index, 2 * sample + (negative ? 1 : 0)
  double score = 0.0;     // raw <r, g>_H of the chosen signed atom
  bool stagnant = false;
};

/// argmax over signed atoms; ties resolve to the lowest index.
Selection select_atom(const RandomDictionary& dict, const GreedyProblem& problem,
                      bool normalized = false, unsigned threads = 1);

GreedyModel run_oga(GreedyProblem& problem, const GreedyOptions& options);

/// Plain L2(mesh) fitting of a function given by its node values.
GreedyModel fit_function(std::span<const double> target, const Mesh& mesh,
                         const GreedyOptions& options);

}  // namespace ogak
