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

// Brute-force greedy references for the kernel and per-sensor fits. Every
// quantity is built from scalar loops over nodes and samples; the projection
// is a weighted least-squares solve by SVD rather than a Gram solve. Only the
// dictionary sampler and the seed derivation are shared with the library,
// since they define which atoms exist, not how the greedy step works.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ogak/dataset.hpp"
#include "ogak/dictionary.hpp"
#include "ogak/greedy.hpp"
#include "ogak/pointwise_oga.hpp"

namespace naive {

struct Step {
  std::size_t atom_index = 0;
  std::vector<double> alpha;
  double residual = 0.0;
};

struct Run {
  double initial_residual = 0.0;
  std::vector<Step> steps;
};

inline double relu_k(double t, unsigned k) {
  if (t <= 0.0) return 0.0;
  return std::pow(t, static_cast<double>(k));
}

inline double atom_value(const ogak::Atom& a, const std::vector<double>& z) {
  double t = a.bias;
  for (std::size_t i = 0; i < z.size(); ++i) t += a.direction[i] * z[i];
  return a.sign * relu_k(t, a.power);
}

/// Generic loop: features[j][l] of each candidate, inner product
/// scale * sum_l weight_l a_l b_l, target vector flattened the same way.
struct Space {
  std::vector<double> target;
  std::vector<double> weights;
  double scale = 1.0;

  double inner(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) s += weights[l] * a[l] * b[l];
    return scale * s;
  }
};

template <typename Feature>
Run greedy(const Space& space, std::size_t dim, const ogak::BiasBounds& bounds, std::size_t steps,
           std::size_t n_samples, unsigned power, std::uint64_t seed, Feature&& feature) {
  Run run;
  const std::size_t L = space.target.size();
  std::vector<double> residual = space.target;
  run.initial_residual = std::sqrt(space.inner(residual, residual));
  std::vector<std::vector<double>> chosen;
  for (std::size_t n = 1; n <= steps; ++n) {
    const auto dict = ogak::sample_dictionary(dim, power, bounds, n_samples,
                                              ogak::iteration_seed(seed, n));
    std::size_t best = 0;
    double best_score = -1e300;
    std::vector<double> best_feature;
    for (std::size_t i = 0; i < dict.size(); ++i) {
      const std::vector<double> g = feature(dict.atom(i));
      const double s = space.inner(residual, g);
      if (s > best_score) {
        best_score = s;
        best = i;
        best_feature = g;
      }
    }
    chosen.push_back(best_feature);
    // min || sqrt(W) (target - Phi alpha) || by SVD.
    Eigen::MatrixXd phi(L, chosen.size());
    Eigen::VectorXd y(L);
    for (std::size_t l = 0; l < L; ++l) {
      const double sw = std::sqrt(space.scale * space.weights[l]);
      y(l) = sw * space.target[l];
      for (std::size_t c = 0; c < chosen.size(); ++c) phi(l, c) = sw * chosen[c][l];
    }
    const Eigen::VectorXd alpha =
        phi.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
    for (std::size_t l = 0; l < L; ++l) {
      double fit = 0.0;
      for (std::size_t c = 0; c < chosen.size(); ++c) fit += alpha(c) * chosen[c][l];
      residual[l] = space.target[l] - fit;
    }
    Step step;
    step.atom_index = best;
    step.alpha.assign(alpha.data(), alpha.data() + alpha.size());
    step.residual = std::sqrt(space.inner(residual, residual));
    run.steps.push_back(step);
    // Residual at round-off: stop, any further choice would be noise.
    if (step.residual <= 1e-12 * run.initial_residual) break;
  }
  return run;
}

/// Full kernel fit: features are g * f_j on the output nodes, all j stacked.
inline Run kernel_fit(const ogak::DataSet& data, std::size_t steps, std::size_t n_samples,
                      unsigned power, std::uint64_t seed) {
  const std::size_t N = data.samples();
  const std::size_t mu = data.output.size();
  const std::size_t mf = data.input.size();
  const std::size_t d = data.input.dim;
  Space space;
  space.scale = 1.0 / static_cast<double>(N);
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t s = 0; s < mu; ++s) {
      space.target.push_back(data.responses(j, s));
      space.weights.push_back(data.output.weights(s));
    }
  }
  auto feature = [&](const ogak::Atom& a) {
    std::vector<double> out;
    std::vector<double> z(2 * d);
    for (std::size_t j = 0; j < N; ++j) {
      for (std::size_t s = 0; s < mu; ++s) {
        double acc = 0.0;
        for (std::size_t t = 0; t < mf; ++t) {
          for (std::size_t k = 0; k < d; ++k) {
            z[k] = data.output.nodes(s, k);
            z[d + k] = data.input.nodes(t, k);
          }
          acc += data.input.weights(t) * atom_value(a, z) * data.forcings(j, t);
        }
        out.push_back(acc);
      }
    }
    return out;
  };
  // Bias bounds: radius of the concatenated nodes.
  double rx = 0.0;
  double ry = 0.0;
  for (std::size_t s = 0; s < mu; ++s) rx = std::max(rx, data.output.nodes.row(s).squaredNorm());
  for (std::size_t t = 0; t < mf; ++t) ry = std::max(ry, data.input.nodes.row(t).squaredNorm());
  const double rho = std::sqrt(rx + ry);
  return greedy(space, 2 * d, {-rho, rho}, steps, n_samples, power, seed, feature);
}

/// One sensor of the pointwise fit: scalar responses u_j(x_s).
inline Run sensor_fit(const ogak::DataSet& data, std::size_t sensor, std::size_t steps,
                      std::size_t n_samples, unsigned power, std::uint64_t base_seed) {
  const std::size_t N = data.samples();
  const std::size_t mf = data.input.size();
  const std::size_t d = data.input.dim;
  Space space;
  space.scale = 1.0 / static_cast<double>(N);
  for (std::size_t j = 0; j < N; ++j) {
    space.target.push_back(data.responses(j, sensor));
    space.weights.push_back(1.0);
  }
  auto feature = [&](const ogak::Atom& a) {
    std::vector<double> out;
    std::vector<double> z(d);
    for (std::size_t j = 0; j < N; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < mf; ++t) {
        for (std::size_t k = 0; k < d; ++k) z[k] = data.input.nodes(t, k);
        acc += data.input.weights(t) * atom_value(a, z) * data.forcings(j, t);
      }
      out.push_back(acc);
    }
    return out;
  };
  double r = 0.0;
  for (std::size_t t = 0; t < mf; ++t) r = std::max(r, data.input.nodes.row(t).norm());
  return greedy(space, d, {-r, r}, steps, n_samples, power, ogak::sensor_seed(base_seed, sensor),
                feature);
}

}  // namespace naive
