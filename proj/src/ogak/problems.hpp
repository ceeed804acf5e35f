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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ogak/dataset.hpp"
#include "ogak/geometry.hpp"
#include "ogak/linalg.hpp"

namespace ogak {

double poisson1d_green(double x, double y);

/// Boundary-consistent form: sin(K min(x,y)) sin(K (max(x,y) - 1)) / (K sin K).
double helmholtz1d_green(double x, double y, double k = 15.0);

double cosine_kernel(std::span<const double> x, std::span<const double> y, double wave);

inline constexpr double kLogClamp = 1e-8;

/// log(r) cos(2 pi r); r below 1e-12 is clamped to kLogClamp.
double logcos_kernel(std::span<const double> x, std::span<const double> y);

/// Cell integral of ln|x - y| over [y_k - h/2, y_k + h/2].
double log_kernel_discrete(double x, double y_k, double h);

struct OracleParams {
  double wave = 1.0;
  double helmholtz_k = 15.0;
  /// Grid spacing for the discrete log kernel.
  double h = 0.0;
};

struct KernelOracle {
  std::string name;
  std::size_t dim = 1;
  OracleParams params;
  std::function<double(std::span<const double>, std::span<const double>)> eval;

  double operator()(std::span<const double> x, std::span<const double> y) const { return eval(x, y); }
};

/// poisson1d | helmholtz1d | cosine | logcos | logdiscrete
KernelOracle make_oracle(const std::string& name, std::size_t dim, const OracleParams& params = {});

const std::vector<std::string>& oracle_names();

/// Table (s, t) = G(x_s, y_t) over output x input nodes.
RowMatrix tabulate(const KernelOracle& oracle, const Mesh& output, const Mesh& input);

struct GPConfig {
  double length_scale = 0.1;
  double variance = 1.0;
  double jitter = 1e-10;
  std::uint64_t seed = 0;
  /// When positive, samples come from the covariance eigenbasis truncated to
  /// eigenvalues above rank_floor * max (band-limited, exactly low rank).
  /// Zero selects a jittered Cholesky factor.
  double rank_floor = 0.0;
};

inline constexpr double kMaxJitter = 1e-4;

/// variance * exp(-|x - x'|^2 / (2 l^2)) without jitter.
Matrix gp_covariance(const Mesh& mesh, const GPConfig& config);

/// N x m zero-mean Gaussian-process draws at the mesh nodes.
RowMatrix sample_gp_forcings(const Mesh& mesh, std::size_t n_samples, const GPConfig& config);

/// Vogel spiral point cloud in the unit disk with equal weights pi / m.
Mesh sunflower_disk(std::size_t m);

struct Synthesis {
  std::size_t train = 0;
  std::size_t test = 0;
  bool normalize = true;
};

/// Samples train + test forcings, integrates them against the oracle and
/// splits in order. Both members of a pair are scaled by 1/|f_j| when
/// normalizing.
std::pair<DataSet, DataSet> synthesize_dataset(const KernelOracle& oracle, const Mesh& input,
                                               const Mesh& output, const GPConfig& gp,
                                               const Synthesis& split);

/// Same, from an already tabulated kernel.
std::pair<DataSet, DataSet> synthesize_dataset(const RowMatrix& table, const Mesh& input,
                                               const Mesh& output, const GPConfig& gp,
                                               const Synthesis& split);

/// Rebuilds the oracle recorded by synthesize_dataset, if any.
std::optional<KernelOracle> oracle_from_provenance(
    const std::map<std::string, std::string>& provenance);

}  // namespace ogak
