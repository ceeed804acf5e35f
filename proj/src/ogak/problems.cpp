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

#include "ogak/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "ogak/error.hpp"
#include "ogak/products.hpp"
#include "ogak/rng.hpp"

namespace ogak {

namespace {

void require_unit_interval(double x, double y) {
  require(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0,
          fmt::format("Green's function arguments ({}, {}) outside [0, 1]", x, y));
}

double distance(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), fmt::format("points have {} and {} coordinates", x.size(), y.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

double cell_antiderivative(double t) {
  // t ln|t| - t, continuous at 0.
  return t == 0.0 ? 0.0 : t * std::log(std::abs(t)) - t;
}

}  // namespace

double poisson1d_green(double x, double y) {
  require_unit_interval(x, y);
  return x <= y ? x * (y - 1.0) : y * (x - 1.0);
}

double helmholtz1d_green(double x, double y, double k) {
  require_unit_interval(x, y);
  const double sk = std::sin(k);
  require(std::isfinite(k) && k > 0.0 && std::abs(sk) > 1e-12,
          fmt::format("Helmholtz wave number {} is resonant or invalid", k));
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  return std::sin(k * lo) * std::sin(k * (hi - 1.0)) / (k * sk);
}

double cosine_kernel(std::span<const double> x, std::span<const double> y, double wave) {
  return std::cos(wave * std::numbers::pi * distance(x, y));
}

double logcos_kernel(std::span<const double> x, std::span<const double> y) {
  double r = distance(x, y);
  if (r <= 1e-12) r = kLogClamp;
  return std::log(r) * std::cos(2.0 * std::numbers::pi * r);
}

double log_kernel_discrete(double x, double y_k, double h) {
  require(h > 0.0 && std::isfinite(h), "cell width must be positive");
  const double a = std::abs(x - y_k);
  if (a == 0.0) return h * std::log(h / 2.0) - h;
  return cell_antiderivative(a + h / 2.0) - cell_antiderivative(a - h / 2.0);
}

const std::vector<std::string>& oracle_names() {
  static const std::vector<std::string> names{"poisson1d", "helmholtz1d", "cosine", "logcos",
                                              "logdiscrete"};
  return names;
}

KernelOracle make_oracle(const std::string& name, std::size_t dim, const OracleParams& params) {
  require(dim >= 1, "oracle dimension must be positive");
  KernelOracle o;
  o.name = name;
  o.dim = dim;
  o.params = params;
  if (name == "poisson1d" || name == "helmholtz1d" || name == "logdiscrete") {
    require(dim == 1, fmt::format("oracle {} is one-dimensional", name));
  }
  if (name == "poisson1d") {
    o.eval = [](std::span<const double> x, std::span<const double> y) {
      return poisson1d_green(x[0], y[0]);
    };
  } else if (name == "helmholtz1d") {
    const double k = params.helmholtz_k;
    helmholtz1d_green(0.5, 0.5, k);
    o.eval = [k](std::span<const double> x, std::span<const double> y) {
      return helmholtz1d_green(x[0], y[0], k);
    };
  } else if (name == "cosine") {
    const double wave = params.wave;
    o.eval = [wave](std::span<const double> x, std::span<const double> y) {
      return cosine_kernel(x, y, wave);
    };
  } else if (name == "logcos") {
    o.eval = [](std::span<const double> x, std::span<const double> y) { return logcos_kernel(x, y); };
  } else if (name == "logdiscrete") {
    const double h = params.h;
    require(h > 0.0, "logdiscrete needs a positive cell width h");
    o.eval = [h](std::span<const double> x, std::span<const double> y) {
      return log_kernel_discrete(x[0], y[0], h) / h;
    };
  } else {
    std::string known;
    for (const auto& n : oracle_names()) known += (known.empty() ? "" : ", ") + n;
    require(false, fmt::format("unknown oracle '{}' (known: {})", name, known));
  }
  return o;
}

RowMatrix tabulate(const KernelOracle& oracle, const Mesh& output, const Mesh& input) {
  require(output.dim == oracle.dim && input.dim == oracle.dim,
          fmt::format("oracle {} is {}-dimensional, meshes are {} and {}", oracle.name, oracle.dim,
                      output.dim, input.dim));
  RowMatrix table(static_cast<Eigen::Index>(output.size()), static_cast<Eigen::Index>(input.size()));
  for (std::size_t s = 0; s < output.size(); ++s) {
    for (std::size_t t = 0; t < input.size(); ++t) {
      table(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = oracle(output.node(s), input.node(t));
    }
  }
  return table;
}

Matrix gp_covariance(const Mesh& mesh, const GPConfig& config) {
  require(config.length_scale > 0.0 && std::isfinite(config.length_scale),
          "GP length scale must be positive");
  require(config.variance > 0.0, "GP variance must be positive");
  const auto m = static_cast<Eigen::Index>(mesh.size());
  const double inv = 1.0 / (2.0 * config.length_scale * config.length_scale);
  Matrix c(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    c(i, i) = config.variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double d2 = (mesh.nodes.row(i) - mesh.nodes.row(j)).squaredNorm();
      require(d2 > 0.0, fmt::format("mesh nodes {} and {} coincide", j, i));
      c(i, j) = c(j, i) = config.variance * std::exp(-d2 * inv);
    }
  }
  return c;
}

RowMatrix sample_gp_forcings(const Mesh& mesh, std::size_t n_samples, const GPConfig& config) {
  require(n_samples >= 1, "need at least one GP sample");
  require(config.jitter > 0.0, "GP jitter must be positive");
  require(config.rank_floor >= 0.0 && config.rank_floor < 1.0, "rank floor must lie in [0, 1)");
  const Matrix cov = gp_covariance(mesh, config);
  const auto m = cov.rows();
  const auto n = static_cast<Eigen::Index>(n_samples);
  Rng rng(config.seed);
  if (config.rank_floor > 0.0) {
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success) fail(ErrorKind::Generation, "covariance eigensolve failed");
    const Vector& lambda = eig.eigenvalues();
    const double top = lambda.maxCoeff();
    Eigen::Index keep = 0;
    for (Eigen::Index i = 0; i < m; ++i) keep += lambda[i] > config.rank_floor * top ? 1 : 0;
    // Eigen sorts ascending; the retained modes are the trailing columns.
    const Matrix basis = eig.eigenvectors().rightCols(keep) *
                         lambda.tail(keep).cwiseSqrt().asDiagonal();
    Matrix z(n, keep);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < keep; ++i) z(j, i) = rng.normal();
    }
    return z * basis.transpose();
  }
  double jitter = config.jitter;
  for (;;) {
    Matrix c = cov;
    c.diagonal().array() += jitter;
    const Eigen::LLT<Matrix> llt(c);
    if (llt.info() == Eigen::Success) {
      RowMatrix z(n, m);
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) z(j, i) = rng.normal();
      }
      return z * llt.matrixL().transpose();
    }
    if (jitter >= kMaxJitter) break;
    jitter = std::min(kMaxJitter, jitter * 10.0);
  }
  fail(ErrorKind::Generation,
       fmt::format("covariance factorization failed with jitter up to {}", kMaxJitter));
}

Mesh sunflower_disk(std::size_t m) {
  require(m >= 1, "disk point cloud needs at least one node");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  RowMatrix nodes(static_cast<Eigen::Index>(m), 2);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(m));
    const double theta = golden * static_cast<double>(i);
    nodes(static_cast<Eigen::Index>(i), 0) = r * std::cos(theta);
    nodes(static_cast<Eigen::Index>(i), 1) = r * std::sin(theta);
  }
  return make_uniform_mesh(std::move(nodes), std::numbers::pi);
}

std::pair<DataSet, DataSet> synthesize_dataset(const RowMatrix& table, const Mesh& input,
                                               const Mesh& output, const GPConfig& gp,
                                               const Synthesis& split) {
  require(split.train >= 1, "training split must be non-empty");
  require(static_cast<std::size_t>(table.rows()) == output.size() &&
              static_cast<std::size_t>(table.cols()) == input.size(),
          "kernel table does not match the meshes");
  const std::size_t total = split.train + split.test;
  DataSet all;
  all.input = input;
  all.output = output;
  all.forcings = sample_gp_forcings(input, total, gp);
  all.responses = kernel_apply_all(table, all.forcings, input);
  if (split.normalize) {
    const std::size_t m = input.size();
    for (Eigen::Index j = 0; j < all.forcings.rows(); ++j) {
      const double norm = std::sqrt(l2_inner({all.forcings.row(j).data(), m},
                                             {all.forcings.row(j).data(), m}, input));
      if (!(norm > 0.0)) fail(ErrorKind::Generation, fmt::format("forcing {} has zero norm", j));
      all.forcings.row(j) /= norm;
      all.responses.row(j) /= norm;
    }
  }
  all.normalized = split.normalize;
  all.provenance["gp_length_scale"] = fmt::format("{}", gp.length_scale);
  all.provenance["gp_seed"] = fmt::format("{}", gp.seed);
  all.provenance["gp_rank_floor"] = fmt::format("{}", gp.rank_floor);
  DataSet train = slice(all, 0, split.train);
  DataSet test = slice(all, split.train, split.test);
  train.provenance["split"] = "train";
  test.provenance["split"] = "test";
  return {std::move(train), std::move(test)};
}

std::pair<DataSet, DataSet> synthesize_dataset(const KernelOracle& oracle, const Mesh& input,
                                               const Mesh& output, const GPConfig& gp,
                                               const Synthesis& split) {
  auto out = synthesize_dataset(tabulate(oracle, output, input), input, output, gp, split);
  for (DataSet* d : {&out.first, &out.second}) {
    d->provenance["oracle"] = oracle.name;
    d->provenance["oracle_dim"] = fmt::format("{}", oracle.dim);
    d->provenance["oracle_wave"] = fmt::format("{}", oracle.params.wave);
    d->provenance["oracle_helmholtz_k"] = fmt::format("{}", oracle.params.helmholtz_k);
    d->provenance["oracle_h"] = fmt::format("{}", oracle.params.h);
  }
  return out;
}

std::optional<KernelOracle> oracle_from_provenance(
    const std::map<std::string, std::string>& provenance) {
  const auto name = provenance.find("oracle");
  if (name == provenance.end()) return std::nullopt;
  auto number = [&](const char* key, double fallback) {
    const auto it = provenance.find(key);
    if (it == provenance.end()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used == it->second.size()) return v;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::Format, fmt::format("provenance value {}='{}' is not a number", key, it->second));
  };
  OracleParams params;
  params.wave = number("oracle_wave", params.wave);
  params.helmholtz_k = number("oracle_helmholtz_k", params.helmholtz_k);
  params.h = number("oracle_h", params.h);
  const double dim = number("oracle_dim", 1.0);
  return make_oracle(name->second, static_cast<std::size_t>(dim), params);
}

}  // namespace ogak
