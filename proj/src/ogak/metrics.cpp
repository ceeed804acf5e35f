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

#include "ogak/metrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ogak/error.hpp"
#include "ogak/products.hpp"

namespace ogak {

namespace {

void require_same_shape(const RowMatrix& a, const RowMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          fmt::format("shape mismatch: {}x{} vs {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
}

}  // namespace

double relative_l2_solutions(const RowMatrix& predicted, const RowMatrix& reference,
                             const Mesh& output) {
  require_same_shape(predicted, reference);
  require(static_cast<std::size_t>(reference.cols()) == output.size(),
          "solution rows do not match the output mesh");
  require(reference.rows() >= 1, "no solutions to compare");
  const std::size_t m = output.size();
  double total = 0.0;
  for (Eigen::Index j = 0; j < reference.rows(); ++j) {
    const Eigen::RowVectorXd diff = predicted.row(j) - reference.row(j);
    const double ref = l2_inner({reference.row(j).data(), m}, {reference.row(j).data(), m}, output);
    if (!(ref > 0.0)) fail(ErrorKind::Metric, fmt::format("reference solution {} has zero norm", j));
    total += std::sqrt(l2_inner({diff.data(), m}, {diff.data(), m}, output) / ref);
  }
  return total / static_cast<double>(reference.rows());
}

double relative_l2_kernel(const RowMatrix& model, const RowMatrix& reference,
                          const Mesh& output, const Mesh& input) {
  require_same_shape(model, reference);
  require(static_cast<std::size_t>(reference.rows()) == output.size() &&
              static_cast<std::size_t>(reference.cols()) == input.size(),
          "kernel table does not match the meshes");
  const RowMatrix diff = model - reference;
  const Vector err = diff.array().square().matrix() * input.weights;
  const Vector ref = reference.array().square().matrix() * input.weights;
  const double num = output.weights.dot(err);
  const double den = output.weights.dot(ref);
  if (!(den > 0.0)) fail(ErrorKind::Metric, "reference kernel has zero norm");
  return std::sqrt(num / den);
}

RowMatrix pointwise_abs_error(const RowMatrix& a, const RowMatrix& b) {
  require_same_shape(a, b);
  return (a - b).cwiseAbs();
}

const char* to_string(TraceColumn column) noexcept {
  switch (column) {
    case TraceColumn::ResidualH: return "residual_H";
    case TraceColumn::EpsU: return "eps_u";
    case TraceColumn::EpsG: return "eps_G";
  }
  return "unknown";
}

RateFit fit_rate(std::span<const double> n, std::span<const double> values, std::size_t n_lo,
                 std::size_t n_hi) {
  require(n.size() == values.size(), "rate fit needs one value per n");
  require(n_lo < n_hi, fmt::format("rate window [{}, {}] is empty", n_lo, n_hi));
  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t lo = n_hi;
  std::size_t hi = n_lo;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < static_cast<double>(n_lo) || n[i] > static_cast<double>(n_hi)) continue;
    if (!(values[i] > 0.0) || !std::isfinite(values[i]) || !(n[i] > 0.0)) continue;
    xs.push_back(std::log(n[i]));
    ys.push_back(std::log(values[i]));
    lo = std::min(lo, static_cast<std::size_t>(n[i]));
    hi = std::max(hi, static_cast<std::size_t>(n[i]));
  }
  if (xs.size() < 3) {
    fail(ErrorKind::Fit, fmt::format("rate fit over [{}, {}] needs at least 3 positive points, got {}",
                                     n_lo, n_hi, xs.size()));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::Fit, "rate fit needs at least two distinct n");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_lo = lo;
  fit.n_hi = hi;
  fit.points = xs.size();
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

RateFit fit_rate(const FitTrace& trace, TraceColumn column, std::size_t n_lo, std::size_t n_hi) {
  std::vector<double> n;
  std::vector<double> v;
  for (const auto& rec : trace.records) {
    n.push_back(static_cast<double>(rec.n));
    switch (column) {
      case TraceColumn::ResidualH: v.push_back(rec.residual_H); break;
      case TraceColumn::EpsU: v.push_back(rec.eps_u); break;
      case TraceColumn::EpsG: v.push_back(rec.eps_G); break;
    }
  }
  return fit_rate(n, v, n_lo, n_hi);
}

RankDiagnostic data_rank_diagnostic(const RowMatrix& forcings, double threshold_rel) {
  require(forcings.rows() >= 1 && forcings.cols() >= 1, "rank diagnostic needs a non-empty matrix");
  require(threshold_rel >= 0.0, "rank threshold must be non-negative");
  const Matrix a = forcings;
  Eigen::BDCSVD<Matrix> svd(a);
  RankDiagnostic out;
  out.singular_values = svd.singularValues();
  const double top = out.singular_values.size() > 0 ? out.singular_values[0] : 0.0;
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) {
    if (out.singular_values[i] > threshold_rel * top) ++out.rank;
  }
  return out;
}

}  // namespace ogak
