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

#include "ogak/products.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ogak/error.hpp"

namespace ogak {

namespace {

void require_len(std::size_t got, std::size_t want, const char* what) {
  require(got == want, fmt::format("{} has length {}, expected {}", what, got, want));
}

}  // namespace

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

double weighted_sum(std::span<const double> a, std::span<const double> b) {
  require_len(b.size(), a.size(), "second operand");
  if (a.size() <= kCompensateAbove) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
  }
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double v = a[i] * b[i];
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

double l2_inner(std::span<const double> u, std::span<const double> v, const Mesh& mesh) {
  require_len(u.size(), mesh.size(), "first function");
  require_len(v.size(), mesh.size(), "second function");
  double sum = 0.0;
  double carry = 0.0;
  const bool compensate = u.size() > kCompensateAbove;
  for (std::size_t t = 0; t < u.size(); ++t) {
    const double term = mesh.weights[static_cast<Eigen::Index>(t)] * u[t] * v[t];
    if (!compensate) {
      sum += term;
      continue;
    }
    const double next = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
    sum = next;
  }
  return sum + carry;
}

Vector kernel_apply(const RowMatrix& kernel, std::span<const double> f, const Mesh& input) {
  require_len(static_cast<std::size_t>(kernel.cols()), input.size(), "kernel table row");
  require_len(f.size(), input.size(), "forcing");
  const Eigen::Map<const Vector> fv(f.data(), static_cast<Eigen::Index>(f.size()));
  return kernel * input.weights.cwiseProduct(fv);
}

RowMatrix kernel_apply_all(const RowMatrix& kernel, const RowMatrix& forcings, const Mesh& input) {
  require_len(static_cast<std::size_t>(kernel.cols()), input.size(), "kernel table row");
  require_len(static_cast<std::size_t>(forcings.cols()), input.size(), "forcing row");
  const RowMatrix weighted = forcings * input.weights.asDiagonal();
  return weighted * kernel.transpose();
}

double semi_inner(const RowMatrix& g1, const RowMatrix& g2, const RowMatrix& forcings,
                  const Mesh& input, const Mesh& output) {
  require(g1.rows() == g2.rows() && g1.cols() == g2.cols(), "kernel tables differ in shape");
  require_len(static_cast<std::size_t>(g1.rows()), output.size(), "kernel table column");
  require(forcings.rows() >= 1, "semi-inner product needs at least one forcing");
  const RowMatrix u1 = kernel_apply_all(g1, forcings, input);
  const RowMatrix u2 = kernel_apply_all(g2, forcings, input);
  double total = 0.0;
  for (Eigen::Index j = 0; j < forcings.rows(); ++j) {
    total += l2_inner({u1.row(j).data(), output.size()}, {u2.row(j).data(), output.size()}, output);
  }
  return total / static_cast<double>(forcings.rows());
}

CorrelationField correlation_field(const RowMatrix& residuals, const Mesh& output,
                                   const RowMatrix& forcings, const Mesh& input) {
  require(residuals.rows() == forcings.rows(),
          fmt::format("{} residuals for {} forcings", residuals.rows(), forcings.rows()));
  require(residuals.rows() >= 1, "correlation field needs at least one sample");
  require_len(static_cast<std::size_t>(residuals.cols()), output.size(), "residual");
  require_len(static_cast<std::size_t>(forcings.cols()), input.size(), "forcing");
  CorrelationField field;
  field.scale = 1.0 / static_cast<double>(forcings.rows());
  field.values.noalias() = residuals.transpose() * forcings;
  field.values = (field.scale * output.weights).asDiagonal() * field.values *
                 input.weights.asDiagonal();
  return field;
}

double score_table(const RowMatrix& table, const CorrelationField& field) {
  require(table.rows() == field.values.rows() && table.cols() == field.values.cols(),
          "atom table and correlation field differ in shape");
  return table.cwiseProduct(field.values).sum();
}

}  // namespace ogak
