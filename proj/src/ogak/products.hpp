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
#include <span>

#include "ogak/geometry.hpp"
#include "ogak/linalg.hpp"

namespace ogak {

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

/// Sum of a[i]*b[i]; compensated once the length passes kCompensateAbove.
double weighted_sum(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kCompensateAbove = 10'000;

/// Discrete L2(mesh) inner product: sum_t w_t u_t v_t.
double l2_inner(std::span<const double> u, std::span<const double> v, const Mesh& mesh);

/// (G * f)(x_s) = sum_t w_t G(x_s, y_t) f(y_t) for a kernel table of shape
/// (output nodes) x (input nodes).
Vector kernel_apply(const RowMatrix& kernel, std::span<const double> f, const Mesh& input);

/// Row-wise kernel_apply for a whole set of forcings (N x m_f) -> (N x m_u).
RowMatrix kernel_apply_all(const RowMatrix& kernel, const RowMatrix& forcings, const Mesh& input);

/// Data semi-inner product (1/N) sum_j (G1 * f_j, G2 * f_j)_{L2(output)}.
double semi_inner(const RowMatrix& g1, const RowMatrix& g2, const RowMatrix& forcings,
                  const Mesh& input, const Mesh& output);

/// M(s,t) = (1/N) w_out_s w_in_t sum_j r_j(x_s) f_j(y_t). Scoring an atom
/// against the current residuals is then sum_{s,t} g(x_s, y_t) M(s,t).
struct CorrelationField {
  RowMatrix values;  // m_u x m_f
  double scale = 1.0;  // the 1/N factor already folded into values
};

CorrelationField correlation_field(const RowMatrix& residuals, const Mesh& output,
                                   const RowMatrix& forcings, const Mesh& input);

/// sum_{s,t} table(s,t) * field(s,t).
double score_table(const RowMatrix& table, const CorrelationField& field);

}  // namespace ogak
