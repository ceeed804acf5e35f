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
#include <vector>

#include "ogak/geometry.hpp"
#include "ogak/greedy.hpp"
#include "ogak/linalg.hpp"

namespace ogak {

/// mean_j |u_j - u~_j| / |u_j| with norms taken by mesh quadrature.
double relative_l2_solutions(const RowMatrix& predicted, const RowMatrix& reference,
                             const Mesh& output);

/// |G - G~| / |G| over the product of the output and input meshes.
double relative_l2_kernel(const RowMatrix& model, const RowMatrix& reference,
                          const Mesh& output, const Mesh& input);

RowMatrix pointwise_abs_error(const RowMatrix& a, const RowMatrix& b);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t n_lo = 0;
  std::size_t n_hi = 0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

enum class TraceColumn { ResidualH, EpsU, EpsG };

const char* to_string(TraceColumn column) noexcept;

/// Least-squares line through (log n, log value) for n in [n_lo, n_hi];
/// non-positive or missing values are skipped.
RateFit fit_rate(std::span<const double> n, std::span<const double> values, std::size_t n_lo,
                 std::size_t n_hi);

RateFit fit_rate(const FitTrace& trace, TraceColumn column, std::size_t n_lo, std::size_t n_hi);

struct RankDiagnostic {
  Vector singular_values;  // non-increasing
  std::size_t rank = 0;
};

inline constexpr double kRankThreshold = 1e-8;

RankDiagnostic data_rank_diagnostic(const RowMatrix& forcings,
                                    double threshold_rel = kRankThreshold);

}  // namespace ogak
