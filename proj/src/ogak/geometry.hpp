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

#include "ogak/linalg.hpp"

namespace ogak {

/// Quadrature nodes and weights over a domain. Every integral in the library
/// is a weighted sum over one of these.
struct Mesh {
  std::size_t dim = 0;
  RowMatrix nodes;  // size() x dim
  Vector weights;   // non-negative, sums to volume
  double volume = 0.0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(nodes.rows()); }

  std::span<const double> node(std::size_t i) const noexcept {
    return {nodes.data() + i * dim, dim};
  }
};

/// Bias range [c1, c2] that brackets w.x for every node and unit direction.
struct BiasBounds {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Default cap on product-mesh node count.
inline constexpr std::size_t kDefaultProductCap = 4'000'000;

/// Builds a mesh from explicit weights; checks non-negativity and finiteness.
Mesh make_mesh(RowMatrix nodes, Vector weights);

/// Equal Monte-Carlo weights volume/m.
Mesh make_uniform_mesh(RowMatrix nodes, double volume);

/// m equispaced nodes on [a, b] (endpoints included), weights (b-a)/m.
Mesh uniform_grid_1d(double a, double b, std::size_t m);

/// Tensor grid on [0,1]^dim with `per_axis` nodes along each axis.
Mesh unit_cube_grid(std::size_t dim, std::size_t per_axis);

/// All concatenations [x_s, y_t] in row-major (s outer) order.
Mesh product_mesh(const Mesh& mx, const Mesh& my, std::size_t max_nodes = kDefaultProductCap);

/// Nodes picked out by `indices`, weights kept as they were.
Mesh sub_mesh(const Mesh& mesh, std::span<const std::size_t> indices);

/// c1 = -max|x|, c2 = +max|x| over the nodes.
BiasBounds bias_bounds(const Mesh& mesh);

/// Same bounds for product_mesh(mx, my), without materializing it.
BiasBounds bias_bounds_product(const Mesh& mx, const Mesh& my);

/// Sum of weights * values.
double integrate(const Mesh& mesh, std::span<const double> values);

}  // namespace ogak
