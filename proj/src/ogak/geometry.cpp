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

#include "ogak/geometry.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "ogak/error.hpp"
#include "ogak/products.hpp"

namespace ogak {

namespace {

double max_norm_sq(const Mesh& mesh) {
  double best = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    best = std::max(best, mesh.nodes.row(static_cast<Eigen::Index>(i)).squaredNorm());
  }
  return best;
}

}  // namespace

Mesh make_mesh(RowMatrix nodes, Vector weights) {
  require(nodes.rows() > 0, "mesh needs at least one node");
  require(nodes.cols() > 0, "mesh dimension must be positive");
  require(weights.size() == nodes.rows(),
          fmt::format("mesh has {} nodes but {} weights", nodes.rows(), weights.size()));
  require(nodes.allFinite(), "mesh nodes must be finite");
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    require(std::isfinite(weights[i]) && weights[i] >= 0.0,
            fmt::format("mesh weight {} is negative or not finite", i));
  }
  Mesh mesh;
  mesh.dim = static_cast<std::size_t>(nodes.cols());
  mesh.nodes = std::move(nodes);
  mesh.weights = std::move(weights);
  mesh.volume = compensated_sum({mesh.weights.data(), mesh.size()});
  require(mesh.volume > 0.0, "mesh volume must be positive");
  return mesh;
}

Mesh make_uniform_mesh(RowMatrix nodes, double volume) {
  require(volume > 0.0 && std::isfinite(volume), "mesh volume must be positive");
  const auto m = nodes.rows();
  require(m > 0, "mesh needs at least one node");
  return make_mesh(std::move(nodes), Vector::Constant(m, volume / static_cast<double>(m)));
}

Mesh uniform_grid_1d(double a, double b, std::size_t m) {
  require(std::isfinite(a) && std::isfinite(b) && a < b,
          fmt::format("uniform grid needs a < b, got [{}, {}]", a, b));
  require(m >= 2, fmt::format("uniform grid needs at least 2 nodes, got {}", m));
  RowMatrix nodes(m, 1);
  const double h = (b - a) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) nodes(i, 0) = a + h * static_cast<double>(i);
  nodes(m - 1, 0) = b;
  return make_uniform_mesh(std::move(nodes), b - a);
}

Mesh unit_cube_grid(std::size_t dim, std::size_t per_axis) {
  require(dim >= 1, "cube grid dimension must be positive");
  require(per_axis >= 2, "cube grid needs at least 2 nodes per axis");
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) total *= per_axis;
  RowMatrix nodes(total, dim);
  const double h = 1.0 / static_cast<double>(per_axis - 1);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    // Last coordinate varies fastest.
    for (std::size_t k = dim; k-- > 0;) {
      const std::size_t idx = rest % per_axis;
      rest /= per_axis;
      nodes(i, k) = idx + 1 == per_axis ? 1.0 : h * static_cast<double>(idx);
    }
  }
  return make_uniform_mesh(std::move(nodes), 1.0);
}

Mesh product_mesh(const Mesh& mx, const Mesh& my, std::size_t max_nodes) {
  const std::size_t mxs = mx.size();
  const std::size_t mys = my.size();
  if (mxs != 0 && mys > max_nodes / mxs) {
    fail(ErrorKind::Resource, fmt::format("product mesh of {} x {} nodes exceeds the cap of {}",
                                          mxs, mys, max_nodes));
  }
  const std::size_t dim = mx.dim + my.dim;
  RowMatrix nodes(mxs * mys, dim);
  Vector weights(mxs * mys);
  for (std::size_t s = 0; s < mxs; ++s) {
    for (std::size_t t = 0; t < mys; ++t) {
      const std::size_t row = s * mys + t;
      for (std::size_t k = 0; k < mx.dim; ++k) nodes(row, k) = mx.nodes(s, k);
      for (std::size_t k = 0; k < my.dim; ++k) nodes(row, mx.dim + k) = my.nodes(t, k);
      weights[row] = mx.weights[s] * my.weights[t];
    }
  }
  return make_mesh(std::move(nodes), std::move(weights));
}

Mesh sub_mesh(const Mesh& mesh, std::span<const std::size_t> indices) {
  require(!indices.empty(), "sub-mesh needs at least one node");
  RowMatrix nodes(indices.size(), mesh.dim);
  Vector weights(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] < mesh.size(),
            fmt::format("node index {} out of range for a {}-node mesh", indices[i], mesh.size()));
    nodes.row(i) = mesh.nodes.row(indices[i]);
    weights[i] = mesh.weights[indices[i]];
  }
  return make_mesh(std::move(nodes), std::move(weights));
}

BiasBounds bias_bounds(const Mesh& mesh) {
  require(mesh.size() > 0, "bias bounds need a non-empty mesh");
  const double rho = std::sqrt(max_norm_sq(mesh));
  return {-rho, rho};
}

BiasBounds bias_bounds_product(const Mesh& mx, const Mesh& my) {
  require(mx.size() > 0 && my.size() > 0, "bias bounds need non-empty meshes");
  const double rho = std::sqrt(max_norm_sq(mx) + max_norm_sq(my));
  return {-rho, rho};
}

double integrate(const Mesh& mesh, std::span<const double> values) {
  require(values.size() == mesh.size(),
          fmt::format("integrand has {} values for a {}-node mesh", values.size(), mesh.size()));
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    terms[i] = mesh.weights[static_cast<Eigen::Index>(i)] * values[i];
  }
  return compensated_sum(terms);
}

}  // namespace ogak
