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

#include "ogak/dictionary.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ogak/error.hpp"
#include "ogak/rng.hpp"

namespace ogak {

double Atom::pre_activation(std::span<const double> z) const {
  require(z.size() == direction.size(),
          fmt::format("point has {} coordinates, atom expects {}", z.size(), direction.size()));
  double t = bias;
  for (std::size_t i = 0; i < z.size(); ++i) t += direction[i] * z[i];
  return t;
}

double Atom::operator()(std::span<const double> z) const {
  return sign * ridge(pre_activation(z), power);
}

Atom RandomDictionary::atom(std::size_t index) const {
  require(index < size(), fmt::format("atom index {} out of range ({})", index, size()));
  const std::size_t sample = index / 2;
  Atom a;
  a.sign = index % 2 == 0 ? 1 : -1;
  a.direction.assign(directions.data() + sample * dim, directions.data() + (sample + 1) * dim);
  a.bias = biases[static_cast<Eigen::Index>(sample)];
  a.power = power;
  return a;
}

std::vector<double> hypersphere_map(std::span<const double> phi) {
  const std::size_t d = phi.size() + 1;
  require(d >= 2, "hypersphere map needs at least one angle");
  for (std::size_t j = 0; j + 1 < phi.size(); ++j) {
    require(phi[j] >= 0.0 && phi[j] <= std::numbers::pi,
            fmt::format("angle phi_{} = {} outside [0, pi]", j + 1, phi[j]));
  }
  require(phi.back() >= 0.0 && phi.back() < 2.0 * std::numbers::pi,
          fmt::format("angle phi_{} = {} outside [0, 2pi)", phi.size(), phi.back()));
  std::vector<double> omega(d);
  double sin_prod = 1.0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    omega[i] = sin_prod * std::cos(phi[i]);
    sin_prod *= std::sin(phi[i]);
  }
  omega[d - 1] = sin_prod;
  return omega;
}

RandomDictionary sample_dictionary(std::size_t dim, unsigned power, const BiasBounds& bounds,
                                   std::size_t n_samples, std::uint64_t seed) {
  require(dim >= 1, "dictionary dimension must be positive");
  require(n_samples >= 1, "dictionary needs at least one sample");
  require(bounds.c1 <= bounds.c2, "bias bounds need c1 <= c2");
  RandomDictionary dict;
  dict.dim = dim;
  dict.power = power;
  dict.seed = seed;
  dict.directions.resize(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(dim));
  dict.biases.resize(static_cast<Eigen::Index>(n_samples));
  Rng rng(seed);
  std::vector<double> phi(dim > 1 ? dim - 1 : 0);
  for (std::size_t i = 0; i < n_samples; ++i) {
    if (dim == 1) {
      dict.directions(i, 0) = 1.0;
    } else {
      for (std::size_t j = 0; j + 1 < phi.size(); ++j) phi[j] = rng.uniform(0.0, std::numbers::pi);
      phi.back() = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const auto w = hypersphere_map(phi);
      for (std::size_t k = 0; k < dim; ++k) dict.directions(i, k) = w[k];
    }
    dict.biases[static_cast<Eigen::Index>(i)] = rng.uniform(bounds.c1, bounds.c2);
  }
  return dict;
}

void append_samples(RandomDictionary& dict, std::span<const Atom> atoms) {
  if (atoms.empty()) return;
  const auto old = static_cast<Eigen::Index>(dict.n_samples());
  const auto extra = static_cast<Eigen::Index>(atoms.size());
  dict.directions.conservativeResize(old + extra, static_cast<Eigen::Index>(dict.dim));
  dict.biases.conservativeResize(old + extra);
  for (Eigen::Index i = 0; i < extra; ++i) {
    const Atom& a = atoms[static_cast<std::size_t>(i)];
    require(a.dim() == dict.dim, "appended atom dimension differs from the dictionary");
    require(a.power == dict.power, "appended atom power differs from the dictionary");
    for (std::size_t k = 0; k < dict.dim; ++k) dict.directions(old + i, static_cast<Eigen::Index>(k)) = a.direction[k];
    dict.biases[old + i] = a.bias;
  }
}

RowMatrix evaluate_atoms(const RandomDictionary& dict, const Mesh& mesh) {
  require(mesh.dim == dict.dim,
          fmt::format("mesh dimension {} differs from atom dimension {}", mesh.dim, dict.dim));
  const std::size_t m = mesh.size();
  RowMatrix table(static_cast<Eigen::Index>(dict.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < dict.n_samples(); ++i) {
    const auto w = dict.direction(i);
    const double beta = dict.biases[static_cast<Eigen::Index>(i)];
    for (std::size_t t = 0; t < m; ++t) {
      double z = beta;
      for (std::size_t k = 0; k < dict.dim; ++k) z += w[k] * mesh.nodes(t, k);
      const double v = ridge(z, dict.power);
      table(2 * i, t) = v;
      table(2 * i + 1, t) = -v;
    }
  }
  return table;
}

Vector evaluate_atom(const Atom& atom, const Mesh& mesh) {
  require(mesh.dim == atom.dim(),
          fmt::format("mesh dimension {} differs from atom dimension {}", mesh.dim, atom.dim()));
  Vector values(static_cast<Eigen::Index>(mesh.size()));
  for (std::size_t t = 0; t < mesh.size(); ++t) {
    double z = atom.bias;
    for (std::size_t k = 0; k < atom.dim(); ++k) z += atom.direction[k] * mesh.nodes(t, k);
    values[static_cast<Eigen::Index>(t)] = atom.sign * ridge(z, atom.power);
  }
  return values;
}

}  // namespace ogak
