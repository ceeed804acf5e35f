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
#include <span>
#include <vector>

#include "ogak/geometry.hpp"
#include "ogak/linalg.hpp"

namespace ogak {

/// One signed ReLU^k ridge function: sign * max(0, direction . z + bias)^power.
struct Atom {
  int sign = 1;
  std::vector<double> direction;
  double bias = 0.0;
  unsigned power = 1;

  std::size_t dim() const noexcept { return direction.size(); }
  double pre_activation(std::span<const double> z) const;
  double operator()(std::span<const double> z) const;
};

/// max(0, t)^k with 0^0 = 0, so an inactive half-space contributes nothing
/// for every k including 0.
inline double ridge(double t, unsigned k) noexcept {
  if (t <= 0.0) return 0.0;
  double v = 1.0;
  for (unsigned i = 0; i < k; ++i) v *= t;
  return v;
}

/// Applies ridge(., k) elementwise in place.
inline void ridge_inplace(Eigen::ArrayXd& z, unsigned k) {
  switch (k) {
    case 0: z = (z > 0.0).cast<double>(); break;
    case 1: z = z.max(0.0); break;
    case 2: z = z.max(0.0).square(); break;
    default: z = z.max(0.0).pow(static_cast<double>(k)); break;
  }
}

/// 2 * n_samples atoms; sample i yields atom 2i (sign +1) and atom 2i+1
/// (sign -1) with the same direction and bias.
struct RandomDictionary {
  std::size_t dim = 0;
  unsigned power = 1;
  std::uint64_t seed = 0;
  RowMatrix directions;  // n_samples x dim
  Vector biases;         // n_samples

  std::size_t n_samples() const noexcept { return static_cast<std::size_t>(biases.size()); }
  std::size_t size() const noexcept { return 2 * n_samples(); }
  Atom atom(std::size_t index) const;
  std::span<const double> direction(std::size_t sample) const noexcept {
    return {directions.data() + sample * dim, dim};
  }
};

/// Hyperspherical coordinates (phi_1..phi_{d-1}) -> unit vector in R^d.
std::vector<double> hypersphere_map(std::span<const double> phi);

/// Draws n_samples (phi, beta) uniformly on [0,pi]^{d-2} x [0,2pi) x [c1,c2].
/// For d = 1 the direction is +1 and the atom sign supplies the reflection.
RandomDictionary sample_dictionary(std::size_t dim, unsigned power, const BiasBounds& bounds,
                                   std::size_t n_samples, std::uint64_t seed);

/// Adds (direction, bias) samples, typically planted atoms for tests.
void append_samples(RandomDictionary& dict, std::span<const Atom> atoms);

/// (atoms x nodes) table of atom values on the mesh.
RowMatrix evaluate_atoms(const RandomDictionary& dict, const Mesh& mesh);

/// Values of one atom at every mesh node.
Vector evaluate_atom(const Atom& atom, const Mesh& mesh);

}  // namespace ogak
