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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ogak/error.hpp"
#include "ogak/geometry.hpp"
#include "ogak/problems.hpp"
#include "support.hpp"

using namespace ogak;

TEST_CASE("uniform grid uses equal weights") {
  const Mesh m = uniform_grid_1d(0.0, 1.0, 2);
  CHECK(m.size() == 2);
  CHECK(m.nodes(0, 0) == 0.0);
  CHECK(m.nodes(1, 0) == 1.0);
  CHECK(m.weights(0) == 0.5);
  CHECK(m.weights(1) == 0.5);
  CHECK(m.volume == 1.0);

  const Mesh big = uniform_grid_1d(-1.0, 1.0, 501);
  CHECK(big.size() == 501);
  for (Eigen::Index i = 0; i < big.weights.size(); ++i) CHECK(big.weights(i) == doctest::Approx(2.0 / 501).epsilon(1e-15));
  CHECK(big.nodes(0, 0) == -1.0);
  CHECK(big.nodes(500, 0) == 1.0);

  const Mesh five = uniform_grid_1d(0.0, 1.0, 5);
  CHECK(std::abs(five.weights.sum() - 1.0) <= 1e-15);
}

TEST_CASE("uniform grid rejects bad input") {
  auto kind = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Internal;
  };
  CHECK(kind([] { uniform_grid_1d(1.0, 0.0, 5); }) == ErrorKind::Argument);
  CHECK(kind([] { uniform_grid_1d(0.0, 1.0, 1); }) == ErrorKind::Argument);
  CHECK(kind([] { uniform_grid_1d(0.0, 0.0, 3); }) == ErrorKind::Argument);
}

TEST_CASE("product mesh") {
  RowMatrix a(1, 1);
  a << 0.3;
  RowMatrix b(1, 1);
  b << 0.7;
  Vector wa(1);
  wa << 2.0;
  Vector wb(1);
  wb << 3.0;
  const Mesh p1 = product_mesh(make_mesh(a, wa), make_mesh(b, wb));
  CHECK(p1.size() == 1);
  CHECK(p1.dim == 2);
  CHECK(p1.weights(0) == 6.0);

  const Mesh p2 = product_mesh(uniform_grid_1d(0, 1, 2), uniform_grid_1d(0, 1, 3));
  CHECK(p2.size() == 6);
  CHECK(std::abs(p2.weights.sum() - 1.0) <= 1e-12);

  const Mesh g = uniform_grid_1d(0, 1, 10);
  const Mesh p3 = product_mesh(g, g);
  REQUIRE(p3.size() == 100);
  std::size_t k = 0;
  for (std::size_t s = 0; s < 10; ++s) {
    for (std::size_t t = 0; t < 10; ++t, ++k) {
      CHECK(p3.nodes(k, 0) == g.nodes(s, 0));
      CHECK(p3.nodes(k, 1) == g.nodes(t, 0));
      CHECK(p3.weights(k) == g.weights(s) * g.weights(t));
      CHECK(p3.nodes(k, 0) >= 0.0);
      CHECK(p3.nodes(k, 1) <= 1.0);
    }
  }
  CHECK(std::abs(p3.volume - 1.0) <= 1e-12);
}

TEST_CASE("product mesh over the cap is a resource error") {
  const Mesh g = uniform_grid_1d(0, 1, 100);
  try {
    product_mesh(g, g, 5000);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Resource);
  }
}

TEST_CASE("bias bounds") {
  RowMatrix n2(2, 2);
  n2 << 1, 0, 0, 1;
  const BiasBounds b = bias_bounds(make_uniform_mesh(n2, 1.0));
  CHECK(b.c1 == -1.0);
  CHECK(b.c2 == 1.0);

  RowMatrix n1(1, 1);
  n1 << 0.5;
  const BiasBounds b1 = bias_bounds(make_uniform_mesh(n1, 1.0));
  CHECK(b1.c1 == -0.5);
  CHECK(b1.c2 == 0.5);

  const RowMatrix pts = testing::random_matrix(100, 2, 42);
  double rho = 0.0;
  for (Eigen::Index i = 0; i < 100; ++i) {
    rho = std::max(rho, std::sqrt(pts(i, 0) * pts(i, 0) + pts(i, 1) * pts(i, 1)));
  }
  const BiasBounds br = bias_bounds(make_uniform_mesh(pts, 4.0));
  CHECK(br.c1 == doctest::Approx(-rho).epsilon(1e-15));
  CHECK(br.c2 == doctest::Approx(rho).epsilon(1e-15));

  RowMatrix rev = pts.colwise().reverse();
  const BiasBounds bp = bias_bounds(make_uniform_mesh(rev, 4.0));
  CHECK(bp.c1 == br.c1);
  CHECK(bp.c2 == br.c2);
}

TEST_CASE("bias bounds reject an empty mesh") {
  Mesh empty;
  empty.dim = 2;
  empty.nodes.resize(0, 2);
  CHECK_THROWS_AS(bias_bounds(empty), Error);
}

TEST_CASE("integrating one returns the volume exactly") {
  const std::vector<Mesh> meshes = {uniform_grid_1d(0, 1, 501), uniform_grid_1d(-1, 1, 501),
                                    sunflower_disk(833), unit_cube_grid(3, 17)};
  for (const auto& m : meshes) {
    std::vector<double> one(m.size(), 1.0);
    CHECK(integrate(m, one) == m.volume);
  }
}

TEST_CASE("cube grid and sub mesh") {
  const Mesh c = unit_cube_grid(3, 17);
  CHECK(c.size() == 4913);
  CHECK(c.dim == 3);
  CHECK(c.volume == 1.0);
  const std::vector<std::size_t> pick = {0, 100, 4912};
  const Mesh s = sub_mesh(c, pick);
  CHECK(s.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(s.weights(i) == c.weights(pick[i]));
    for (std::size_t k = 0; k < 3; ++k) CHECK(s.nodes(i, k) == c.nodes(pick[i], k));
  }
}

TEST_CASE("mesh weights must be non-negative") {
  RowMatrix n(2, 1);
  n << 0, 1;
  Vector w(2);
  w << 0.5, -0.5;
  CHECK_THROWS_AS(make_mesh(n, w), Error);
}
