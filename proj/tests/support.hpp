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

// Small shared fixtures for the unit tests.

#include <cstdint>
#include <filesystem>
#include <string>

#include "ogak/dataset.hpp"
#include "ogak/geometry.hpp"
#include "ogak/linalg.hpp"
#include "ogak/products.hpp"
#include "ogak/rng.hpp"

namespace testing {

inline ogak::RowMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  ogak::Rng rng(seed);
  ogak::RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  }
  return m;
}

/// N random forcings on the input mesh, responses from `table` by quadrature.
inline ogak::DataSet dataset_from_table(const ogak::RowMatrix& table, const ogak::Mesh& output,
                                        const ogak::Mesh& input, std::size_t n,
                                        std::uint64_t seed) {
  ogak::DataSet d;
  d.input = input;
  d.output = output;
  d.forcings = random_matrix(n, input.size(), seed);
  d.responses = ogak::kernel_apply_all(table, d.forcings, input);
  return d;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ogak_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
