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
#include <map>
#include <string>

#include "ogak/geometry.hpp"
#include "ogak/linalg.hpp"

namespace ogak {

/// N forcing/response pairs: row j of forcings lives on the input mesh,
/// row j of responses on the output mesh.
struct DataSet {
  Mesh input;
  Mesh output;
  RowMatrix forcings;   // N x m_f
  RowMatrix responses;  // N x m_u
  bool normalized = false;
  std::map<std::string, std::string> provenance;

  std::size_t samples() const noexcept { return static_cast<std::size_t>(forcings.rows()); }
};

/// Throws an argument error unless shapes agree with the meshes.
void validate(const DataSet& data);

/// Rows [first, first + count) as a new data set sharing the meshes.
DataSet slice(const DataSet& data, std::size_t first, std::size_t count);

}  // namespace ogak
