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

#include "ogak/dataset.hpp"

#include <fmt/format.h>

#include "ogak/error.hpp"

namespace ogak {

void validate(const DataSet& data) {
  require(data.forcings.rows() == data.responses.rows(),
          fmt::format("{} forcings but {} responses", data.forcings.rows(), data.responses.rows()));
  require(data.forcings.rows() >= 1, "data set has no samples");
  require(static_cast<std::size_t>(data.forcings.cols()) == data.input.size(),
          fmt::format("forcings have {} columns for a {}-node input mesh", data.forcings.cols(),
                      data.input.size()));
  require(static_cast<std::size_t>(data.responses.cols()) == data.output.size(),
          fmt::format("responses have {} columns for a {}-node output mesh",
                      data.responses.cols(), data.output.size()));
  require(data.forcings.allFinite() && data.responses.allFinite(), "data set values must be finite");
}

DataSet slice(const DataSet& data, std::size_t first, std::size_t count) {
  require(first + count <= data.samples(),
          fmt::format("rows [{}, {}) exceed {} samples", first, first + count, data.samples()));
  DataSet out;
  out.input = data.input;
  out.output = data.output;
  const auto f = static_cast<Eigen::Index>(first);
  const auto c = static_cast<Eigen::Index>(count);
  out.forcings = data.forcings.middleRows(f, c);
  out.responses = data.responses.middleRows(f, c);
  out.normalized = data.normalized;
  out.provenance = data.provenance;
  return out;
}

}  // namespace ogak
