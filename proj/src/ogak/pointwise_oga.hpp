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
#include <functional>
#include <span>
#include <vector>

#include "ogak/dataset.hpp"
#include "ogak/greedy.hpp"
#include "ogak/kernel_oga.hpp"
#include "ogak/linalg.hpp"

namespace ogak {

/// One d-input model per fitted output sensor.
struct PointwiseModel {
  std::vector<std::size_t> sensors;  // output mesh indices, ascending
  std::vector<GreedyModel> models;   // parallel to sensors
  Mesh input;
  Mesh output;
  /// Weighted aggregate over sensors at matching n.
  FitTrace aggregate;
};

struct PointwiseHooks {
  const DataSet* eval = nullptr;
  const RowMatrix* reference_kernel = nullptr;
  /// Called in sensor order after each sensor finishes.
  std::function<void(std::size_t done, std::size_t total, std::size_t sensor,
                     const GreedyModel& model)> on_sensor;
};

/// Seed of the sub-model for output node `sensor`.
constexpr std::uint64_t sensor_seed(std::uint64_t base, std::size_t sensor) noexcept {
  return derive_seed(base ^ 0x5e5a5e5a5e5a5e5aULL, sensor);
}

/// Fits the listed sensors (all output nodes when empty). Per-sensor
/// breakdowns are recorded on that sensor's model and do not stop the run.
PointwiseModel fit_pointwise(const DataSet& data, const KernelFitConfig& config,
                             std::span<const std::size_t> sensors = {},
                             const PointwiseHooks& hooks = {});

/// Rows for the fitted sensors only, in model order.
RowMatrix assemble_kernel(const PointwiseModel& model);

/// Responses at the fitted sensors (N x sensors).
RowMatrix predict_pointwise(const PointwiseModel& model, const RowMatrix& forcings);
Vector predict_pointwise(const PointwiseModel& model, std::span<const double> forcing);

/// Output mesh restricted to the fitted sensors.
Mesh sensor_mesh(const PointwiseModel& model);

/// Evenly spaced subset of count indices out of m (all when count >= m).
std::vector<std::size_t> spread_sensors(std::size_t m, std::size_t count);

}  // namespace ogak
