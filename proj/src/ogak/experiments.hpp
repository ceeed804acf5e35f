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

// Pipeline steps shared by the CLI and the C API: dataset generation,
// training with live diagnostics, evaluation, and the reproduction presets.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ogak/dataio.hpp"
#include "ogak/dataset.hpp"
#include "ogak/kernel_oga.hpp"
#include "ogak/metrics.hpp"
#include "ogak/pointwise_oga.hpp"
#include "ogak/problems.hpp"

namespace ogak {

const char* version_string() noexcept;

struct GenerateConfig {
  std::string problem = "poisson1d";  // oracle name
  std::size_t dim = 1;
  /// interval, disk or cube; empty picks interval for d=1, disk for d=2, cube otherwise.
  std::string domain;
  /// Interval nodes, disk nodes, or cube nodes per axis.
  std::size_t grid = 501;
  /// Imported point cloud; overrides the built-in domain.
  std::string mesh_path;
  /// Domain volume for an imported mesh without a weight column.
  double mesh_volume = 0.0;
  /// When nonzero the output mesh is this many spread nodes of the input mesh.
  std::size_t output_sensors = 0;
  OracleParams oracle;
  GPConfig gp;
  Synthesis split{500, 200, true};
};

Mesh build_domain(const GenerateConfig& config);

std::pair<DataSet, DataSet> generate(const GenerateConfig& config);

/// Writes <dir>/train and <dir>/test; refuses an existing dir unless force.
void write_generated(const fs::path& dir, const std::pair<DataSet, DataSet>& data, bool force);

/// Refuses an existing path unless force, in which case it is removed.
void prepare_output(const fs::path& path, bool force);

enum class TrainMode { Kernel, Pointwise };

TrainMode parse_mode(const std::string& text);

struct TrainConfig {
  TrainMode mode = TrainMode::Kernel;
  KernelFitConfig fit;
  /// Pointwise only. Empty with sensor_count == 0 means every output node.
  std::vector<std::size_t> sensors;
  std::size_t sensor_count = 0;
};

/// Progress row: sensor is kNoSensor for the direct fit.
inline constexpr std::size_t kNoSensor = std::numeric_limits<std::size_t>::max();

struct TrainCallbacks {
  std::function<void(std::size_t sensor, const IterationRecord&)> on_record;
  std::function<void(std::size_t done, std::size_t total, std::size_t sensor,
                     const GreedyModel&)> on_sensor;
};

struct TrainOutcome {
  AnyModel model;
  std::size_t breakdowns = 0;  // sensors (or the single model) that ended in breakdown
};

/// Reference kernel on (output x input) for eps_G, when the data names an oracle.
std::optional<RowMatrix> reference_kernel(const DataSet& data);

TrainOutcome train(const DataSet& data, const DataSet* eval, const TrainConfig& config,
                   const TrainCallbacks& callbacks = {});

const FitTrace& trace_of(const AnyModel& model);

void write_model_trace(const fs::path& path, const AnyModel& model);

std::size_t breakdown_count(const AnyModel& model);

struct EvalReport {
  double eps_u = kMissing;
  double eps_G = kMissing;
  RowMatrix abs_error;  // test samples x evaluated output nodes
};

/// eps_G needs an oracle: the explicit one, else the one recorded in the data.
EvalReport evaluate(const AnyModel& model, const DataSet& data,
                    const std::optional<KernelOracle>& oracle, bool want_kernel);

struct RunManifestInfo {
  std::string command;
  std::uint64_t seed = 0;
  std::size_t dict_samples = 0;
  unsigned power = 1;
  std::size_t n_max = 0;
  bool normalized = false;
  std::string mode;
  fs::path dataset;
};

/// Writes the key=value run manifest, hashing <dataset>/manifest.txt when present.
void write_run_manifest(const fs::path& path, const RunManifestInfo& info, const Manifest& extra = {});

// ---- reproduction presets

enum class Compare { LessEqual, Less };

struct Band {
  std::string name;
  double value = kMissing;
  double target = 0.0;
  Compare op = Compare::LessEqual;
  bool gate = true;  // informational bands never fail a run
  bool passed() const noexcept;
};

struct PresetResult {
  std::string preset;
  std::vector<Band> bands;
  std::size_t breakdowns = 0;
  /// Whether a breakdown fails the run: direct fits yes, pointwise sensors
  /// stopping at their numerical floor no.
  bool breakdown_fatal = true;
  std::string report;  // extra structured-text sections
  bool passed() const noexcept;
};

struct ReproOptions {
  fs::path out;
  std::uint64_t seed = 7;
  unsigned threads = 1;
  bool force = false;
  std::function<void(const std::string&)> log;
};

const std::vector<std::string>& preset_names();

/// Runs generate, train, eval and rate for a preset; writes summary.txt and
/// run_manifest.txt under options.out.
PresetResult run_preset(const std::string& name, const ReproOptions& options);

std::string render_summary(const PresetResult& result);

}  // namespace ogak
