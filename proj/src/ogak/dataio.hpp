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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ogak/dataset.hpp"
#include "ogak/greedy.hpp"
#include "ogak/kernel_oga.hpp"
#include "ogak/linalg.hpp"
#include "ogak/pointwise_oga.hpp"

namespace ogak {

namespace fs = std::filesystem;

using Manifest = std::map<std::string, std::string>;

/// FNV-1a 64 of the file bytes as 16 hex digits.
std::string hash_file(const fs::path& path);

void write_manifest(const fs::path& path, const Manifest& manifest);
Manifest read_manifest(const fs::path& path);

/// One row per function, 17 significant digits, no header.
void write_matrix_csv(const fs::path& path, const RowMatrix& values);
RowMatrix read_matrix_csv(const fs::path& path, std::optional<std::size_t> cols = std::nullopt);

/// Header x1..xd,weight. On import the weight column is optional; missing
/// weights become volume / m.
void write_mesh_csv(const fs::path& path, const Mesh& mesh);
Mesh read_mesh_csv(const fs::path& path, std::optional<std::size_t> dim = std::nullopt,
                   std::optional<double> volume = std::nullopt);

/// Directory with manifest.txt, mesh_in.csv, mesh_out.csv, F.csv, U.csv.
void save_dataset(const fs::path& dir, const DataSet& data);
DataSet load_dataset(const fs::path& dir);

inline constexpr std::uint32_t kModelVersion = 1;

enum class ModelKind : std::uint32_t { Kernel = 1, Pointwise = 2 };

using AnyModel = std::variant<KernelModel, PointwiseModel>;

void save_model(const fs::path& path, const KernelModel& model);
void save_model(const fs::path& path, const PointwiseModel& model);
AnyModel load_model(const fs::path& path);

struct TraceRow {
  IterationRecord record;
  std::string sensor;  // empty without a sensor column
};

struct TraceTable {
  bool has_sensor = false;
  std::vector<TraceRow> rows;

  /// Records whose sensor label equals `sensor` (every row when the table
  /// has no sensor column).
  FitTrace select(const std::string& sensor = "all") const;
};

inline constexpr const char* kTraceHeader = "n,residual_H,eps_u,eps_G,score,gram_cond";

void write_trace(const fs::path& path, const FitTrace& trace);
/// Per-sensor rows followed by the aggregate rows labelled "all".
void write_trace(const fs::path& path, const PointwiseModel& model);
TraceTable read_trace(const fs::path& path);

}  // namespace ogak
