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
#include <functional>
#include <span>
#include <vector>

#include "ogak/dataset.hpp"
#include "ogak/dictionary.hpp"
#include "ogak/greedy.hpp"
#include "ogak/linalg.hpp"

namespace ogak {

inline constexpr std::size_t kDefaultCacheLimit = std::size_t{3} << 30;

struct KernelFitConfig {
  std::size_t n_max = 256;
  std::size_t dict_samples = 512;
  std::uint64_t seed = 0;
  unsigned power = 1;
  bool normalized = false;
  Cadence cadence;
  unsigned threads = 1;
  /// Bytes allowed for cached per-atom response fields.
  std::size_t cache_limit = kDefaultCacheLimit;
  std::vector<Atom> inject;
};

/// Optional diagnostics attached to a fit.
struct FitHooks {
  /// Held-out pairs for eps_u, usually the test split.
  const DataSet* eval = nullptr;
  /// Reference kernel on (output x input) nodes for eps_G.
  const RowMatrix* reference_kernel = nullptr;
  std::function<void(const IterationRecord&)> on_record;
};

struct KernelModel {
  GreedyModel model;  // atoms act on [x, y] with x in the output domain
  Mesh input;
  Mesh output;
};

GreedyOptions greedy_options(const KernelFitConfig& config);

KernelModel fit_kernel(const DataSet& data, const KernelFitConfig& config,
                       const FitHooks& hooks = {});

/// Values of one 2d-input atom at every [x_s, y_t].
RowMatrix kernel_table(const Atom& atom, const Mesh& output, const Mesh& input);

RowMatrix evaluate_kernel(const KernelModel& model, const Mesh& output, const Mesh& input);
RowMatrix evaluate_kernel(const KernelModel& model);

Vector predict(const KernelModel& model, std::span<const double> forcing);
RowMatrix predict_all(const KernelModel& model, const RowMatrix& forcings);

}  // namespace ogak
