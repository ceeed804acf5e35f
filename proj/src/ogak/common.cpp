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

#include "ogak/error.hpp"
#include "ogak/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ogak {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Argument: return "argument error";
    case ErrorKind::Resource: return "resource error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Format: return "load error";
    case ErrorKind::Metric: return "metric error";
    case ErrorKind::Generation: return "generation error";
    case ErrorKind::Fit: return "fit error";
    case ErrorKind::Internal: return "internal error";
  }
  return "unknown error";
}

unsigned default_threads() {
  if (const char* env = std::getenv("OGAK_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace ogak
