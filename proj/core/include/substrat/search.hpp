// Copyright 2026 The SubStrat Authors
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

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "substrat/dataset.hpp"
#include "substrat/measures.hpp"

namespace substrat {

using Seconds = std::chrono::duration<double>;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  Seconds elapsed() const { return std::chrono::steady_clock::now() - start_; }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct GenerationStats {
  std::size_t generation = 0;
  double best_fitness = 0.0;        // best ever, up to and including this generation
  double generation_best = 0.0;     // best in this generation's population
  double mean_fitness = 0.0;
};

/// Outcome of any DST search (Gen-DST, brute force, or a baseline).
struct SearchResult {
  std::string strategy;
  SubsetIndices best;
  LossValue best_loss;
  std::size_t generations_run = 0;
  std::vector<GenerationStats> trace;
  /// Loss requests made, memo hits included.
  std::uint64_t evaluations = 0;
  /// Deterministic cost: dataset cells read while searching.
  std::uint64_t work_units = 0;
  Seconds wall_time{0.0};
};

}  // namespace substrat
