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

/// @file synthetic.hpp
/// Seeded categorical datasets for tests, benchmarks and demos.

#pragma once

#include <cstdint>

#include "substrat/dataset.hpp"

namespace substrat {

struct SyntheticSpec {
  Index rows = 1000;
  /// Total columns, target included (the target is last, named "y").
  Index cols = 12;
  std::size_t classes = 2;
  /// Probability that a feature copies a class-dependent value instead of a
  /// uniform draw.
  double signal = 0.3;
  std::uint64_t seed = 1;
};

/// Feature j (named "f<j>") has 2 + 3j possible values; with probability
/// `signal` it takes (y + j) mod its cardinality.
Dataset make_synthetic(const SyntheticSpec& spec);

}  // namespace substrat
