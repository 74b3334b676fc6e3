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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace substrat {

using Index = std::size_t;

/// Every stochastic routine takes one of these by reference; seeding it is
/// the caller's determinism contract.
using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20230101;

/// Uniform integer in [0, bound). `bound` must be positive.
Index uniform_index(Rng& rng, Index bound);

double uniform01(Rng& rng);

bool bernoulli(Rng& rng, double p);

/// `k` distinct values from [0, population), sorted ascending (Floyd's algorithm).
std::vector<Index> sample_distinct(Rng& rng, Index population, Index k);

/// Uniformly picks a value in [0, population) that is not in `sorted_present`.
/// Returns nullopt when the complement is empty.
std::optional<Index> pick_absent(Rng& rng, Index population, std::span<const Index> sorted_present);

}  // namespace substrat
