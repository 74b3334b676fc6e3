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

#include "substrat/random.hpp"

#include <algorithm>
#include <unordered_set>

namespace substrat {

Index uniform_index(Rng& rng, Index bound) {
  std::uniform_int_distribution<Index> dist(0, bound - 1);
  return dist(rng);
}

double uniform01(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

bool bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01(rng) < p;
}

std::vector<Index> sample_distinct(Rng& rng, Index population, Index k) {
  std::vector<Index> out;
  out.reserve(k);
  if (k * 4 >= population) {
    // Dense case: partial Fisher-Yates over the whole range.
    std::vector<Index> all(population);
    for (Index i = 0; i < population; ++i) all[i] = i;
    for (Index i = 0; i < k; ++i) {
      Index j = i + uniform_index(rng, population - i);
      std::swap(all[i], all[j]);
    }
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  } else {
    std::unordered_set<Index> seen;
    seen.reserve(k * 2);
    for (Index j = population - k; j < population; ++j) {
      Index t = uniform_index(rng, j + 1);
      if (!seen.insert(t).second) {
        seen.insert(j);
        out.push_back(j);
      } else {
        out.push_back(t);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Index> pick_absent(Rng& rng, Index population, std::span<const Index> sorted_present) {
  if (sorted_present.size() >= population) return std::nullopt;
  // Draw a rank in the complement, then skip over present values.
  Index value = uniform_index(rng, population - sorted_present.size());
  for (Index p : sorted_present) {
    if (p <= value) {
      ++value;
    } else {
      break;
    }
  }
  return value;
}

}  // namespace substrat
