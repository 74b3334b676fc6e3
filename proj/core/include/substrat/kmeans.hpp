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
#include <span>
#include <vector>

#include "substrat/random.hpp"

namespace substrat {

/// Dense row-major point matrix.
struct PointSet {
  std::vector<double> data;
  std::size_t dim = 0;

  std::size_t size() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
  std::span<const double> point(std::size_t i) const { return {data.data() + i * dim, dim}; }
};

struct KMeansOptions {
  std::size_t max_iterations = 50;
  /// Stop when the relative inertia change drops below this.
  double tolerance = 1e-6;
};

struct KMeansResult {
  PointSet centroids;
  std::vector<std::size_t> labels;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// Number of pairwise-distinct points (exact comparison).
std::size_t count_distinct(const PointSet& points);

/// Lloyd's algorithm with k-means++ seeding. Requires 1 <= k <= count_distinct(points).
KMeansResult kmeans(const PointSet& points, std::size_t k, Rng& rng, const KMeansOptions& options = {});

/// For each centroid in order, the nearest point not already picked.
/// Returns k distinct point indices.
std::vector<std::size_t> nearest_representatives(const PointSet& points, const PointSet& centroids);

}  // namespace substrat
