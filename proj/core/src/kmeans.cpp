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

#include "substrat/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "substrat/error.hpp"

namespace substrat {

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

std::size_t count_distinct(const PointSet& points) {
  const std::size_t n = points.size();
  if (n == 0) return 0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t x, std::size_t y) {
    auto px = points.point(x);
    auto py = points.point(y);
    return std::lexicographical_compare(px.begin(), px.end(), py.begin(), py.end());
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t distinct = 1;
  for (std::size_t k = 1; k < n; ++k) {
    auto a = points.point(order[k - 1]);
    auto b = points.point(order[k]);
    if (!std::equal(a.begin(), a.end(), b.begin())) ++distinct;
  }
  return distinct;
}

namespace {

PointSet plus_plus_seeds(const PointSet& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.size();
  PointSet seeds{{}, points.dim};
  seeds.data.reserve(k * points.dim);
  auto add = [&](std::size_t i) {
    auto p = points.point(i);
    seeds.data.insert(seeds.data.end(), p.begin(), p.end());
  };
  add(uniform_index(rng, n));
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (seeds.size() < k) {
    auto last = seeds.point(seeds.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points.point(i), last));
      total += d2[i];
    }
    if (total <= 0.0) throw Error(ErrorCode::InvalidParams, "k exceeds the number of distinct points");
    double u = uniform01(rng) * total;
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      u -= d2[i];
      if (u < 0.0 && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
    // Guard against rounding landing on an existing seed.
    if (d2[pick] <= 0.0) {
      pick = static_cast<std::size_t>(std::max_element(d2.begin(), d2.end()) - d2.begin());
    }
    add(pick);
  }
  return seeds;
}

}  // namespace

KMeansResult kmeans(const PointSet& points, std::size_t k, Rng& rng, const KMeansOptions& options) {
  const std::size_t n = points.size();
  const std::size_t dim = points.dim;
  if (k == 0 || k > n) throw Error(ErrorCode::InvalidParams, "k must be in [1, number of points]");

  KMeansResult result;
  result.centroids = plus_plus_seeds(points, k, rng);
  result.labels.assign(n, 0);
  double previous = std::numeric_limits<double>::infinity();
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);

  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto p = points.point(i);
      double best = std::numeric_limits<double>::infinity();
      std::size_t label = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_distance(p, result.centroids.point(c));
        if (d < best) {
          best = d;
          label = c;
        }
      }
      result.labels[i] = label;
      inertia += best;
    }
    result.inertia = inertia;
    result.iterations = iter + 1;

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = result.labels[i];
      ++counts[c];
      auto p = points.point(i);
      for (std::size_t d = 0; d < dim; ++d) sums[c * dim + d] += p[d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t d = 0; d < dim; ++d) {
        result.centroids.data[c * dim + d] = sums[c * dim + d] / static_cast<double>(counts[c]);
      }
    }

    const double change = std::abs(previous - inertia);
    if (std::isfinite(previous) && change <= options.tolerance * std::max(previous, 1e-300)) break;
    if (inertia == 0.0) break;
    previous = inertia;
  }
  return result;
}

std::vector<std::size_t> nearest_representatives(const PointSet& points, const PointSet& centroids) {
  const std::size_t n = points.size();
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> picks;
  picks.reserve(centroids.size());
  for (std::size_t c = 0; c < centroids.size() && picks.size() < n; ++c) {
    auto centre = centroids.point(c);
    double best = std::numeric_limits<double>::infinity();
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double d = squared_distance(points.point(i), centre);
      if (d < best) {
        best = d;
        pick = i;
      }
    }
    taken[pick] = true;
    picks.push_back(pick);
  }
  return picks;
}

}  // namespace substrat
