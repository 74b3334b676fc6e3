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


#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "substrat/kmeans.hpp"

namespace substrat {
namespace {

PointSet points(std::initializer_list<std::initializer_list<double>> rows) {
  PointSet p;
  for (const auto& r : rows) {
    p.dim = r.size();
    p.data.insert(p.data.end(), r.begin(), r.end());
  }
  return p;
}

TEST(KMeans, SeparatesWellSeparatedClusters) {
  const PointSet p = points({{0, 0}, {0.1, 0}, {0, 0.1}, {10, 10}, {10.1, 10}, {10, 10.1}});
  Rng rng(1);
  const KMeansResult r = kmeans(p, 2, rng);
  EXPECT_EQ(r.labels[0], r.labels[1]);
  EXPECT_EQ(r.labels[0], r.labels[2]);
  EXPECT_EQ(r.labels[3], r.labels[5]);
  EXPECT_NE(r.labels[0], r.labels[3]);
  EXPECT_NEAR(r.inertia, 4 * (0.1 * 0.1 * 2.0 / 3.0), 1e-9);
}

TEST(KMeans, DistinctCountAndDistance) {
  const PointSet p = points({{1, 2}, {1, 2}, {3, 4}});
  EXPECT_EQ(count_distinct(p), 2u);
  EXPECT_EQ(squared_distance(p.point(0), p.point(2)), 8.0);
}

TEST(KMeans, KEqualsDistinctPointsGivesZeroInertia) {
  const PointSet p = points({{1}, {1}, {5}, {5}, {9}});
  Rng rng(3);
  const KMeansResult r = kmeans(p, 3, rng);
  EXPECT_EQ(r.inertia, 0.0);
  const auto reps = nearest_representatives(p, r.centroids);
  std::set<double> values;
  for (auto i : reps) values.insert(p.point(i)[0]);
  EXPECT_EQ(values, (std::set<double>{1, 5, 9}));
}

TEST(KMeans, RepresentativesAreDistinctPoints) {
  const PointSet p = points({{0}, {0}, {0}, {1}});
  const PointSet centroids = points({{0}, {0}, {0}});
  const auto reps = nearest_representatives(p, centroids);
  EXPECT_EQ(std::set<std::size_t>(reps.begin(), reps.end()), (std::set<std::size_t>{0, 1, 2}));
}

}  // namespace
}  // namespace substrat
