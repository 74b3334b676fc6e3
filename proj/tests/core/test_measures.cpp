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
#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "substrat/error.hpp"
#include "substrat/measures.hpp"
#include "substrat/synthetic.hpp"

namespace substrat {
namespace {

using testing::kOracleTol;

// Reference: Shannon entropy from a map over raw strings, averaged over columns.
double naive_entropy(const Dataset& d, std::span<const Index> rows, std::span<const Index> cols) {
  double total = 0.0;
  for (Index j : cols) {
    std::map<std::string, double> counts;
    for (Index i : rows) counts[std::string(d.column(j).raw(i))] += 1.0;
    for (const auto& [value, c] : counts) {
      const double p = c / static_cast<double>(rows.size());
      total -= p * std::log2(p);
    }
  }
  return total / static_cast<double>(cols.size());
}

std::vector<Index> iota(Index n) {
  std::vector<Index> v(n);
  for (Index i = 0; i < n; ++i) v[i] = i;
  return v;
}

TEST(Entropy, FlightsColumnTerms) {
  const Dataset d = testing::flights();
  const auto all = iota(d.n_rows());
  for (Index j = 0; j < d.n_cols(); ++j)
    EXPECT_NEAR(column_entropy(d.column(j), all), testing::kColumnTerms[j], kOracleTol) << d.column_name(j);
  EXPECT_NEAR(dataset_entropy(DatasetView(d)), testing::kFullEntropy, kOracleTol);
}

TEST(Entropy, FlightsSubsets) {
  const Dataset d = testing::flights();
  for (std::size_t k = 0; k < testing::kGreenCols.size(); ++k)
    EXPECT_NEAR(column_entropy(d.column(testing::kGreenCols[k]), testing::kGreenRows), testing::kGreenTerms[k],
                kOracleTol);
  EXPECT_NEAR(dataset_entropy(DatasetView(d, testing::kGreenRows, testing::kGreenCols)), testing::kGreenEntropy,
              kOracleTol);
  EXPECT_NEAR(dataset_entropy(DatasetView(d, testing::kRedRows, testing::kRedCols)), testing::kRedEntropy,
              kOracleTol);
}

TEST(Entropy, ConstantColumnsAreZero) {
  const Dataset d = testing::small_table({{"a", "1"}, {"a", "1"}, {"a", "1"}});
  EXPECT_EQ(dataset_entropy(DatasetView(d)), 0.0);
  const Dataset t = testing::flights();
  EXPECT_EQ(dataset_entropy(DatasetView(t, {3}, {0, 1, 2, 3, 4})), 0.0);
}

TEST(Entropy, EmptyViewThrows) {
  const Dataset d = testing::flights();
  try {
    dataset_entropy(DatasetView(d, {}, {0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyView);
  }
}

TEST(Entropy, MatchesNaiveOracleOnRandomViews) {
  const Dataset d = make_synthetic({.rows = 60, .cols = 7, .classes = 3, .signal = 0.4, .seed = 11});
  Rng rng(5);
  for (int trial = 0; trial < 10'000; ++trial) {
    const auto rows = sample_distinct(rng, d.n_rows(), 1 + uniform_index(rng, d.n_rows()));
    const auto cols = sample_distinct(rng, d.n_cols(), 1 + uniform_index(rng, d.n_cols()));
    ASSERT_NEAR(dataset_entropy(d, rows, cols), naive_entropy(d, rows, cols), 1e-9);
  }
}

TEST(Entropy, BoundsAndRowPermutationInvariance) {
  const Dataset d = make_synthetic({.rows = 200, .cols = 6, .seed = 3});
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    auto rows = sample_distinct(rng, d.n_rows(), 2 + uniform_index(rng, 50));
    const auto cols = sample_distinct(rng, d.n_cols(), 1 + uniform_index(rng, d.n_cols()));
    double cap = 0.0;
    for (Index j : cols)
      cap += std::log2(static_cast<double>(std::min<std::size_t>(rows.size(), d.column(j).cardinality())));
    cap /= static_cast<double>(cols.size());
    const double h = dataset_entropy(d, rows, cols);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, cap + 1e-12);
    std::shuffle(rows.begin(), rows.end(), rng);
    EXPECT_NEAR(dataset_entropy(DatasetView(d, rows, cols)), h, 1e-12);
  }
}

TEST(Loss, FlightsExamples) {
  const Dataset d = testing::flights();
  const EntropyMeasure h;
  const auto green = SubsetIndices::make(testing::kGreenRows, testing::kGreenCols, d.shape());
  const auto red = SubsetIndices::make(testing::kRedRows, testing::kRedCols, d.shape());
  EXPECT_NEAR(loss(d, green, h).value, testing::kBestLoss5x3, kOracleTol);
  EXPECT_NEAR(loss(d, red, h).value, testing::kFullEntropy - testing::kRedEntropy, kOracleTol);
  EXPECT_EQ(loss(d, SubsetIndices::full(d.shape()), h).value, 0.0);
  EXPECT_EQ(fitness(d, SubsetIndices::full(d.shape()), h), 0.0);
  EXPECT_NEAR(fitness(d, green, h), -testing::kBestLoss5x3, kOracleTol);
}

TEST(Loss, EvaluatorMemoizesAndCountsCells) {
  const Dataset d = testing::flights();
  const EntropyMeasure h;
  LossEvaluator eval(d, h);
  EXPECT_EQ(eval.cells_visited(), 50u);
  const auto green = SubsetIndices::make(testing::kGreenRows, testing::kGreenCols, d.shape());
  const double first = eval.loss(green);
  EXPECT_EQ(eval.loss(green), first);
  EXPECT_EQ(eval.evaluations(), 2u);
  EXPECT_EQ(eval.measure_calls(), 1u);
  EXPECT_EQ(eval.cells_visited(), 50u + 15u);
}

TEST(Registry, KnownAndUnknownMeasures) {
  EXPECT_EQ(make_measure("entropy")->name(), "entropy");
  const auto names = MeasureRegistry::instance().names();
  EXPECT_NE(std::find(names.begin(), names.end(), "entropy"), names.end());
  try {
    make_measure("gini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownMeasure);
  }
}

}  // namespace
}  // namespace substrat
