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
#include <limits>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "substrat/baselines.hpp"
#include "substrat/error.hpp"
#include "substrat/gendst.hpp"
#include "substrat/synthetic.hpp"

namespace substrat {
namespace {

std::vector<Index> to_vector(std::span<const Index> s) { return {s.begin(), s.end()}; }

std::vector<std::string> raw_row(const Dataset& d, Index i) {
  std::vector<std::string> out;
  for (const auto& col : d.columns()) out.emplace_back(col.raw(i));
  return out;
}

TEST(Names, RoundTrip) {
  for (auto kind : {BaselineKind::Mc, BaselineKind::Mab, BaselineKind::GreedySeq, BaselineKind::GreedyMult,
                    BaselineKind::Km, BaselineKind::IgRand, BaselineKind::IgKm})
    EXPECT_EQ(parse_baseline(to_string(kind)), kind);
  EXPECT_FALSE(parse_baseline("gendst"));
}

TEST(MonteCarlo, SingleDrawIsTheResult) {
  const Dataset d = testing::flights();
  const EntropyMeasure h;
  Rng a(42), b(42);
  const SearchResult r = mc_search(d, h, 5, 3, {.iterations = 1}, a);
  const SubsetIndices drawn = random_subset(d.shape(), 5, 3, b);
  EXPECT_EQ(r.best, drawn);
  EXPECT_EQ(r.best_loss.value, loss(d, drawn, h).value);
  EXPECT_EQ(r.evaluations, 1u);
}

TEST(MonteCarlo, ExhaustiveDedupedDrawsFindTheOptimum) {
  const Dataset d = testing::small_table(
      {{"a", "x", "p", "0"}, {"b", "x", "q", "1"}, {"a", "y", "p", "0"}, {"c", "y", "r", "1"}, {"b", "z", "p", "1"}});
  const EntropyMeasure h;
  const std::uint64_t space = subset_count(d.shape(), 3, 2);
  Rng rng(1);
  const SearchResult r = mc_search(d, h, 3, 2, {.iterations = space, .deduplicate = true}, rng);
  EXPECT_EQ(r.evaluations, space);
  EXPECT_EQ(r.best_loss.value, brute_force_dst(d, h, 3, 2).best_loss.value);
}

TEST(MonteCarlo, BudgetValidation) {
  const Dataset d = testing::flights();
  const EntropyMeasure h;
  Rng rng(1);
  EXPECT_THROW(mc_search(d, h, 5, 3, {}, rng), Error);
  EXPECT_THROW(mc_search(d, h, 5, 3, {.iterations = 0}, rng), Error);
  const SearchResult timed = mc_search(d, h, 5, 3, {.wall_clock = Seconds(0.01)}, rng);
  EXPECT_GT(timed.evaluations, 0u);
}

TEST(Bandit, GreedyProposalUsesTopArmsAfterWarmStart) {
  const Dataset d = make_synthetic({.rows = 50, .cols = 6, .seed = 8});
  const EntropyMeasure h;
  Rng rng(2);
  auto top = [](std::span<const double> values, Index k, std::vector<Index> chosen) {
    std::vector<Index> order(values.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values[a] > values[b]; });
    for (Index i : order) {
      if (k == 0) break;
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      chosen.push_back(i);
      --k;
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  };
  BanditSearch greedy(d, h, 7, 3, 0.0);
  for (Index r = 0; r < d.n_rows(); ++r)
    for (int k = 0; k < 3; ++k) greedy.credit(SubsetIndices::make({r}, {0, d.target_col()}, d.shape()), -0.01 * r);
  const SubsetIndices s = greedy.propose(rng);
  EXPECT_EQ(to_vector(s.rows()), top(greedy.row_values(), 7, {}));
  EXPECT_EQ(to_vector(s.cols()), top(greedy.col_values(), 2, {d.target_col()}));
  EXPECT_EQ(greedy.propose(rng), s);
  EXPECT_EQ(to_vector(s.rows()), (std::vector<Index>{0, 1, 2, 3, 4, 5, 6}));
}

TEST(Bandit, ConstantColumnArmFallsBelowAverage) {
  std::vector<std::vector<std::string>> rows;
  Rng gen(4);
  for (int i = 0; i < 120; ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < 5; ++j) row.push_back(std::to_string(uniform_index(gen, 12)));
    row.push_back("k");
    row.push_back(std::to_string(i % 2));
    rows.push_back(row);
  }
  const Dataset d = testing::small_table(rows);
  const EntropyMeasure h;
  BanditSearch bandit(d, h, 11, 3, 0.1);
  Rng rng(6);
  for (int t = 0; t < 500; ++t) bandit.step(rng);
  const auto values = bandit.col_values();
  double mean = 0.0;
  for (Index j = 0; j < 6; ++j) mean += values[j];
  mean /= 6.0;
  EXPECT_LT(values[5], mean);
}

TEST(Bandit, FullExplorationMatchesRandomSearchOnAverage) {
  const Dataset d = make_synthetic({.rows = 80, .cols = 8, .seed = 21});
  const EntropyMeasure h;
  double mab = 0.0;
  double mc = 0.0;
  constexpr int kSeeds = 30;
  for (int seed = 0; seed < kSeeds; ++seed) {
    Rng a(seed), b(seed + 1000);
    mab += mab_search(d, h, 9, 3, {.rounds = 50, .epsilon = 1.0}, a).best_loss.value;
    mc += mc_search(d, h, 9, 3, {.iterations = 50}, b).best_loss.value;
  }
  EXPECT_NEAR(mab / kSeeds, mc / kSeeds, 0.5 * std::max(mab, mc) / kSeeds);
}

TEST(Greedy, FullSizeHasZeroLoss) {
  const Dataset d = testing::flights();
  const EntropyMeasure h;
  EXPECT_EQ(greedy_seq(d, h, 10, 5).best_loss.value, 0.0);
  EXPECT_EQ(greedy_mult(d, h, 10, 5).best_loss.value, 0.0);
}

TEST(Greedy, SeqFirstRowIsSingleRowArgmin) {
  const Dataset d = testing::flights();
  const EntropyMeasure h;
  const std::vector<Index> all{0, 1, 2, 3, 4};
  Index expected = 0;
  double best = std::numeric_limits<double>::infinity();
  for (Index r = 0; r < d.n_rows(); ++r) {
    const std::vector<Index> one{r};
    const double l = std::abs(dataset_entropy(d, one, all) - testing::kFullEntropy);
    if (l < best - 1e-12) best = l, expected = r;
  }
  const SearchResult r = greedy_seq(d, h, 1, 5);
  EXPECT_EQ(to_vector(r.best.rows()), std::vector<Index>{expected});
}

// Replays greedy_mult for an n x (n + 1) DST by enumerating every (row, column) pair.
SubsetIndices enumerate_mult(const Dataset& d, Index n) {
  const double full = dataset_entropy(DatasetView(d));
  std::vector<Index> rows;
  std::vector<Index> cols{d.target_col()};
  while (rows.size() < n) {
    double best = std::numeric_limits<double>::infinity();
    Index br = 0, bc = 0;
    for (Index r = 0; r < d.n_rows(); ++r) {
      if (std::ranges::find(rows, r) != rows.end()) continue;
      for (Index c = 0; c < d.n_cols(); ++c) {
        if (std::ranges::find(cols, c) != cols.end()) continue;
        auto rr = rows;
        auto cc = cols;
        rr.push_back(r);
        cc.push_back(c);
        std::ranges::sort(rr);
        std::ranges::sort(cc);
        const double l = std::abs(dataset_entropy(d, rr, cc) - full);
        if (l < best) best = l, br = r, bc = c;
      }
    }
    rows.push_back(br);
    cols.push_back(bc);
  }
  return SubsetIndices::make(rows, cols, d.shape());
}

TEST(Greedy, MultStepsMatchPairEnumeration) {
  const Dataset d = testing::small_table(
      {{"a", "x", "0"}, {"b", "x", "1"}, {"a", "y", "0"}, {"c", "z", "1"}, {"b", "y", "1"}});
  const EntropyMeasure h;
  EXPECT_EQ(greedy_mult(d, h, 1, 2).best, enumerate_mult(d, 1));
  EXPECT_EQ(greedy_mult(d, h, 2, 3).best, enumerate_mult(d, 2));
}

TEST(Greedy, Deterministic) {
  const Dataset d = make_synthetic({.rows = 60, .cols = 6, .seed = 2});
  const EntropyMeasure h;
  EXPECT_EQ(greedy_seq(d, h, 8, 3).best, greedy_seq(d, h, 8, 3).best);
  EXPECT_EQ(greedy_mult(d, h, 8, 3).best, greedy_mult(d, h, 8, 3).best);
}

Dataset duplicated_rows() {
  const std::vector<std::vector<std::string>> distinct{
      {"a", "x", "1", "0"}, {"b", "y", "2", "1"}, {"c", "x", "3", "0"}, {"a", "z", "4", "1"}};
  std::vector<std::vector<std::string>> rows;
  for (int copy = 0; copy < 10; ++copy) rows.insert(rows.end(), distinct.begin(), distinct.end());
  return testing::small_table(rows);
}

TEST(KmSelect, PicksOneRowPerDuplicateGroup) {
  const Dataset d = duplicated_rows();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto rows = km_rows(d, 4, rng);
    std::set<std::vector<std::string>> seen;
    for (Index r : rows) seen.insert(raw_row(d, r));
    EXPECT_EQ(seen.size(), 4u);
    Rng again(seed);
    const SubsetIndices s = ig_km(d, 4, 3, again);
    std::set<std::vector<std::string>> via_ig;
    for (Index r : s.rows()) via_ig.insert(raw_row(d, r));
    EXPECT_EQ(via_ig.size(), 4u);
  }
}

TEST(KmSelect, FallbackAndFullRows) {
  const Dataset d = duplicated_rows();
  Rng rng(1);
  const auto many = km_rows(d, 6, rng);
  EXPECT_EQ(many.size(), 6u);
  std::set<std::vector<std::string>> seen;
  for (Index r : many) seen.insert(raw_row(d, r));
  EXPECT_EQ(seen.size(), 4u);
  const auto all = km_rows(d, d.n_rows(), rng);
  EXPECT_EQ(all.size(), d.n_rows());
}

TEST(KmSelect, FlightsStructure) {
  const Dataset d = testing::flights();
  Rng rng(5);
  const SubsetIndices s = km_select(d, 5, 3, rng);
  EXPECT_TRUE(s.is_valid(d.shape()));
  std::set<std::vector<std::string>> seen;
  for (Index r : s.rows()) seen.insert(raw_row(d, r));
  EXPECT_EQ(seen.size(), 5u);
}

TEST(InformationGain, FlightsOracle) {
  const Dataset d = testing::flights();
  for (Index j = 0; j < 4; ++j)
    EXPECT_NEAR(information_gain(d, j), testing::kInformationGain[j], testing::kOracleTol) << j;
  EXPECT_EQ(ig_rank(d), testing::kIgRank);
}

TEST(InformationGain, PerfectAndConstantColumns) {
  const Dataset d = testing::small_table(
      {{"k", "a", "0"}, {"k", "b", "1"}, {"k", "b", "1"}, {"k", "a", "0"}, {"k", "b", "1"}});
  const double ht = column_entropy(d.column(2), std::vector<Index>{0, 1, 2, 3, 4});
  EXPECT_NEAR(information_gain(d, 1), ht, 1e-12);
  EXPECT_EQ(information_gain(d, 0), 0.0);
  EXPECT_EQ(ig_rank(d), (std::vector<Index>{1, 0}));
}

TEST(InformationGain, SelectionsKeepTopColumns) {
  const Dataset d = testing::flights();
  Rng rng(3);
  const SubsetIndices s = ig_rand(d, 5, 3, rng);
  EXPECT_EQ(to_vector(s.cols()), (std::vector<Index>{0, 3, 4}));
  EXPECT_EQ(ig_rand(d, 5, 5, rng).m(), 5u);
}

TEST(Dispatch, EveryKindReturnsValidSubsets) {
  const Dataset d = make_synthetic({.rows = 100, .cols = 8, .seed = 3});
  const EntropyMeasure h;
  for (auto kind : {BaselineKind::Mc, BaselineKind::Mab, BaselineKind::GreedySeq, BaselineKind::GreedyMult,
                    BaselineKind::Km, BaselineKind::IgRand, BaselineKind::IgKm}) {
    Rng rng(7);
    BaselineConfig config{.kind = kind};
    config.mab.rounds = 50;
    const SearchResult r = run_baseline(d, h, 10, 3, config, rng);
    EXPECT_TRUE(r.best.is_valid(d.shape())) << to_string(kind);
    EXPECT_EQ(r.best.n(), 10u);
    EXPECT_EQ(r.best.m(), 3u);
    EXPECT_NEAR(r.best_loss.value, loss(d, r.best, h).value, 1e-12) << to_string(kind);
    EXPECT_GT(r.work_units, 0u);
  }
}

}  // namespace
}  // namespace substrat
