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

/// @file baselines.hpp
/// Alternative DST generators, all returning subsets that satisfy the same
/// invariants as Gen-DST so they can be swapped into the pipeline:
///
///   mc          random search under an iteration or wall-clock budget
///   mab         epsilon-greedy bandit with one arm per row and per column
///   greedy_seq  rows first (all columns), then columns with rows fixed
///   greedy_mult one (row, column) pair per step
///   km          k-means representatives on frequency-encoded rows/columns
///   ig_rand     top information-gain columns, random rows
///   ig_km       top information-gain columns, k-means rows

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "substrat/dataset.hpp"
#include "substrat/kmeans.hpp"
#include "substrat/measures.hpp"
#include "substrat/random.hpp"
#include "substrat/search.hpp"

namespace substrat {

enum class BaselineKind { Mc, Mab, GreedySeq, GreedyMult, Km, IgRand, IgKm };

std::string_view to_string(BaselineKind kind) noexcept;
std::optional<BaselineKind> parse_baseline(std::string_view name) noexcept;

// --- Monte-Carlo ----------------------------------------------------------

struct McBudget {
  std::optional<std::uint64_t> iterations;
  std::optional<Seconds> wall_clock;
  /// Never evaluate the same subset twice; stops early once every subset
  /// has been drawn.
  bool deduplicate = false;

  static McBudget mc100() { return {100, std::nullopt, false}; }
  static McBudget mc100k() { return {100'000, std::nullopt, false}; }
  static McBudget mc24h() { return {std::nullopt, Seconds(24.0 * 3600.0), false}; }
};

/// Running minimum of the loss over random draws. Throws InvalidParams when
/// neither budget is set or a budget is zero.
SearchResult mc_search(const Dataset& dataset, const Measure& measure, Index n, Index m,
                       const McBudget& budget, Rng& rng);

// --- multi-arm bandit -------------------------------------------------------

struct MabParams {
  std::uint64_t rounds = 1000;
  double epsilon = 0.1;
};

/// Epsilon-greedy bandit over row arms and column arms. Every arm in a
/// composed subset is credited with the subset's reward (-loss) through an
/// incremental mean; untried arms start at 0, the largest possible reward.
class BanditSearch {
 public:
  BanditSearch(const Dataset& dataset, const Measure& measure, Index n, Index m, double epsilon);

  /// Composes a subset: each slot is greedy (highest value, lowest index on
  /// ties) with probability 1 - epsilon, otherwise uniform among unpicked arms.
  SubsetIndices propose(Rng& rng) const;
  void credit(const SubsetIndices& subset, double reward);
  /// propose + evaluate + credit; returns the observed reward.
  double step(Rng& rng);

  std::span<const double> row_values() const noexcept { return row_values_; }
  std::span<const double> col_values() const noexcept { return col_values_; }
  const SubsetIndices& best() const noexcept { return best_; }
  double best_loss() const noexcept { return best_loss_; }
  std::uint64_t rounds() const noexcept { return rounds_; }
  const LossEvaluator& evaluator() const noexcept { return evaluator_; }

 private:
  std::vector<Index> pick(std::span<const double> values, Index count, std::span<const Index> forced,
                          Rng& rng) const;

  const Dataset* dataset_;
  LossEvaluator evaluator_;
  Index n_;
  Index m_;
  double epsilon_;
  std::vector<double> row_values_;
  std::vector<double> col_values_;
  std::vector<std::uint64_t> row_counts_;
  std::vector<std::uint64_t> col_counts_;
  SubsetIndices best_;
  double best_loss_;
  std::uint64_t rounds_ = 0;
};

SearchResult mab_search(const Dataset& dataset, const Measure& measure, Index n, Index m,
                        const MabParams& params, Rng& rng);

// --- greedy -----------------------------------------------------------------

SearchResult greedy_seq(const Dataset& dataset, const Measure& measure, Index n, Index m);
SearchResult greedy_mult(const Dataset& dataset, const Measure& measure, Index n, Index m);

// --- clustering and information gain --------------------------------------------

/// Each cell encoded by its value's relative frequency within its column.
/// Rows become length-M vectors.
PointSet frequency_encode_rows(const Dataset& dataset);
/// Non-target columns as length-N vectors, in ascending column order.
PointSet frequency_encode_columns(const Dataset& dataset);

/// n representative rows (k-means with k = n). Falls back to one row per
/// distinct encoded point plus random raw-distinct rows when there are fewer
/// distinct points than clusters.
std::vector<Index> km_rows(const Dataset& dataset, Index n, Rng& rng);
/// m - 1 representative non-target columns.
std::vector<Index> km_cols(const Dataset& dataset, Index m, Rng& rng);
SubsetIndices km_select(const Dataset& dataset, Index n, Index m, Rng& rng);

/// H(target) - H(target | column), in bits.
double information_gain(const Dataset& dataset, Index column);
/// Non-target columns by descending information gain; ties by lowest index.
std::vector<Index> ig_rank(const Dataset& dataset);
SubsetIndices ig_rand(const Dataset& dataset, Index n, Index m, Rng& rng);
SubsetIndices ig_km(const Dataset& dataset, Index n, Index m, Rng& rng);

// --- uniform entry point ----------------------------------------------------------

struct BaselineConfig {
  BaselineKind kind = BaselineKind::Mc;
  McBudget mc = McBudget::mc100();
  MabParams mab;
};

/// Runs any baseline and reports it as a SearchResult (loss recomputed for
/// the selection-only kinds km / ig_rand / ig_km).
SearchResult run_baseline(const Dataset& dataset, const Measure& measure, Index n, Index m,
                          const BaselineConfig& config, Rng& rng);

}  // namespace substrat
