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

/// @file toy_automl.hpp
/// A small deterministic AutoML used for tests, benchmarks and offline runs.
///
/// The data is split once into a stratified 80/20 train/holdout partition.
/// The search only sees the train part: it runs k-fold cross-validation
/// rounds over a fixed model zoo, one evaluation being one (candidate, fold)
/// pair, until the evaluation or time budget is spent. The candidate with the
/// best mean validation accuracy (ties go to the earlier zoo entry) is refit
/// on the whole train part and scored on the holdout.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "substrat/automl.hpp"
#include "substrat/dataset.hpp"
#include "substrat/random.hpp"

namespace substrat::toy {

inline constexpr double kHoldoutFraction = 0.2;
inline constexpr std::size_t kFolds = 5;

struct Candidate {
  std::string family;  // "majority", "one_rule" or "naive_bayes"
  double smoothing = 0.0;
};

/// The zoo in tie-break order.
const std::vector<Candidate>& model_zoo();

struct Split {
  std::vector<Index> train;
  std::vector<Index> holdout;
};

/// Per class, round(fraction * count) shuffled rows go to the holdout, never
/// all of a class. If that leaves the holdout empty, the train rows double as
/// the holdout.
Split stratified_split(const Dataset& dataset, double holdout_fraction, Rng& rng);

/// A fitted model over a fixed feature set (column indices of the dataset).
class Model {
 public:
  static Model fit(const Candidate& candidate, const Dataset& dataset, std::span<const Index> rows,
                   std::span<const Index> features);

  SymbolId predict(const Dataset& dataset, Index row) const;
  double accuracy(const Dataset& dataset, std::span<const Index> rows) const;

  const Candidate& candidate() const noexcept { return candidate_; }
  /// Chosen feature for one_rule, otherwise unset.
  std::optional<Index> rule_column() const noexcept { return rule_column_; }

 private:
  Candidate candidate_;
  std::vector<Index> features_;
  SymbolId majority_ = 0;
  std::optional<Index> rule_column_;
  std::vector<SymbolId> rule_;                // value -> class for rule_column_
  std::vector<double> log_prior_;             // per class
  std::vector<std::vector<double>> log_lik_;  // per feature: value * classes + class
};

struct FitOptions {
  double time_budget_s = 60.0;
  std::optional<std::uint64_t> eval_budget;
  std::optional<std::string> restrict_family;
  std::uint64_t seed = 0;
};

/// Runs the search on an in-memory dataset. Throws InvalidParams for an
/// unknown restrict_family.
ModelConfig fit(const Dataset& dataset, const FitOptions& options);

/// Refits the configuration described by `config_blob` (as produced by fit)
/// on this dataset's train part and scores it on its holdout. Features named
/// in the blob must exist in the dataset.
ModelConfig score(const Dataset& dataset, const std::string& config_blob, std::uint64_t seed);

/// In-process adapter reading CSV files.
class ToyAdapter final : public AutomlAdapter {
 public:
  std::string name() const override { return "builtin-toy"; }
  ModelConfig fit(const FitRequest& request) override;
  ModelConfig score(const ScoreRequest& request) override;
};

}  // namespace substrat::toy
