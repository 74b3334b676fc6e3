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

/// @file measures.hpp
/// Dataset measures and the measure-preservation loss.
///
/// Dataset entropy is the mean, over columns, of the Shannon entropy (bits)
/// of each column's empirical value distribution:
///
///   H(view) = (1/m) * sum_j ( -sum_v p_j(v) * log2 p_j(v) ),  p_j(v) = count_j(v) / n
///
/// The loss of a subset is |F(D[r,c]) - F(D)| and its fitness is the negated
/// loss.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "substrat/dataset.hpp"

namespace substrat {

/// Shannon entropy (bits) of one column restricted to `rows`.
double column_entropy(const ColumnData& column, std::span<const Index> rows);

/// Mean per-column entropy of the view. Throws EmptyView.
double dataset_entropy(const DatasetView& view);

/// Same as dataset_entropy(view) without materializing a view.
double dataset_entropy(const Dataset& dataset, std::span<const Index> rows, std::span<const Index> cols);

/// A dataset measure F: view -> real. Implementations must be deterministic
/// and pure so candidates can be scored in any order.
class Measure {
 public:
  virtual ~Measure() = default;
  virtual std::string_view name() const noexcept = 0;
  virtual double evaluate(const Dataset& dataset, std::span<const Index> rows,
                          std::span<const Index> cols) const = 0;

  double evaluate(const DatasetView& view) const {
    return evaluate(view.dataset(), view.row_indices(), view.col_indices());
  }
};

class EntropyMeasure final : public Measure {
 public:
  std::string_view name() const noexcept override { return "entropy"; }
  double evaluate(const Dataset& dataset, std::span<const Index> rows,
                  std::span<const Index> cols) const override {
    return dataset_entropy(dataset, rows, cols);
  }
};

/// Name-keyed factory for measures. "entropy" is registered by default.
class MeasureRegistry {
 public:
  using Factory = std::function<std::unique_ptr<Measure>()>;

  static MeasureRegistry& instance();

  void add(std::string name, Factory factory);
  /// Throws UnknownMeasure.
  std::unique_ptr<Measure> create(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  MeasureRegistry();
  std::map<std::string, Factory, std::less<>> factories_;
};

std::unique_ptr<Measure> make_measure(std::string_view name);

struct LossValue {
  double value = 0.0;
};

/// |F(view(dataset, subset)) - F(dataset)|. Validates the subset.
LossValue loss(const Dataset& dataset, const SubsetIndices& subset, const Measure& measure);

/// Same with F(D) supplied precomputed.
LossValue loss(const Dataset& dataset, const SubsetIndices& subset, const Measure& measure,
               double full_value);

/// Negated loss; 0 is optimal.
double fitness(const Dataset& dataset, const SubsetIndices& subset, const Measure& measure);

/// Per-run loss oracle: caches F(D) once and memoizes loss per canonical
/// subset. Not thread-safe; one instance per search run.
class LossEvaluator {
 public:
  LossEvaluator(const Dataset& dataset, const Measure& measure);

  const Dataset& dataset() const noexcept { return *dataset_; }
  const Measure& measure() const noexcept { return *measure_; }
  double full_value() const noexcept { return full_value_; }

  /// Loss for a subset the caller guarantees is valid.
  double loss(const SubsetIndices& subset);
  double fitness(const SubsetIndices& subset) { return -loss(subset); }

  /// Loss for arbitrary in-range index sets (partial subsets used by the
  /// greedy baselines, which may lack the target). Not memoized.
  double loss(std::span<const Index> rows, std::span<const Index> cols);

  /// Number of loss requests, including memo hits.
  std::uint64_t evaluations() const noexcept { return evaluations_; }
  /// Number of measure computations actually performed.
  std::uint64_t measure_calls() const noexcept { return measure_calls_; }
  /// Cells read by measure computations, F(D) included.
  std::uint64_t cells_visited() const noexcept { return cells_visited_; }

 private:
  const Dataset* dataset_;
  const Measure* measure_;
  double full_value_;
  std::unordered_map<SubsetIndices, double, SubsetHash> memo_;
  std::uint64_t evaluations_ = 0;
  std::uint64_t measure_calls_ = 0;
  std::uint64_t cells_visited_ = 0;
};

}  // namespace substrat
