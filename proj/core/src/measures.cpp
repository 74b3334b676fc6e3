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

#include "substrat/measures.hpp"

#include <cmath>

#include "substrat/error.hpp"

namespace substrat {

double column_entropy(const ColumnData& column, std::span<const Index> rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyView, "entropy of an empty row set");
  // Scratch counts sized to the dictionary; only touched slots are reset.
  thread_local std::vector<std::uint32_t> counts;
  thread_local std::vector<SymbolId> touched;
  if (counts.size() < column.cardinality()) counts.resize(column.cardinality(), 0);
  touched.clear();
  for (Index r : rows) {
    SymbolId s = column[r];
    if (counts[s]++ == 0) touched.push_back(s);
  }
  const double n = static_cast<double>(rows.size());
  double h = 0.0;
  for (SymbolId s : touched) {
    const double p = static_cast<double>(counts[s]) / n;
    h -= p * std::log2(p);
    counts[s] = 0;
  }
  // -0.0 for single-valued columns
  return h == 0.0 ? 0.0 : h;
}

double dataset_entropy(const Dataset& dataset, std::span<const Index> rows, std::span<const Index> cols) {
  if (rows.empty() || cols.empty()) throw Error(ErrorCode::EmptyView, "entropy of an empty view");
  double total = 0.0;
  for (Index j : cols) total += column_entropy(dataset.column(j), rows);
  return total / static_cast<double>(cols.size());
}

double dataset_entropy(const DatasetView& view) {
  return dataset_entropy(view.dataset(), view.row_indices(), view.col_indices());
}

// --- registry ---------------------------------------------------------------

MeasureRegistry::MeasureRegistry() {
  factories_.emplace("entropy", [] { return std::make_unique<EntropyMeasure>(); });
}

MeasureRegistry& MeasureRegistry::instance() {
  static MeasureRegistry registry;
  return registry;
}

void MeasureRegistry::add(std::string name, Factory factory) {
  factories_.insert_or_assign(std::move(name), std::move(factory));
}

std::unique_ptr<Measure> MeasureRegistry::create(std::string_view name) const {
  auto it = factories_.find(name);
  if (it == factories_.end()) throw Error(ErrorCode::UnknownMeasure, std::string(name));
  return it->second();
}

std::vector<std::string> MeasureRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : factories_) out.push_back(name);
  return out;
}

std::unique_ptr<Measure> make_measure(std::string_view name) {
  return MeasureRegistry::instance().create(name);
}

// --- loss -------------------------------------------------------------------

LossValue loss(const Dataset& dataset, const SubsetIndices& subset, const Measure& measure,
               double full_value) {
  subset.validate(dataset.shape());
  return {std::abs(measure.evaluate(dataset, subset.rows(), subset.cols()) - full_value)};
}

LossValue loss(const Dataset& dataset, const SubsetIndices& subset, const Measure& measure) {
  const DatasetView all(dataset);
  return loss(dataset, subset, measure, measure.evaluate(all));
}

double fitness(const Dataset& dataset, const SubsetIndices& subset, const Measure& measure) {
  return -loss(dataset, subset, measure).value;
}

LossEvaluator::LossEvaluator(const Dataset& dataset, const Measure& measure)
    : dataset_(&dataset),
      measure_(&measure),
      full_value_(measure.evaluate(DatasetView(dataset))),
      cells_visited_(static_cast<std::uint64_t>(dataset.n_rows()) * dataset.n_cols()) {}

double LossEvaluator::loss(const SubsetIndices& subset) {
  ++evaluations_;
  if (auto it = memo_.find(subset); it != memo_.end()) return it->second;
  ++measure_calls_;
  cells_visited_ += static_cast<std::uint64_t>(subset.n()) * subset.m();
  const double value = std::abs(measure_->evaluate(*dataset_, subset.rows(), subset.cols()) - full_value_);
  memo_.emplace(subset, value);
  return value;
}

double LossEvaluator::loss(std::span<const Index> rows, std::span<const Index> cols) {
  ++evaluations_;
  ++measure_calls_;
  cells_visited_ += static_cast<std::uint64_t>(rows.size()) * cols.size();
  return std::abs(measure_->evaluate(*dataset_, rows, cols) - full_value_);
}

}  // namespace substrat
