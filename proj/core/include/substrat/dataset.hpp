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

/// @file dataset.hpp
/// Columnar, interned, immutable tables and index-only views over them.
///
/// Every cell is stored as a dense per-column SymbolId; the column dictionary
/// maps ids back to the raw text. Subsets (DSTs) are pairs of sorted index
/// sets and never copy cell data.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "substrat/random.hpp"

namespace substrat {

using SymbolId = std::uint32_t;

/// Dictionary text used for empty cells.
inline constexpr std::string_view kMissingValue = "\xE2\x88\x85";  // U+2205

enum class ColumnKind { Categorical, NumericSymbol, NumericBinned };

std::string_view to_string(ColumnKind kind) noexcept;

class ColumnData {
 public:
  ColumnData(std::vector<SymbolId> symbols, std::vector<std::string> dictionary, ColumnKind kind);

  std::span<const SymbolId> symbols() const noexcept { return symbols_; }
  SymbolId operator[](Index row) const noexcept { return symbols_[row]; }
  std::size_t size() const noexcept { return symbols_.size(); }

  /// Number of distinct symbols.
  std::size_t cardinality() const noexcept { return dictionary_.size(); }
  std::string_view value(SymbolId id) const { return dictionary_.at(id); }
  std::string_view raw(Index row) const { return dictionary_[symbols_[row]]; }
  ColumnKind kind() const noexcept { return kind_; }

 private:
  std::vector<SymbolId> symbols_;
  std::vector<std::string> dictionary_;
  ColumnKind kind_;
};

/// Dimensions plus target column; enough to validate any index set.
struct Shape {
  Index rows = 0;
  Index cols = 0;
  Index target = 0;
};

class Dataset {
 public:
  /// Throws Error(InvalidSubset) when a structural invariant is violated
  /// (ragged columns, duplicate names, target out of range, N < 1 or M < 2).
  Dataset(std::string name, std::vector<std::string> column_names, std::vector<ColumnData> columns,
          Index target_col);

  const std::string& name() const noexcept { return name_; }
  Index n_rows() const noexcept { return n_rows_; }
  Index n_cols() const noexcept { return columns_.size(); }
  Index target_col() const noexcept { return target_; }
  Shape shape() const noexcept { return {n_rows_, n_cols(), target_}; }

  const ColumnData& column(Index j) const { return columns_.at(j); }
  std::span<const ColumnData> columns() const noexcept { return columns_; }
  std::span<const std::string> column_names() const noexcept { return column_names_; }
  const std::string& column_name(Index j) const { return column_names_.at(j); }
  std::optional<Index> find_column(std::string_view name) const;

 private:
  std::string name_;
  std::vector<std::string> column_names_;
  std::vector<ColumnData> columns_;
  Index n_rows_ = 0;
  Index target_ = 0;
};

/// A DST genome: sorted unique row and column index sets. Always contains
/// the target column once validated against a Shape.
class SubsetIndices {
 public:
  SubsetIndices() = default;

  /// Sorts both sets and validates against `shape`. Throws IndexOutOfRange,
  /// TargetMissing or InvalidSubset (duplicates, size bounds).
  static SubsetIndices make(std::vector<Index> rows, std::vector<Index> cols, const Shape& shape);

  /// All rows and all columns.
  static SubsetIndices full(const Shape& shape);

  std::span<const Index> rows() const noexcept { return rows_; }
  std::span<const Index> cols() const noexcept { return cols_; }
  Index n() const noexcept { return rows_.size(); }
  Index m() const noexcept { return cols_.size(); }

  /// Re-checks every invariant; returns false instead of throwing.
  bool is_valid(const Shape& shape) const noexcept;
  void validate(const Shape& shape) const;

  std::size_t hash() const noexcept;

  friend bool operator==(const SubsetIndices&, const SubsetIndices&) = default;
  friend auto operator<=>(const SubsetIndices&, const SubsetIndices&) = default;

 private:
  SubsetIndices(std::vector<Index> rows, std::vector<Index> cols)
      : rows_(std::move(rows)), cols_(std::move(cols)) {}

  std::vector<Index> rows_;
  std::vector<Index> cols_;
};

struct SubsetHash {
  std::size_t operator()(const SubsetIndices& s) const noexcept { return s.hash(); }
};

/// Read-only projection of a Dataset onto sorted row/column index sets.
/// Holds a reference to the dataset; the dataset must outlive the view.
class DatasetView {
 public:
  /// Any in-range index sets; the target is not required. Indices are
  /// sorted; duplicates or out-of-range indices throw IndexOutOfRange.
  DatasetView(const Dataset& dataset, std::vector<Index> rows, std::vector<Index> cols);

  /// Unfiltered view of the whole dataset.
  explicit DatasetView(const Dataset& dataset);

  const Dataset& dataset() const noexcept { return *dataset_; }
  std::span<const Index> row_indices() const noexcept { return rows_; }
  std::span<const Index> col_indices() const noexcept { return cols_; }
  Index n_rows() const noexcept { return rows_.size(); }
  Index n_cols() const noexcept { return cols_.size(); }
  bool empty() const noexcept { return rows_.empty() || cols_.empty(); }

  SymbolId symbol(Index i, Index j) const { return dataset_->column(cols_[j])[rows_[i]]; }
  std::string_view raw(Index i, Index j) const { return dataset_->column(cols_[j]).raw(rows_[i]); }
  const std::string& column_name(Index j) const { return dataset_->column_name(cols_[j]); }

 private:
  const Dataset* dataset_;
  std::vector<Index> rows_;
  std::vector<Index> cols_;
};

/// Validated DST view: like the DatasetView constructor but also requires the
/// target column (TargetMissing) and the subset size bounds.
DatasetView view(const Dataset& dataset, const SubsetIndices& subset);

/// Uniformly random DST of n rows and m columns; the target column is always
/// included and counts toward m. Throws SizeTooLarge when n > N or m > M, and
/// InvalidSubset when n < 1 or m < 2.
SubsetIndices random_subset(const Shape& shape, Index n, Index m, Rng& rng);

/// Number of distinct n x m subsets containing the target:
/// C(N, n) * C(M-1, m-1), saturating at UINT64_MAX.
std::uint64_t subset_count(const Shape& shape, Index n, Index m);

/// Default DST size: n = round(sqrt(N)), m = max(2, round(0.25 * M)), each
/// clamped to the dataset dimensions.
struct SubsetSize {
  Index rows = 0;
  Index cols = 0;
};
SubsetSize default_subset_size(const Shape& shape);

/// Resolves a size spec against a dimension of `total`: "sqrt" gives
/// round(sqrt(total)), a decimal f in (0, 1] gives round(f * total), both
/// raised to `minimum`; a positive integer is taken as is (range errors are
/// left to the caller). Throws InvalidParams.
Index resolve_size(std::string_view spec, Index total, Index minimum);

// --- ingestion ------------------------------------------------------------

struct IngestOptions {
  char delimiter = ',';
  /// Equal-width bin count for numeric columns; nullopt keeps exact values.
  std::optional<std::size_t> bins;
  /// Dataset name; defaults to the file stem.
  std::string name;
};

/// Builds a Dataset from already-split text cells. Empty cells become the
/// missing symbol. Throws MissingTarget, RaggedRows, EmptyFile.
Dataset from_table(std::vector<std::string> header, const std::vector<std::vector<std::string>>& rows,
                   std::string_view target, const IngestOptions& options = {});

Dataset read_csv(std::istream& in, std::string_view target, const IngestOptions& options = {});

/// Throws IoError when the file cannot be opened.
Dataset load_csv(const std::filesystem::path& path, std::string_view target,
                 const IngestOptions& options = {});

/// Writes the view as CSV with a header row; the missing symbol is written
/// as an empty field. Fields are quoted only when needed.
void write_csv(std::ostream& out, const DatasetView& view, char delimiter = ',');
void write_csv(const std::filesystem::path& path, const DatasetView& view, char delimiter = ',');

}  // namespace substrat
