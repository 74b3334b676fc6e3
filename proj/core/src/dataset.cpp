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

#include "substrat/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <iterator>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "substrat/error.hpp"

namespace substrat {

std::string_view to_string(ColumnKind kind) noexcept {
  switch (kind) {
    case ColumnKind::Categorical: return "categorical";
    case ColumnKind::NumericSymbol: return "numeric-as-symbol";
    case ColumnKind::NumericBinned: return "numeric-binned";
  }
  return "categorical";
}

ColumnData::ColumnData(std::vector<SymbolId> symbols, std::vector<std::string> dictionary,
                       ColumnKind kind)
    : symbols_(std::move(symbols)), dictionary_(std::move(dictionary)), kind_(kind) {
  for (SymbolId s : symbols_) {
    if (s >= dictionary_.size()) {
      throw Error(ErrorCode::InvalidSubset, "symbol id outside column dictionary");
    }
  }
}

Dataset::Dataset(std::string name, std::vector<std::string> column_names,
                 std::vector<ColumnData> columns, Index target_col)
    : name_(std::move(name)),
      column_names_(std::move(column_names)),
      columns_(std::move(columns)),
      target_(target_col) {
  if (columns_.size() != column_names_.size()) {
    throw Error(ErrorCode::InvalidSubset, "column name count does not match column count");
  }
  if (columns_.size() < 2) {
    throw Error(ErrorCode::InvalidSubset, "a dataset needs at least one feature and the target");
  }
  if (target_ >= columns_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "target column out of range");
  }
  n_rows_ = columns_.front().size();
  if (n_rows_ == 0) throw Error(ErrorCode::EmptyFile, "dataset has no rows");
  for (const auto& c : columns_) {
    if (c.size() != n_rows_) throw Error(ErrorCode::RaggedRows, "columns differ in length");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& n : column_names_) {
    if (!seen.insert(n).second) {
      throw Error(ErrorCode::InvalidSubset, "duplicate column name '" + n + "'");
    }
  }
}

std::optional<Index> Dataset::find_column(std::string_view name) const {
  auto it = std::find(column_names_.begin(), column_names_.end(), name);
  if (it == column_names_.end()) return std::nullopt;
  return static_cast<Index>(it - column_names_.begin());
}

// --- SubsetIndices ----------------------------------------------------------

namespace {

bool sorted_unique_in_range(std::span<const Index> v, Index bound) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= bound) return false;
    if (i > 0 && v[i - 1] >= v[i]) return false;
  }
  return true;
}

void check_indices(std::span<const Index> v, Index bound, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= bound) {
      throw Error(ErrorCode::IndexOutOfRange,
                  std::string(what) + " index " + std::to_string(v[i]) + " >= " + std::to_string(bound));
    }
    if (i > 0 && v[i - 1] == v[i]) {
      throw Error(ErrorCode::InvalidSubset, std::string("duplicate ") + what + " index " + std::to_string(v[i]));
    }
  }
}

}  // namespace

SubsetIndices SubsetIndices::make(std::vector<Index> rows, std::vector<Index> cols, const Shape& shape) {
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  SubsetIndices s(std::move(rows), std::move(cols));
  s.validate(shape);
  return s;
}

SubsetIndices SubsetIndices::full(const Shape& shape) {
  std::vector<Index> rows(shape.rows);
  std::vector<Index> cols(shape.cols);
  for (Index i = 0; i < shape.rows; ++i) rows[i] = i;
  for (Index j = 0; j < shape.cols; ++j) cols[j] = j;
  return SubsetIndices(std::move(rows), std::move(cols));
}

bool SubsetIndices::is_valid(const Shape& shape) const noexcept {
  if (rows_.empty() || rows_.size() > shape.rows) return false;
  if (cols_.size() < 2 || cols_.size() > shape.cols) return false;
  if (!sorted_unique_in_range(rows_, shape.rows)) return false;
  if (!sorted_unique_in_range(cols_, shape.cols)) return false;
  return std::binary_search(cols_.begin(), cols_.end(), shape.target);
}

void SubsetIndices::validate(const Shape& shape) const {
  check_indices(rows_, shape.rows, "row");
  check_indices(cols_, shape.cols, "column");
  if (!std::is_sorted(rows_.begin(), rows_.end()) || !std::is_sorted(cols_.begin(), cols_.end())) {
    throw Error(ErrorCode::InvalidSubset, "indices must be sorted");
  }
  if (rows_.empty()) throw Error(ErrorCode::InvalidSubset, "subset needs at least one row");
  if (!std::binary_search(cols_.begin(), cols_.end(), shape.target)) {
    throw Error(ErrorCode::TargetMissing, "subset columns do not include the target column");
  }
  if (cols_.size() < 2) {
    throw Error(ErrorCode::InvalidSubset, "subset needs the target plus at least one feature");
  }
}

std::size_t SubsetIndices::hash() const noexcept {
  // FNV-1a over both index sets with a separator.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (Index r : rows_) mix(r);
  mix(~std::uint64_t{0});
  for (Index c : cols_) mix(c);
  return static_cast<std::size_t>(h);
}

// --- views ------------------------------------------------------------------

DatasetView::DatasetView(const Dataset& dataset, std::vector<Index> rows, std::vector<Index> cols)
    : dataset_(&dataset), rows_(std::move(rows)), cols_(std::move(cols)) {
  std::sort(rows_.begin(), rows_.end());
  std::sort(cols_.begin(), cols_.end());
  auto check = [](std::span<const Index> v, Index bound, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] >= bound || (i > 0 && v[i - 1] == v[i])) {
        throw Error(ErrorCode::IndexOutOfRange, std::string("invalid ") + what + " index in view");
      }
    }
  };
  check(rows_, dataset.n_rows(), "row");
  check(cols_, dataset.n_cols(), "column");
}

DatasetView::DatasetView(const Dataset& dataset) : dataset_(&dataset) {
  rows_.resize(dataset.n_rows());
  cols_.resize(dataset.n_cols());
  for (Index i = 0; i < rows_.size(); ++i) rows_[i] = i;
  for (Index j = 0; j < cols_.size(); ++j) cols_[j] = j;
}

DatasetView view(const Dataset& dataset, const SubsetIndices& subset) {
  subset.validate(dataset.shape());
  return DatasetView(dataset, {subset.rows().begin(), subset.rows().end()},
                     {subset.cols().begin(), subset.cols().end()});
}

SubsetIndices random_subset(const Shape& shape, Index n, Index m, Rng& rng) {
  if (n > shape.rows || m > shape.cols) {
    throw Error(ErrorCode::SizeTooLarge, "requested " + std::to_string(n) + "x" + std::to_string(m) +
                                             " subset of a " + std::to_string(shape.rows) + "x" +
                                             std::to_string(shape.cols) + " dataset");
  }
  if (n < 1 || m < 2) throw Error(ErrorCode::InvalidSubset, "subset must be at least 1x2");
  std::vector<Index> rows = sample_distinct(rng, shape.rows, n);
  // Draw m-1 features from the M-1 non-target columns, then map around the target.
  std::vector<Index> cols = sample_distinct(rng, shape.cols - 1, m - 1);
  for (Index& c : cols) {
    if (c >= shape.target) ++c;
  }
  cols.push_back(shape.target);
  return SubsetIndices::make(std::move(rows), std::move(cols), shape);
}

std::uint64_t subset_count(const Shape& shape, Index n, Index m) {
  auto choose = [](std::uint64_t total, std::uint64_t k) -> std::uint64_t {
    if (k > total) return 0;
    k = std::min(k, total - k);
    long double acc = 1.0L;
    for (std::uint64_t i = 1; i <= k; ++i) {
      acc = acc * static_cast<long double>(total - k + i) / static_cast<long double>(i);
    }
    if (acc >= 1.8e19L) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(std::llround(acc));
  };
  if (m < 1 || shape.cols < 1) return 0;
  const long double prod =
      static_cast<long double>(choose(shape.rows, n)) * static_cast<long double>(choose(shape.cols - 1, m - 1));
  if (prod >= 1.8e19L) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(prod);
}

SubsetSize default_subset_size(const Shape& shape) {
  auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(shape.rows))));
  auto m = static_cast<Index>(std::llround(0.25 * static_cast<double>(shape.cols)));
  n = std::clamp<Index>(n, 1, shape.rows);
  m = std::clamp<Index>(std::max<Index>(m, 2), 2, shape.cols);
  return {n, m};
}

Index resolve_size(std::string_view spec, Index total, Index minimum) {
  auto bad = [&] { return Error(ErrorCode::InvalidParams, "bad size spec '" + std::string(spec) + "'"); };
  if (spec == "sqrt") {
    return std::clamp<Index>(static_cast<Index>(std::llround(std::sqrt(static_cast<double>(total)))), minimum, total);
  }
  if (spec.find('.') != std::string_view::npos) {
    double f = 0.0;
    auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), f);
    if (ec != std::errc() || ptr != spec.data() + spec.size() || !(f > 0.0 && f <= 1.0)) throw bad();
    const auto n = static_cast<Index>(std::llround(f * static_cast<double>(total)));
    return std::clamp<Index>(std::max(n, minimum), minimum, total);
  }
  Index n = 0;
  auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), n);
  if (ec != std::errc() || ptr != spec.data() + spec.size() || n == 0) throw bad();
  return n;
}

// --- ingestion ----------------------------------------------------------------

namespace {

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

/// Interns one column of raw cells.
ColumnData intern_column(const std::vector<std::vector<std::string>>& rows, std::size_t j,
                         const IngestOptions& options) {
  const std::size_t n = rows.size();
  bool numeric = true;
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (const auto& row : rows) {
    const std::string& cell = row[j];
    if (cell.empty()) continue;
    auto v = parse_number(cell);
    if (!v) {
      numeric = false;
      break;
    }
    lo = any ? std::min(lo, *v) : *v;
    hi = any ? std::max(hi, *v) : *v;
    any = true;
  }
  numeric = numeric && any;

  std::vector<SymbolId> symbols(n);
  std::vector<std::string> dictionary;
  std::unordered_map<std::string, SymbolId> lookup;
  auto intern = [&](const std::string& text) {
    auto [it, inserted] = lookup.try_emplace(text, static_cast<SymbolId>(dictionary.size()));
    if (inserted) dictionary.push_back(text);
    return it->second;
  };

  if (numeric && options.bins && *options.bins > 0) {
    const std::size_t bins = *options.bins;
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::string> labels(bins);
    for (std::size_t b = 0; b < bins; ++b) {
      std::ostringstream os;
      os << std::setprecision(6) << '[' << lo + width * static_cast<double>(b) << ','
         << lo + width * static_cast<double>(b + 1) << (b + 1 == bins ? "]" : ")");
      labels[b] = os.str();
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& cell = rows[i][j];
      if (cell.empty()) {
        symbols[i] = intern(std::string(kMissingValue));
        continue;
      }
      std::size_t b = 0;
      if (width > 0.0) {
        b = static_cast<std::size_t>(std::floor((*parse_number(cell) - lo) / width));
        b = std::min(b, bins - 1);
      }
      symbols[i] = intern(labels[b]);
    }
    return ColumnData(std::move(symbols), std::move(dictionary), ColumnKind::NumericBinned);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::string& cell = rows[i][j];
    symbols[i] = intern(cell.empty() ? std::string(kMissingValue) : cell);
  }
  return ColumnData(std::move(symbols), std::move(dictionary),
                    numeric ? ColumnKind::NumericSymbol : ColumnKind::Categorical);
}

/// RFC-4180 record splitter. Quoted fields may contain delimiters, doubled
/// quotes and line breaks. Returns false at end of input.
bool next_record(std::istream& in, char delim, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (;;) {
    int ch = in.get();
    if (ch == std::char_traits<char>::eof()) {
      fields.push_back(std::move(field));
      return true;
    }
    char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == delim) {
      fields.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get();
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
}

bool blank_record(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields[0].empty();
}

}  // namespace

Dataset from_table(std::vector<std::string> header, const std::vector<std::vector<std::string>>& rows,
                   std::string_view target, const IngestOptions& options) {
  if (header.empty()) throw Error(ErrorCode::EmptyFile, "no header row");
  auto target_it = std::find(header.begin(), header.end(), target);
  if (target_it == header.end()) {
    throw Error(ErrorCode::MissingTarget, "target column '" + std::string(target) + "' not in header");
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyFile, "no data rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != header.size()) {
      throw Error(ErrorCode::RaggedRows, "row " + std::to_string(i + 1) + " has " +
                                             std::to_string(rows[i].size()) + " fields, expected " +
                                             std::to_string(header.size()));
    }
  }
  std::vector<ColumnData> columns;
  columns.reserve(header.size());
  for (std::size_t j = 0; j < header.size(); ++j) columns.push_back(intern_column(rows, j, options));
  const auto target_index = static_cast<Index>(target_it - header.begin());
  return Dataset(options.name.empty() ? "dataset" : options.name, std::move(header), std::move(columns),
                 target_index);
}

Dataset read_csv(std::istream& in, std::string_view target, const IngestOptions& options) {
  std::vector<std::string> header;
  if (!next_record(in, options.delimiter, header) || blank_record(header)) {
    throw Error(ErrorCode::EmptyFile, "input is empty");
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> fields;
  while (next_record(in, options.delimiter, fields)) {
    if (blank_record(fields)) continue;
    rows.push_back(fields);
  }
  return from_table(std::move(header), rows, target, options);
}

Dataset load_csv(const std::filesystem::path& path, std::string_view target, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  IngestOptions opts = options;
  if (opts.name.empty()) opts.name = path.stem().string();
  return read_csv(in, target, opts);
}

namespace {

void write_field(std::ostream& out, std::string_view text, char delim) {
  if (text == kMissingValue) return;
  bool needs_quotes = text.find_first_of(std::string{delim, '"', '\n', '\r'}) != std::string_view::npos;
  if (!needs_quotes) {
    out << text;
    return;
  }
  out << '"';
  for (char c : text) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write_csv(std::ostream& out, const DatasetView& v, char delimiter) {
  for (Index j = 0; j < v.n_cols(); ++j) {
    if (j > 0) out << delimiter;
    write_field(out, v.column_name(j), delimiter);
  }
  out << '\n';
  for (Index i = 0; i < v.n_rows(); ++i) {
    for (Index j = 0; j < v.n_cols(); ++j) {
      if (j > 0) out << delimiter;
      write_field(out, v.raw(i, j), delimiter);
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const DatasetView& v, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_csv(out, v, delimiter);
}

}  // namespace substrat
