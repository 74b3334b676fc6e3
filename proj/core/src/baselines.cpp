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

#include "substrat/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "substrat/error.hpp"

namespace substrat {

namespace {

constexpr std::array<std::pair<BaselineKind, std::string_view>, 7> kNames{{
    {BaselineKind::Mc, "mc"},
    {BaselineKind::Mab, "mab"},
    {BaselineKind::GreedySeq, "greedy_seq"},
    {BaselineKind::GreedyMult, "greedy_mult"},
    {BaselineKind::Km, "km"},
    {BaselineKind::IgRand, "ig_rand"},
    {BaselineKind::IgKm, "ig_km"},
}};

void check_size(const Shape& shape, Index n, Index m) {
  if (n > shape.rows || m > shape.cols) throw Error(ErrorCode::SizeTooLarge, "subset larger than dataset");
  if (n < 1 || m < 2) throw Error(ErrorCode::InvalidSubset, "subset must be at least 1x2");
}

std::vector<Index> insert_sorted(std::span<const Index> v, Index x) {
  std::vector<Index> out;
  out.reserve(v.size() + 1);
  auto pos = std::lower_bound(v.begin(), v.end(), x);
  out.insert(out.end(), v.begin(), pos);
  out.push_back(x);
  out.insert(out.end(), pos, v.end());
  return out;
}

}  // namespace

std::string_view to_string(BaselineKind kind) noexcept {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "mc";
}

std::optional<BaselineKind> parse_baseline(std::string_view name) noexcept {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

// --- Monte-Carlo ------------------------------------------------------------------

SearchResult mc_search(const Dataset& dataset, const Measure& measure, Index n, Index m,
                       const McBudget& budget, Rng& rng) {
  const Shape shape = dataset.shape();
  check_size(shape, n, m);
  if (!budget.iterations && !budget.wall_clock) {
    throw Error(ErrorCode::InvalidParams, "Monte-Carlo search needs an iteration or wall-clock budget");
  }
  if ((budget.iterations && *budget.iterations == 0) || (budget.wall_clock && budget.wall_clock->count() <= 0)) {
    throw Error(ErrorCode::InvalidParams, "Monte-Carlo budget must be positive");
  }
  Stopwatch clock;
  LossEvaluator evaluator(dataset, measure);
  const std::uint64_t space = subset_count(shape, n, m);
  std::unordered_set<SubsetIndices, SubsetHash> seen;

  SearchResult result;
  result.strategy = "mc";
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t drawn = 0;;) {
    if (budget.iterations && drawn >= *budget.iterations) break;
    if (budget.wall_clock && clock.elapsed() >= *budget.wall_clock) break;
    if (budget.deduplicate && seen.size() >= space) break;

    SubsetIndices s = random_subset(shape, n, m, rng);
    // A repeated draw does not consume budget in deduplicating mode.
    if (budget.deduplicate && !seen.insert(s).second) continue;
    ++drawn;
    const double l = evaluator.loss(s.rows(), s.cols());
    if (l < best) {
      best = l;
      result.best = std::move(s);
    }
  }
  result.best_loss = {best};
  result.evaluations = evaluator.evaluations();
  result.work_units = evaluator.cells_visited();
  result.generations_run = 0;
  result.wall_time = clock.elapsed();
  return result;
}

// --- bandit -----------------------------------------------------------------------

BanditSearch::BanditSearch(const Dataset& dataset, const Measure& measure, Index n, Index m, double epsilon)
    : dataset_(&dataset),
      evaluator_(dataset, measure),
      n_(n),
      m_(m),
      epsilon_(epsilon),
      row_values_(dataset.n_rows(), 0.0),
      col_values_(dataset.n_cols(), 0.0),
      row_counts_(dataset.n_rows(), 0),
      col_counts_(dataset.n_cols(), 0),
      best_loss_(std::numeric_limits<double>::infinity()) {
  check_size(dataset.shape(), n, m);
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::InvalidParams, "epsilon must lie in [0, 1]");
}

std::vector<Index> BanditSearch::pick(std::span<const double> values, Index count, std::span<const Index> forced,
                                      Rng& rng) const {
  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values[a] > values[b]; });

  std::vector<Index> chosen(forced.begin(), forced.end());
  std::sort(chosen.begin(), chosen.end());
  std::size_t cursor = 0;
  for (Index slot = 0; slot < count; ++slot) {
    Index arm;
    if (bernoulli(rng, epsilon_)) {
      arm = *pick_absent(rng, values.size(), chosen);
    } else {
      while (std::binary_search(chosen.begin(), chosen.end(), order[cursor])) ++cursor;
      arm = order[cursor];
    }
    chosen.insert(std::lower_bound(chosen.begin(), chosen.end(), arm), arm);
  }
  return chosen;
}

SubsetIndices BanditSearch::propose(Rng& rng) const {
  const Shape shape = dataset_->shape();
  std::vector<Index> rows = pick(row_values_, n_, {}, rng);
  const std::array<Index, 1> target{shape.target};
  std::vector<Index> cols = pick(col_values_, m_ - 1, target, rng);
  return SubsetIndices::make(std::move(rows), std::move(cols), shape);
}

void BanditSearch::credit(const SubsetIndices& subset, double reward) {
  for (Index r : subset.rows()) {
    row_values_[r] += (reward - row_values_[r]) / static_cast<double>(++row_counts_[r]);
  }
  for (Index c : subset.cols()) {
    col_values_[c] += (reward - col_values_[c]) / static_cast<double>(++col_counts_[c]);
  }
}

double BanditSearch::step(Rng& rng) {
  SubsetIndices s = propose(rng);
  const double l = evaluator_.loss(s);
  if (l < best_loss_) {
    best_loss_ = l;
    best_ = s;
  }
  credit(s, -l);
  ++rounds_;
  return -l;
}

SearchResult mab_search(const Dataset& dataset, const Measure& measure, Index n, Index m, const MabParams& params,
                        Rng& rng) {
  if (params.rounds == 0) throw Error(ErrorCode::InvalidParams, "bandit needs at least one round");
  Stopwatch clock;
  BanditSearch bandit(dataset, measure, n, m, params.epsilon);
  for (std::uint64_t t = 0; t < params.rounds; ++t) bandit.step(rng);
  SearchResult result;
  result.strategy = "mab";
  result.best = bandit.best();
  result.best_loss = {bandit.best_loss()};
  result.evaluations = bandit.evaluator().evaluations();
  result.work_units = bandit.evaluator().cells_visited();
  result.wall_time = clock.elapsed();
  return result;
}

// --- greedy ---------------------------------------------------------------------------

namespace {

/// Adds the candidate in [0, universe) \ current minimizing `score`; ties by
/// lowest index.
template <typename Score>
Index best_addition(Index universe, std::span<const Index> current, Score&& score) {
  double best = std::numeric_limits<double>::infinity();
  Index pick = universe;
  for (Index x = 0; x < universe; ++x) {
    if (std::binary_search(current.begin(), current.end(), x)) continue;
    const double s = score(x);
    if (s < best) {
      best = s;
      pick = x;
    }
  }
  return pick;
}

SearchResult finish_greedy(std::string name, const Dataset& dataset, LossEvaluator& evaluator,
                           std::vector<Index> rows, std::vector<Index> cols, const Stopwatch& clock) {
  SearchResult result;
  result.strategy = std::move(name);
  result.best = SubsetIndices::make(std::move(rows), std::move(cols), dataset.shape());
  result.best_loss = {evaluator.loss(result.best.rows(), result.best.cols())};
  result.evaluations = evaluator.evaluations();
  result.work_units = evaluator.cells_visited();
  result.wall_time = clock.elapsed();
  return result;
}

}  // namespace

SearchResult greedy_seq(const Dataset& dataset, const Measure& measure, Index n, Index m) {
  const Shape shape = dataset.shape();
  check_size(shape, n, m);
  Stopwatch clock;
  LossEvaluator evaluator(dataset, measure);

  std::vector<Index> all_cols(shape.cols);
  std::iota(all_cols.begin(), all_cols.end(), Index{0});
  std::vector<Index> rows;
  while (rows.size() < n) {
    Index r = best_addition(shape.rows, rows, [&](Index x) { return evaluator.loss(insert_sorted(rows, x), all_cols); });
    rows = insert_sorted(rows, r);
  }
  std::vector<Index> cols{shape.target};
  while (cols.size() < m) {
    Index c = best_addition(shape.cols, cols, [&](Index x) { return evaluator.loss(rows, insert_sorted(cols, x)); });
    cols = insert_sorted(cols, c);
  }
  return finish_greedy("greedy_seq", dataset, evaluator, std::move(rows), std::move(cols), clock);
}

SearchResult greedy_mult(const Dataset& dataset, const Measure& measure, Index n, Index m) {
  const Shape shape = dataset.shape();
  check_size(shape, n, m);
  Stopwatch clock;
  LossEvaluator evaluator(dataset, measure);

  std::vector<Index> rows;
  std::vector<Index> cols{shape.target};
  while (rows.size() < n || cols.size() < m) {
    if (rows.size() < n && cols.size() < m) {
      double best = std::numeric_limits<double>::infinity();
      Index best_r = shape.rows;
      Index best_c = shape.cols;
      for (Index r = 0; r < shape.rows; ++r) {
        if (std::binary_search(rows.begin(), rows.end(), r)) continue;
        const auto with_r = insert_sorted(rows, r);
        for (Index c = 0; c < shape.cols; ++c) {
          if (std::binary_search(cols.begin(), cols.end(), c)) continue;
          const double l = evaluator.loss(with_r, insert_sorted(cols, c));
          if (l < best) {
            best = l;
            best_r = r;
            best_c = c;
          }
        }
      }
      rows = insert_sorted(rows, best_r);
      cols = insert_sorted(cols, best_c);
    } else if (rows.size() < n) {
      Index r = best_addition(shape.rows, rows, [&](Index x) { return evaluator.loss(insert_sorted(rows, x), cols); });
      rows = insert_sorted(rows, r);
    } else {
      Index c = best_addition(shape.cols, cols, [&](Index x) { return evaluator.loss(rows, insert_sorted(cols, x)); });
      cols = insert_sorted(cols, c);
    }
  }
  return finish_greedy("greedy_mult", dataset, evaluator, std::move(rows), std::move(cols), clock);
}

// --- k-means ---------------------------------------------------------------------------

namespace {

std::vector<double> column_frequencies(const ColumnData& column) {
  std::vector<double> freq(column.cardinality(), 0.0);
  for (SymbolId s : column.symbols()) freq[s] += 1.0;
  const double n = static_cast<double>(column.size());
  for (double& f : freq) f /= n;
  return freq;
}

/// Clusters `points` into k groups and returns k distinct point indices,
/// or the degenerate fallback when there are fewer distinct points than k.
std::vector<std::size_t> cluster_representatives(const PointSet& points, std::size_t k, Rng& rng,
                                                 const std::function<bool(std::size_t, std::size_t)>& same_raw) {
  const std::size_t count = points.size();
  if (k >= count) {
    std::vector<std::size_t> all(count);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  if (count_distinct(points) >= k) {
    const KMeansResult km = kmeans(points, k, rng);
    return nearest_representatives(points, km.centroids);
  }

  // Degenerate clustering: one point per distinct encoding, then random
  // points that are not raw duplicates of anything picked, then anything.
  std::vector<std::size_t> picks;
  std::vector<bool> taken(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    bool dup = false;
    for (std::size_t p : picks) {
      auto a = points.point(i);
      auto b = points.point(p);
      if (std::equal(a.begin(), a.end(), b.begin())) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      picks.push_back(i);
      taken[i] = true;
    }
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < count; ++i) {
    if (!taken[i]) rest.push_back(i);
  }
  std::shuffle(rest.begin(), rest.end(), rng);
  for (std::size_t i : rest) {
    if (picks.size() >= k) break;
    if (std::none_of(picks.begin(), picks.end(), [&](std::size_t p) { return same_raw(i, p); })) {
      picks.push_back(i);
      taken[i] = true;
    }
  }
  for (std::size_t i : rest) {
    if (picks.size() >= k) break;
    if (!taken[i]) {
      picks.push_back(i);
      taken[i] = true;
    }
  }
  return picks;
}

}  // namespace

PointSet frequency_encode_rows(const Dataset& dataset) {
  const Index n = dataset.n_rows();
  const Index m = dataset.n_cols();
  PointSet points{std::vector<double>(n * m), m};
  for (Index j = 0; j < m; ++j) {
    const ColumnData& col = dataset.column(j);
    const auto freq = column_frequencies(col);
    for (Index i = 0; i < n; ++i) points.data[i * m + j] = freq[col[i]];
  }
  return points;
}

PointSet frequency_encode_columns(const Dataset& dataset) {
  const Index n = dataset.n_rows();
  PointSet points{{}, n};
  points.data.reserve((dataset.n_cols() - 1) * n);
  for (Index j = 0; j < dataset.n_cols(); ++j) {
    if (j == dataset.target_col()) continue;
    const ColumnData& col = dataset.column(j);
    const auto freq = column_frequencies(col);
    for (Index i = 0; i < n; ++i) points.data.push_back(freq[col[i]]);
  }
  return points;
}

std::vector<Index> km_rows(const Dataset& dataset, Index n, Rng& rng) {
  check_size(dataset.shape(), n, 2);
  const PointSet points = frequency_encode_rows(dataset);
  auto same_row = [&](std::size_t a, std::size_t b) {
    for (const auto& col : dataset.columns()) {
      if (col[a] != col[b]) return false;
    }
    return true;
  };
  auto picks = cluster_representatives(points, n, rng, same_row);
  std::vector<Index> rows(picks.begin(), picks.end());
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::vector<Index> km_cols(const Dataset& dataset, Index m, Rng& rng) {
  check_size(dataset.shape(), 1, m);
  const PointSet points = frequency_encode_columns(dataset);
  auto to_column = [&](std::size_t k) { return k >= dataset.target_col() ? k + 1 : k; };
  auto same_col = [&](std::size_t a, std::size_t b) {
    const auto& x = dataset.column(to_column(a));
    const auto& y = dataset.column(to_column(b));
    for (Index i = 0; i < dataset.n_rows(); ++i) {
      if (x.raw(i) != y.raw(i)) return false;
    }
    return true;
  };
  auto picks = cluster_representatives(points, m - 1, rng, same_col);
  std::vector<Index> cols;
  for (std::size_t k : picks) cols.push_back(to_column(k));
  std::sort(cols.begin(), cols.end());
  return cols;
}

SubsetIndices km_select(const Dataset& dataset, Index n, Index m, Rng& rng) {
  check_size(dataset.shape(), n, m);
  std::vector<Index> rows = km_rows(dataset, n, rng);
  std::vector<Index> cols = km_cols(dataset, m, rng);
  cols.push_back(dataset.target_col());
  return SubsetIndices::make(std::move(rows), std::move(cols), dataset.shape());
}

// --- information gain ------------------------------------------------------------------

namespace {

double entropy_of_counts(const std::unordered_map<std::uint64_t, std::uint64_t>& counts, double total) {
  double h = 0.0;
  for (const auto& [_, c] : counts) {
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double information_gain(const Dataset& dataset, Index column) {
  const ColumnData& x = dataset.column(column);
  const ColumnData& y = dataset.column(dataset.target_col());
  const double n = static_cast<double>(dataset.n_rows());
  std::unordered_map<std::uint64_t, std::uint64_t> cx, cy, cxy;
  for (Index i = 0; i < dataset.n_rows(); ++i) {
    ++cx[x[i]];
    ++cy[y[i]];
    ++cxy[(static_cast<std::uint64_t>(x[i]) << 32) | y[i]];
  }
  // H(Y | X) = H(X, Y) - H(X)
  const double h_y = entropy_of_counts(cy, n);
  const double h_y_given_x = entropy_of_counts(cxy, n) - entropy_of_counts(cx, n);
  return std::max(0.0, h_y - h_y_given_x);
}

std::vector<Index> ig_rank(const Dataset& dataset) {
  std::vector<std::pair<double, Index>> scored;
  for (Index j = 0; j < dataset.n_cols(); ++j) {
    if (j == dataset.target_col()) continue;
    scored.emplace_back(information_gain(dataset, j), j);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Index> order;
  for (const auto& [_, j] : scored) order.push_back(j);
  return order;
}

namespace {

std::vector<Index> top_ig_columns(const Dataset& dataset, Index m) {
  std::vector<Index> ranked = ig_rank(dataset);
  std::vector<Index> cols(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(m - 1));
  cols.push_back(dataset.target_col());
  return cols;
}

}  // namespace

SubsetIndices ig_rand(const Dataset& dataset, Index n, Index m, Rng& rng) {
  check_size(dataset.shape(), n, m);
  return SubsetIndices::make(sample_distinct(rng, dataset.n_rows(), n), top_ig_columns(dataset, m),
                             dataset.shape());
}

SubsetIndices ig_km(const Dataset& dataset, Index n, Index m, Rng& rng) {
  check_size(dataset.shape(), n, m);
  return SubsetIndices::make(km_rows(dataset, n, rng), top_ig_columns(dataset, m), dataset.shape());
}

// --- dispatch ---------------------------------------------------------------------------

SearchResult run_baseline(const Dataset& dataset, const Measure& measure, Index n, Index m,
                          const BaselineConfig& config, Rng& rng) {
  switch (config.kind) {
    case BaselineKind::Mc: return mc_search(dataset, measure, n, m, config.mc, rng);
    case BaselineKind::Mab: return mab_search(dataset, measure, n, m, config.mab, rng);
    case BaselineKind::GreedySeq: return greedy_seq(dataset, measure, n, m);
    case BaselineKind::GreedyMult: return greedy_mult(dataset, measure, n, m);
    case BaselineKind::Km:
    case BaselineKind::IgRand:
    case BaselineKind::IgKm: break;
  }
  Stopwatch clock;
  SearchResult result;
  result.strategy = std::string(to_string(config.kind));
  if (config.kind == BaselineKind::Km) {
    result.best = km_select(dataset, n, m, rng);
  } else if (config.kind == BaselineKind::IgRand) {
    result.best = ig_rand(dataset, n, m, rng);
  } else {
    result.best = ig_km(dataset, n, m, rng);
  }
  result.best_loss = loss(dataset, result.best, measure);
  result.evaluations = 1;
  result.work_units = static_cast<std::uint64_t>(dataset.n_rows()) * dataset.n_cols() +
                      static_cast<std::uint64_t>(n) * m;
  result.wall_time = clock.elapsed();
  return result;
}

}  // namespace substrat
