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

#include "substrat/gendst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "substrat/error.hpp"

namespace substrat {

void GaParams::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(mutation_prob) || !prob(elite_fraction) || !prob(row_col_prob)) {
    throw Error(ErrorCode::InvalidParams, "probabilities must lie in [0, 1]");
  }
  if (population < 2) throw Error(ErrorCode::InvalidParams, "population must be at least 2");
  if (generations < 1) throw Error(ErrorCode::InvalidParams, "generations must be at least 1");
  if (!(convergence_eps >= 0.0)) throw Error(ErrorCode::InvalidParams, "convergence_eps must be >= 0");
}

// --- mutation -----------------------------------------------------------------

SubsetIndices mutate(const SubsetIndices& candidate, const Shape& shape, double row_col_prob, Rng& rng) {
  std::vector<Index> rows(candidate.rows().begin(), candidate.rows().end());
  std::vector<Index> cols(candidate.cols().begin(), candidate.cols().end());
  if (bernoulli(rng, row_col_prob)) {
    auto replacement = pick_absent(rng, shape.rows, rows);
    if (!replacement) return candidate;
    rows[uniform_index(rng, rows.size())] = *replacement;
  } else {
    auto replacement = pick_absent(rng, shape.cols, cols);
    if (!replacement) return candidate;
    // Choose among non-target positions only.
    std::vector<std::size_t> slots;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] != shape.target) slots.push_back(k);
    }
    cols[slots[uniform_index(rng, slots.size())]] = *replacement;
  }
  return SubsetIndices::make(std::move(rows), std::move(cols), shape);
}

// --- crossover ----------------------------------------------------------------

namespace {

/// Recombines two equal-size index sets. Returns sorted sets of the same size.
std::pair<std::vector<Index>, std::vector<Index>> cross_sets(std::span<const Index> a, std::span<const Index> b,
                                                             Index universe, std::optional<Index> required,
                                                             Rng& rng) {
  const std::size_t k = a.size();
  std::vector<Index> sa(a.begin(), a.end());
  std::vector<Index> sb(b.begin(), b.end());
  if (k < 3) return {sa, sb};  // no split size with 1 < s < k

  const std::size_t s = 2 + uniform_index(rng, k - 2);
  std::shuffle(sa.begin(), sa.end(), rng);
  std::shuffle(sb.begin(), sb.end(), rng);

  auto combine = [&](const std::vector<Index>& head, const std::vector<Index>& tail) {
    std::vector<Index> out(head.begin(), head.begin() + static_cast<std::ptrdiff_t>(s));
    out.insert(out.end(), tail.begin() + static_cast<std::ptrdiff_t>(s), tail.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (required && !std::binary_search(out.begin(), out.end(), *required)) {
      if (out.size() == k) out.erase(out.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, k)));
      out.insert(std::lower_bound(out.begin(), out.end(), *required), *required);
    }
    while (out.size() < k) {
      Index fill = *pick_absent(rng, universe, out);
      out.insert(std::lower_bound(out.begin(), out.end(), fill), fill);
    }
    return out;
  };
  auto ab = combine(sa, sb);
  auto ba = combine(sb, sa);
  return {std::move(ab), std::move(ba)};
}

}  // namespace

std::pair<SubsetIndices, SubsetIndices> crossover(const SubsetIndices& a, const SubsetIndices& b,
                                                  const Shape& shape, double row_col_prob, Rng& rng) {
  if (a.n() != b.n() || a.m() != b.m()) {
    throw Error(ErrorCode::IncompatibleShapes, "crossover parents differ in size");
  }
  auto copy = [](std::span<const Index> v) { return std::vector<Index>(v.begin(), v.end()); };
  if (bernoulli(rng, row_col_prob)) {
    auto [ab, ba] = cross_sets(a.rows(), b.rows(), shape.rows, std::nullopt, rng);
    return {SubsetIndices::make(std::move(ab), copy(a.cols()), shape),
            SubsetIndices::make(std::move(ba), copy(b.cols()), shape)};
  }
  auto [ab, ba] = cross_sets(a.cols(), b.cols(), shape.cols, shape.target, rng);
  return {SubsetIndices::make(copy(a.rows()), std::move(ab), shape),
          SubsetIndices::make(copy(b.rows()), std::move(ba), shape)};
}

// --- selection ----------------------------------------------------------------

std::size_t elite_count(double elite_fraction, std::size_t population) {
  const double raw = elite_fraction * static_cast<double>(population);
  // Tolerate representation error, e.g. 0.05 * 100.
  auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::min(k, population);
}

std::vector<ScoredCandidate> select(std::span<const ScoredCandidate> population, double elite_fraction,
                                    std::size_t phi, Rng& rng) {
  if (population.empty()) throw Error(ErrorCode::EmptyPopulation, "selection over an empty population");
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return population[x].fitness > population[y].fitness;
  });

  const std::size_t elites = std::min(elite_count(elite_fraction, phi), population.size());
  std::vector<ScoredCandidate> next;
  next.reserve(phi);
  for (std::size_t k = 0; k < elites; ++k) next.push_back(population[order[k]]);

  constexpr double kWeightFloor = 1e-9;
  double min_f = std::numeric_limits<double>::infinity();
  for (const auto& c : population) min_f = std::min(min_f, c.fitness);
  std::vector<double> cumulative(population.size());
  double total = 0.0;
  for (std::size_t k = 0; k < population.size(); ++k) {
    total += population[k].fitness - min_f + kWeightFloor;
    cumulative[k] = total;
  }
  while (next.size() < phi) {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    auto k = static_cast<std::size_t>(it - cumulative.begin());
    next.push_back(population[std::min(k, population.size() - 1)]);
  }
  return next;
}

// --- Gen-DST ------------------------------------------------------------------

namespace {

GenerationStats summarize(std::size_t generation, std::span<const ScoredCandidate> population,
                          double best_ever) {
  GenerationStats st;
  st.generation = generation;
  st.generation_best = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& c : population) {
    st.generation_best = std::max(st.generation_best, c.fitness);
    sum += c.fitness;
  }
  st.mean_fitness = sum / static_cast<double>(population.size());
  st.best_fitness = std::max(best_ever, st.generation_best);
  return st;
}

}  // namespace

SearchResult run_gendst(const Dataset& dataset, const Measure& measure, const GaParams& params) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const Shape shape = dataset.shape();
  const SubsetSize defaults = default_subset_size(shape);
  const Index n = params.subset_rows ? params.subset_rows : defaults.rows;
  const Index m = params.subset_cols ? params.subset_cols : defaults.cols;

  Rng rng(params.seed);
  LossEvaluator evaluator(dataset, measure);

  std::vector<ScoredCandidate> population;
  population.reserve(params.population);
  for (std::size_t k = 0; k < params.population; ++k) {
    SubsetIndices s = random_subset(shape, n, m, rng);
    const double f = evaluator.fitness(s);
    population.push_back({std::move(s), f});
  }

  ScoredCandidate best = population.front();
  for (const auto& c : population) {
    if (c.fitness > best.fitness) best = c;
  }

  SearchResult result;
  result.strategy = "gendst";
  result.trace.push_back(summarize(0, population, best.fitness));

  std::size_t stalled = 0;
  std::vector<std::size_t> pairing(params.population);
  for (std::size_t gen = 1; gen <= params.generations; ++gen) {
    for (auto& c : population) {
      if (bernoulli(rng, params.mutation_prob)) c.subset = mutate(c.subset, shape, params.row_col_prob, rng);
    }

    std::iota(pairing.begin(), pairing.end(), std::size_t{0});
    std::shuffle(pairing.begin(), pairing.end(), rng);
    for (std::size_t k = 0; k + 1 < pairing.size(); k += 2) {
      auto& a = population[pairing[k]].subset;
      auto& b = population[pairing[k + 1]].subset;
      auto [ab, ba] = crossover(a, b, shape, params.row_col_prob, rng);
      a = std::move(ab);
      b = std::move(ba);
    }

    for (auto& c : population) c.fitness = evaluator.fitness(c.subset);
    population = select(population, params.elite_fraction, params.population, rng);

    const double previous_best = best.fitness;
    for (const auto& c : population) {
      if (c.fitness > best.fitness) best = c;
    }
    result.trace.push_back(summarize(gen, population, best.fitness));
    result.generations_run = gen;

    if (params.convergence_eps > 0.0) {
      stalled = (best.fitness - previous_best < params.convergence_eps) ? stalled + 1 : 0;
      if (stalled >= GaParams::kConvergencePatience) break;
    }
  }

  result.best = std::move(best.subset);
  result.best_loss = {-best.fitness};
  result.evaluations = evaluator.evaluations();
  result.work_units = evaluator.cells_visited();
  result.wall_time = std::chrono::steady_clock::now() - start;
  return result;
}

// --- brute force ----------------------------------------------------------------

namespace {

/// Advances a sorted k-combination of [0, universe) in lexicographic order.
bool next_combination(std::vector<Index>& combo, Index universe) {
  const std::size_t k = combo.size();
  for (std::size_t i = k; i-- > 0;) {
    if (combo[i] < universe - k + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

SearchResult brute_force_dst(const Dataset& dataset, const Measure& measure, Index n, Index m,
                             std::uint64_t limit) {
  const auto start = std::chrono::steady_clock::now();
  const Shape shape = dataset.shape();
  if (n < 1 || n > shape.rows || m < 2 || m > shape.cols) {
    throw Error(ErrorCode::SizeTooLarge, "subset size outside dataset dimensions");
  }
  const std::uint64_t total = subset_count(shape, n, m);
  if (total > limit) {
    throw Error(ErrorCode::TooManyCombinations,
                std::to_string(total) + " subsets exceed the limit of " + std::to_string(limit));
  }

  const double full_value = measure.evaluate(DatasetView(dataset));
  std::vector<Index> rows(n);
  std::iota(rows.begin(), rows.end(), Index{0});
  std::vector<Index> features(m - 1);  // ranks among non-target columns

  SearchResult result;
  result.strategy = "brute_force";
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<Index> cols(m);
  do {
    std::iota(features.begin(), features.end(), Index{0});
    do {
      for (std::size_t k = 0; k < features.size(); ++k) {
        cols[k] = features[k] >= shape.target ? features[k] + 1 : features[k];
      }
      cols[m - 1] = shape.target;
      std::vector<Index> sorted_cols = cols;
      std::sort(sorted_cols.begin(), sorted_cols.end());
      const double l = std::abs(measure.evaluate(dataset, rows, sorted_cols) - full_value);
      ++result.evaluations;
      if (l < best_loss) {
        best_loss = l;
        result.best = SubsetIndices::make(rows, std::move(sorted_cols), shape);
      }
    } while (next_combination(features, shape.cols - 1));
  } while (next_combination(rows, shape.rows));

  result.best_loss = {best_loss};
  result.wall_time = std::chrono::steady_clock::now() - start;
  return result;
}

}  // namespace substrat
