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

/// @file gendst.hpp
/// Genetic search for measure-preserving data subsets (Gen-DST).
///
/// A candidate is a SubsetIndices genome (n row genes, m column genes). Each
/// generation applies, in order: per-candidate mutation with probability
/// `mutation_prob`, crossover over a random pairing of the population, and a
/// royalty-tournament selection. The best candidate ever evaluated is returned.

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "substrat/dataset.hpp"
#include "substrat/measures.hpp"
#include "substrat/random.hpp"
#include "substrat/search.hpp"

namespace substrat {

struct GaParams {
  std::size_t generations = 30;   // psi
  std::size_t population = 100;   // phi
  double mutation_prob = 0.025;   // xi, per candidate per generation
  double elite_fraction = 0.05;   // alpha
  double row_col_prob = 0.9;      // p_rc: probability an operator acts on rows
  /// Early stop when the best fitness improves by less than this for
  /// kConvergencePatience consecutive generations. 0 disables it.
  double convergence_eps = 0.0;
  std::uint64_t seed = kDefaultSeed;
  /// DST size; 0 selects the default (sqrt(N), 0.25 M) policy.
  Index subset_rows = 0;
  Index subset_cols = 0;

  static constexpr std::size_t kConvergencePatience = 3;

  /// Throws InvalidParams.
  void validate() const;
};

/// Replaces exactly one row (probability p_rc) or one non-target column by an
/// index not already present. Returns the candidate unchanged when the chosen
/// dimension is saturated (n == N or m == M).
SubsetIndices mutate(const SubsetIndices& candidate, const Shape& shape, double row_col_prob, Rng& rng);

/// Splits both parents' rows (probability p_rc) or columns at a random size
/// 1 < s < k and recombines complementary halves. Overlaps are refilled with
/// random absent indices; the target column is forced into both offspring.
/// Offspring of a column crossover keep parent rows (G_ab gets r_a, G_ba gets
/// r_b), and vice versa. Throws IncompatibleShapes on mismatched sizes.
std::pair<SubsetIndices, SubsetIndices> crossover(const SubsetIndices& a, const SubsetIndices& b,
                                                  const Shape& shape, double row_col_prob, Rng& rng);

struct ScoredCandidate {
  SubsetIndices subset;
  double fitness = 0.0;
};

/// Number of elite slots for a given alpha and phi: ceil(alpha * phi), capped at phi.
std::size_t elite_count(double elite_fraction, std::size_t population);

/// Royalty tournament. The top elite_count(alpha, phi) candidates pass
/// unchanged (ordered by fitness, ties by position); the remaining slots are
/// drawn with replacement from the whole population with weight
/// f - min f + 1e-9. Returns exactly `phi` candidates. Throws EmptyPopulation.
std::vector<ScoredCandidate> select(std::span<const ScoredCandidate> population, double elite_fraction,
                                    std::size_t phi, Rng& rng);

SearchResult run_gendst(const Dataset& dataset, const Measure& measure, const GaParams& params);

/// Exhaustive minimizer over every n x m subset that contains the target.
/// Ties keep the lexicographically first subset. Throws TooManyCombinations
/// when C(N, n) * C(M-1, m-1) exceeds `limit`.
SearchResult brute_force_dst(const Dataset& dataset, const Measure& measure, Index n, Index m,
                             std::uint64_t limit = 2'000'000);

}  // namespace substrat
