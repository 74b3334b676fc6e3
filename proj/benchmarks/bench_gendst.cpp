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


#include <benchmark/benchmark.h>

#include "substrat/baselines.hpp"
#include "substrat/gendst.hpp"
#include "substrat/synthetic.hpp"

namespace {

using namespace substrat;

void BM_Mutate(benchmark::State& state) {
  const Shape shape{10'000, 20, 19};
  Rng rng(1);
  SubsetIndices s = random_subset(shape, 100, 5, rng);
  for (auto _ : state) s = mutate(s, shape, 0.9, rng);
}
BENCHMARK(BM_Mutate);

void BM_Crossover(benchmark::State& state) {
  const Shape shape{10'000, 20, 19};
  Rng rng(1);
  SubsetIndices a = random_subset(shape, 100, 5, rng);
  SubsetIndices b = random_subset(shape, 100, 5, rng);
  for (auto _ : state) std::tie(a, b) = crossover(a, b, shape, 0.9, rng);
}
BENCHMARK(BM_Crossover);

void BM_GenDst(benchmark::State& state) {
  const Dataset d = make_synthetic({.rows = static_cast<Index>(state.range(0)), .cols = 16, .seed = 3});
  const EntropyMeasure h;
  for (auto _ : state) benchmark::DoNotOptimize(run_gendst(d, h, {.seed = 7}).best_loss.value);
}
BENCHMARK(BM_GenDst)->Arg(1'000)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Mc100k(benchmark::State& state) {
  const Dataset d = make_synthetic({.rows = 1'000, .cols = 12, .seed = 3});
  const EntropyMeasure h;
  const SubsetSize size = default_subset_size(d.shape());
  for (auto _ : state) {
    Rng rng(7);
    benchmark::DoNotOptimize(mc_search(d, h, size.rows, size.cols, McBudget::mc100k(), rng).best_loss.value);
  }
}
BENCHMARK(BM_Mc100k)->Unit(benchmark::kMillisecond);

}  // namespace
