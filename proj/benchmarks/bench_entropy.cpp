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

#include "substrat/measures.hpp"
#include "substrat/synthetic.hpp"

namespace {

using namespace substrat;

const Dataset& dataset() {
  static const Dataset d = make_synthetic({.rows = 100'000, .cols = 16, .seed = 1});
  return d;
}

// DST-sized views: sqrt(N) rows, a quarter of the columns.
void BM_SubsetEntropy(benchmark::State& state) {
  const Dataset& d = dataset();
  const auto rows_n = static_cast<Index>(state.range(0));
  Rng rng(1);
  const SubsetIndices s = random_subset(d.shape(), rows_n, 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(dataset_entropy(d, s.rows(), s.cols()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows_n * 4));
}
BENCHMARK(BM_SubsetEntropy)->Arg(32)->Arg(100)->Arg(316);

void BM_FullEntropy(benchmark::State& state) {
  const Dataset& d = dataset();
  for (auto _ : state) benchmark::DoNotOptimize(dataset_entropy(DatasetView(d)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.n_rows() * d.n_cols()));
}
BENCHMARK(BM_FullEntropy)->Unit(benchmark::kMillisecond);

void BM_MemoizedLoss(benchmark::State& state) {
  const Dataset& d = dataset();
  const EntropyMeasure h;
  LossEvaluator eval(d, h);
  Rng rng(2);
  std::vector<SubsetIndices> pool;
  for (int i = 0; i < 64; ++i) pool.push_back(random_subset(d.shape(), 316, 4, rng));
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(eval.loss(pool[k++ % pool.size()]));
}
BENCHMARK(BM_MemoizedLoss);

}  // namespace
