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

#include "substrat/synthetic.hpp"

#include <string>
#include <vector>

#include "substrat/error.hpp"
#include "substrat/random.hpp"

namespace substrat {

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.rows == 0 || spec.cols < 2 || spec.classes < 1) {
    throw Error(ErrorCode::InvalidParams, "synthetic data needs rows >= 1, cols >= 2, classes >= 1");
  }
  Rng rng(spec.seed);
  std::vector<std::string> header;
  for (Index j = 0; j + 1 < spec.cols; ++j) header.push_back("f" + std::to_string(j));
  header.emplace_back("y");

  std::vector<std::vector<std::string>> rows(spec.rows);
  for (auto& row : rows) {
    const Index y = uniform_index(rng, spec.classes);
    row.reserve(spec.cols);
    for (Index j = 0; j + 1 < spec.cols; ++j) {
      const Index card = 2 + 3 * j;
      Index v = uniform_index(rng, card);
      if (bernoulli(rng, spec.signal)) v = (y + j) % card;
      row.push_back(std::to_string(v));
    }
    row.push_back(std::to_string(y));
  }
  IngestOptions options;
  options.name = "synthetic-" + std::to_string(spec.seed);
  return from_table(std::move(header), rows, "y", options);
}

}  // namespace substrat
