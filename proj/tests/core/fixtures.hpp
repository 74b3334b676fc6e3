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

// Shared fixtures. Reference values were produced by
// tests/oracles/flights_oracle.py and frozen here.

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "substrat/dataset.hpp"

namespace substrat::testing {

inline std::filesystem::path data_path(const std::string& file) {
  return std::filesystem::path(SUBSTRAT_TEST_DATA_DIR) / file;
}

inline Dataset flights() { return load_csv(data_path("flights.csv"), "Satisfied"); }

// Zero-based; the printed table numbers rows and columns from 1.
inline const std::vector<Index> kGreenRows{0, 1, 2, 5, 7};
inline const std::vector<Index> kGreenCols{0, 3, 4};
inline const std::vector<Index> kRedRows{3, 4, 6, 8, 9};
inline const std::vector<Index> kRedCols{1, 2, 4};

inline constexpr std::array<double, 5> kColumnTerms{2.646439, 1.0, 1.0, 1.35678, 0.970951};
inline constexpr double kFullEntropy = 1.394834;
inline constexpr std::array<double, 3> kGreenTerms{1.370951, 1.921928, 0.970951};
inline constexpr double kGreenEntropy = 1.421276;
inline constexpr double kRedEntropy = 0.887943;

// Exhaustive 5x3 search: 166 subsets tie at the optimum, green among them.
inline constexpr double kBestLoss5x3 = 0.026442510217688397;
inline const std::vector<Index> kFirstBestRows{0, 1, 2, 3, 6};

inline constexpr std::array<double, 4> kInformationGain{0.495462, 0.0, 0.124511, 0.281291};
inline const std::vector<Index> kIgRank{0, 3, 2, 1};

inline constexpr double kOracleTol = 1e-6;

/// Table from string cells; the last column is the target "y".
inline Dataset small_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::string> header;
  for (std::size_t j = 0; j + 1 < rows.front().size(); ++j) header.push_back("c" + std::to_string(j));
  header.push_back("y");
  return from_table(header, rows, "y");
}

}  // namespace substrat::testing
