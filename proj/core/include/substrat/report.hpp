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

/// @file report.hpp
/// JSON forms of pipeline reports and search results.
///
/// With CostUnit::WorkUnits every wall-clock field is written as null and
/// metrics are computed from work units, so output depends only on the
/// inputs and the seed.

#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

#include "substrat/pipeline.hpp"
#include "substrat/search.hpp"

namespace substrat {

enum class CostUnit { Seconds, WorkUnits };

std::string_view to_string(CostUnit unit) noexcept;

nlohmann::json to_json(const ModelConfig& model, CostUnit unit);
nlohmann::json to_json(const PipelineReport& report, CostUnit unit);

/// Inverse of to_json. Fields written as null read back as zero. Throws
/// InvalidParams on malformed input.
PipelineReport report_from_json(const nlohmann::json& json);
CostUnit cost_unit_of(const nlohmann::json& report);

/// Sidecar written next to an exported subset.
nlohmann::json search_sidecar(const SearchResult& result, const Dataset& dataset, CostUnit unit);

}  // namespace substrat
