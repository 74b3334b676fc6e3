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

/// @file pipeline.hpp
/// End-to-end flow: find a DST, run AutoML on it, then either fine-tune on
/// the full data restricted to the winning model family or re-score the
/// subset configuration on the full data unchanged ("no fine-tune").
///
/// Every phase is costed twice: wall-clock seconds, and deterministic work
/// units (dataset cells read) reported by the search and by adapters that
/// support them.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "substrat/automl.hpp"
#include "substrat/baselines.hpp"
#include "substrat/dataset.hpp"
#include "substrat/gendst.hpp"
#include "substrat/search.hpp"

namespace substrat {

// --- strategies -----------------------------------------------------------

/// "gendst", or a baseline: mc (100 iterations unless overridden), mc100,
/// mc100k, mc24h, mab, greedy_seq, greedy_mult, km, ig_rand, ig_km.
struct StrategyConfig {
  std::string name = "gendst";
  GaParams ga;
  BaselineConfig baseline;
};

/// Throws InvalidParams for unknown names.
StrategyConfig parse_strategy(std::string_view name);
const std::vector<std::string>& strategy_names();

/// Parameters of the strategy, for embedding in reports.
nlohmann::json describe_strategy(const StrategyConfig& strategy);

/// Runs the strategy for an n x m DST (0 selects the default size).
SearchResult run_strategy(const Dataset& dataset, const Measure& measure, const StrategyConfig& strategy, Index n,
                          Index m, std::uint64_t seed);

// --- workspace ------------------------------------------------------------

/// Directory holding the CSV files handed to adapters. Without an explicit
/// directory a private temporary one is created and removed on destruction.
class Workspace {
 public:
  explicit Workspace(std::optional<std::filesystem::path> dir = std::nullopt);
  ~Workspace();
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  const std::filesystem::path& dir() const noexcept { return dir_; }
  /// Writes the full dataset once and returns its path.
  std::filesystem::path export_full(const Dataset& dataset);
  std::filesystem::path export_subset(const Dataset& dataset, const SubsetIndices& subset);

 private:
  std::filesystem::path dir_;
  bool owned_ = false;
  std::optional<std::filesystem::path> full_;
};

// --- phases ---------------------------------------------------------------

struct PhaseBudget {
  double time_s = 60.0;
  std::optional<std::uint64_t> evals;

  /// Budget scaled by `fraction`; an evaluation budget never drops below 1.
  PhaseBudget scaled(double fraction) const;
};

struct PhaseCost {
  Seconds wall_time{0.0};
  std::uint64_t work_units = 0;

  PhaseCost& operator+=(const PhaseCost& other) {
    wall_time += other.wall_time;
    work_units += other.work_units;
    return *this;
  }
};

/// The model's wall_time is replaced by the pipeline's own measurement of
/// the adapter call (data export excluded), identically for every phase.
struct PhaseRecord {
  ModelConfig model;
  PhaseCost cost;
};

/// One adapter call as issued by the pipeline.
struct RequestRecord {
  std::string phase;  // "full", "subset", "fine_tune" or "rescore"
  std::string op;     // "fit" or "score"
  Index rows = 0;
  Index cols = 0;
  double time_budget_s = 0.0;
  std::optional<std::uint64_t> eval_budget;
  std::optional<std::string> restrict_family;

  friend bool operator==(const RequestRecord&, const RequestRecord&) = default;
};

struct Metrics {
  double time_reduction = 0.0;
  double relative_accuracy = 0.0;
};

/// time_reduction = 1 - sub_time / full_time, relative_accuracy =
/// sub_accuracy / full_accuracy. Throws DivisionByZero when either
/// denominator is zero.
Metrics compute_metrics(double full_time, double full_accuracy, double sub_time, double sub_accuracy);

struct PipelineOptions {
  StrategyConfig strategy;
  std::string measure = "entropy";
  Index rows = 0;  // 0 selects the default DST size
  Index cols = 0;
  /// Budget of the subset AutoML run; the full baseline gets the same.
  PhaseBudget budget;
  double fine_tune_fraction = 0.25;
  bool fine_tune = true;
  /// Also run AutoML on the full dataset and compute metrics.
  bool with_full = false;
  std::uint64_t seed = kDefaultSeed;
};

struct PipelineReport {
  /// Every option with defaults materialized.
  nlohmann::json config;
  std::string dataset;
  std::string target;
  Shape shape;
  std::uint64_t seed = 0;
  std::string strategy;
  bool fine_tune = true;

  SubsetIndices subset;
  std::vector<std::string> subset_columns;
  double subset_loss = 0.0;
  std::size_t generations = 0;
  std::uint64_t search_evaluations = 0;
  PhaseCost search_cost;

  PhaseRecord intermediate;
  PhaseRecord final_model;
  /// search + intermediate + final.
  PhaseCost total_cost;

  std::optional<PhaseRecord> full;
  std::optional<Metrics> metrics_seconds;
  /// Present only when every adapter call reported work units.
  std::optional<Metrics> metrics_work;

  std::vector<RequestRecord> requests;
};

/// AutoML on the whole dataset under `budget`.
PhaseRecord run_full_automl(const Dataset& dataset, AutomlAdapter& adapter, const PhaseBudget& budget,
                            std::uint64_t seed, Workspace& workspace, std::vector<RequestRecord>* log = nullptr);

/// Throws InvalidParams for bad options; adapter failures propagate as
/// adapter errors.
PipelineReport run_pipeline(const Dataset& dataset, const PipelineOptions& options, AutomlAdapter& adapter,
                            Workspace& workspace);

/// Fills `metrics_seconds` and `metrics_work` from `full` and the total cost.
void attach_full(PipelineReport& report, PhaseRecord full);

}  // namespace substrat
