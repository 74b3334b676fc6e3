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

#include "substrat/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <system_error>

#include "substrat/error.hpp"
#include "substrat/measures.hpp"

namespace substrat {

namespace fs = std::filesystem;

// --- strategies -----------------------------------------------------------

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names = {"gendst",     "mc",          "mc100", "mc100k",  "mc24h", "mab",
                                                 "greedy_seq", "greedy_mult", "km",    "ig_rand", "ig_km"};
  return names;
}

StrategyConfig parse_strategy(std::string_view name) {
  StrategyConfig config;
  config.name = std::string(name);
  if (name == "gendst") return config;
  if (name == "mc" || name == "mc100" || name == "mc100k" || name == "mc24h") {
    config.baseline.kind = BaselineKind::Mc;
    config.baseline.mc = name == "mc" || name == "mc100" ? McBudget::mc100() : name == "mc100k" ? McBudget::mc100k() : McBudget::mc24h();
    return config;
  }
  if (auto kind = parse_baseline(name)) {
    config.baseline.kind = *kind;
    return config;
  }
  throw Error(ErrorCode::InvalidParams, "unknown strategy '" + std::string(name) + "'");
}

nlohmann::json describe_strategy(const StrategyConfig& strategy) {
  nlohmann::json j{{"name", strategy.name}};
  if (strategy.name == "gendst") {
    const GaParams& p = strategy.ga;
    j["generations"] = p.generations;
    j["population"] = p.population;
    j["mutation_prob"] = p.mutation_prob;
    j["elite_fraction"] = p.elite_fraction;
    j["row_col_prob"] = p.row_col_prob;
    j["convergence_eps"] = p.convergence_eps;
    return j;
  }
  const BaselineConfig& b = strategy.baseline;
  j["kind"] = to_string(b.kind);
  if (b.kind == BaselineKind::Mc) {
    j["iterations"] = b.mc.iterations ? nlohmann::json(*b.mc.iterations) : nlohmann::json(nullptr);
    j["wall_clock_s"] = b.mc.wall_clock ? nlohmann::json(b.mc.wall_clock->count()) : nlohmann::json(nullptr);
    j["deduplicate"] = b.mc.deduplicate;
  } else if (b.kind == BaselineKind::Mab) {
    j["rounds"] = b.mab.rounds;
    j["epsilon"] = b.mab.epsilon;
  }
  return j;
}

SearchResult run_strategy(const Dataset& dataset, const Measure& measure, const StrategyConfig& strategy, Index n,
                          Index m, std::uint64_t seed) {
  const SubsetSize size = default_subset_size(dataset.shape());
  if (n == 0) n = size.rows;
  if (m == 0) m = size.cols;
  SearchResult result;
  if (strategy.name == "gendst") {
    GaParams params = strategy.ga;
    params.seed = seed;
    params.subset_rows = n;
    params.subset_cols = m;
    result = run_gendst(dataset, measure, params);
  } else {
    Rng rng(seed);
    result = run_baseline(dataset, measure, n, m, strategy.baseline, rng);
  }
  result.strategy = strategy.name;
  return result;
}

// --- workspace ------------------------------------------------------------

Workspace::Workspace(std::optional<fs::path> dir) {
  if (dir) {
    fs::create_directories(*dir);
    dir_ = *dir;
    return;
  }
  std::string pattern = (fs::temp_directory_path() / "substrat-XXXXXX").string();
  if (::mkdtemp(pattern.data()) == nullptr) throw Error(ErrorCode::IoError, "cannot create a temporary directory");
  dir_ = pattern;
  owned_ = true;
}

Workspace::~Workspace() {
  if (owned_) {
    std::error_code ignored;
    fs::remove_all(dir_, ignored);
  }
}

fs::path Workspace::export_full(const Dataset& dataset) {
  if (!full_) {
    full_ = dir_ / "full.csv";
    write_csv(*full_, DatasetView(dataset));
  }
  return *full_;
}

fs::path Workspace::export_subset(const Dataset& dataset, const SubsetIndices& subset) {
  fs::path path = dir_ / "subset.csv";
  write_csv(path, view(dataset, subset));
  return path;
}

// --- phases ---------------------------------------------------------------

PhaseBudget PhaseBudget::scaled(double fraction) const {
  PhaseBudget out;
  out.time_s = time_s * fraction;
  if (evals) {
    out.evals = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(*evals))));
  }
  return out;
}

Metrics compute_metrics(double full_time, double full_accuracy, double sub_time, double sub_accuracy) {
  if (full_time == 0.0) throw Error(ErrorCode::DivisionByZero, "full AutoML time is zero");
  if (full_accuracy == 0.0) throw Error(ErrorCode::DivisionByZero, "full AutoML accuracy is zero");
  return {1.0 - sub_time / full_time, sub_accuracy / full_accuracy};
}

namespace {

PhaseRecord timed_fit(AutomlAdapter& adapter, FitRequest request, std::string phase, Index rows, Index cols,
                      std::vector<RequestRecord>* log, const std::function<fs::path()>& export_data) {
  request.data_path = export_data();
  if (log) {
    log->push_back({std::move(phase), "fit", rows, cols, request.time_budget_s, request.eval_budget,
                    request.restrict_family});
  }
  Stopwatch clock;
  PhaseRecord record;
  record.model = adapter.fit(request);
  record.model.wall_time = clock.elapsed();
  record.cost = {record.model.wall_time, record.model.work_units};
  return record;
}

FitRequest fit_request(const Dataset& dataset, const PhaseBudget& budget, std::uint64_t seed) {
  FitRequest request;
  request.target = dataset.column_name(dataset.target_col());
  request.time_budget_s = budget.time_s;
  request.eval_budget = budget.evals;
  request.seed = seed;
  return request;
}

}  // namespace

PhaseRecord run_full_automl(const Dataset& dataset, AutomlAdapter& adapter, const PhaseBudget& budget,
                            std::uint64_t seed, Workspace& workspace, std::vector<RequestRecord>* log) {
  return timed_fit(adapter, fit_request(dataset, budget, seed), "full", dataset.n_rows(), dataset.n_cols(), log,
                   [&] { return workspace.export_full(dataset); });
}

PipelineReport run_pipeline(const Dataset& dataset, const PipelineOptions& options, AutomlAdapter& adapter,
                            Workspace& workspace) {
  if (!(options.budget.time_s > 0.0)) throw Error(ErrorCode::InvalidParams, "time budget must be positive");
  if (options.budget.evals && *options.budget.evals == 0) {
    throw Error(ErrorCode::InvalidParams, "evaluation budget must be positive");
  }
  if (!(options.fine_tune_fraction > 0.0 && options.fine_tune_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidParams, "fine-tune fraction must be in (0, 1]");
  }

  const SubsetSize size = default_subset_size(dataset.shape());
  const Index n = options.rows ? options.rows : size.rows;
  const Index m = options.cols ? options.cols : size.cols;
  const PhaseBudget fine_budget = options.budget.scaled(options.fine_tune_fraction);
  auto budget_json = [](const PhaseBudget& b) {
    return nlohmann::json{{"time_s", b.time_s}, {"evals", b.evals ? nlohmann::json(*b.evals) : nlohmann::json(nullptr)}};
  };

  PipelineReport report;
  report.config = {{"strategy", describe_strategy(options.strategy)},
                   {"measure", options.measure},
                   {"rows", n},
                   {"cols", m},
                   {"budget", budget_json(options.budget)},
                   {"fine_tune", options.fine_tune},
                   {"fine_tune_fraction", options.fine_tune_fraction},
                   {"fine_tune_budget", budget_json(fine_budget)},
                   {"with_full", options.with_full},
                   {"adapter", adapter.name()},
                   {"seed", options.seed}};
  report.dataset = dataset.name();
  report.target = dataset.column_name(dataset.target_col());
  report.shape = dataset.shape();
  report.seed = options.seed;
  report.strategy = options.strategy.name;
  report.fine_tune = options.fine_tune;

  std::optional<PhaseRecord> full;
  if (options.with_full) {
    full = run_full_automl(dataset, adapter, options.budget, options.seed, workspace, &report.requests);
  }

  const auto measure = make_measure(options.measure);
  const SearchResult search =
      run_strategy(dataset, *measure, options.strategy, n, m, options.seed);
  report.subset = search.best;
  for (Index j : search.best.cols()) report.subset_columns.push_back(dataset.column_name(j));
  report.subset_loss = search.best_loss.value;
  report.generations = search.generations_run;
  report.search_evaluations = search.evaluations;
  report.search_cost = {search.wall_time, search.work_units};

  report.intermediate = timed_fit(adapter, fit_request(dataset, options.budget, options.seed), "subset",
                                  search.best.n(), search.best.m(), &report.requests,
                                  [&] { return workspace.export_subset(dataset, search.best); });

  if (options.fine_tune) {
    FitRequest request = fit_request(dataset, fine_budget, options.seed);
    request.restrict_family = report.intermediate.model.model_family;
    report.final_model = timed_fit(adapter, std::move(request), "fine_tune", dataset.n_rows(), dataset.n_cols(),
                                   &report.requests, [&] { return workspace.export_full(dataset); });
  } else {
    ScoreRequest request;
    request.data_path = workspace.export_full(dataset);
    request.target = report.target;
    request.config_blob = report.intermediate.model.config_blob;
    request.seed = options.seed;
    request.time_budget_s = options.budget.time_s;
    report.requests.push_back(
        {"rescore", "score", dataset.n_rows(), dataset.n_cols(), request.time_budget_s, std::nullopt, std::nullopt});
    Stopwatch clock;
    report.final_model.model = adapter.score(request);
    report.final_model.model.wall_time = clock.elapsed();
    report.final_model.cost = {report.final_model.model.wall_time, report.final_model.model.work_units};
  }

  report.total_cost = report.search_cost;
  report.total_cost += report.intermediate.cost;
  report.total_cost += report.final_model.cost;

  if (full) attach_full(report, std::move(*full));
  return report;
}

void attach_full(PipelineReport& report, PhaseRecord full) {
  const double sub_accuracy = report.final_model.model.accuracy;
  report.metrics_seconds =
      compute_metrics(full.cost.wall_time.count(), full.model.accuracy, report.total_cost.wall_time.count(), sub_accuracy);
  const bool work_known = full.cost.work_units > 0 && report.intermediate.cost.work_units > 0 &&
                          report.final_model.cost.work_units > 0;
  if (work_known) {
    report.metrics_work = compute_metrics(static_cast<double>(full.cost.work_units), full.model.accuracy,
                                          static_cast<double>(report.total_cost.work_units), sub_accuracy);
  } else {
    report.metrics_work.reset();
  }
  report.full = std::move(full);
}

}  // namespace substrat
