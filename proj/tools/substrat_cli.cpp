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

// substrat: command-line front end.
//
//   substrat entropy   --input data.csv --target y
//   substrat subset    --input data.csv --target y --strategy gendst --out dst.csv
//   substrat run       --input data.csv --target y --with-full --budget-evals 100
//   substrat benchmark --input data.csv --target y --strategies gendst,mc100 --cols-grid 0.1,0.25,0.5
//   substrat toy-adapter            (serves the adapter protocol on stdin/stdout)
//
// Exit codes: 0 success, 1 input or configuration error, 2 adapter error.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "substrat/automl.hpp"
#include "substrat/dataset.hpp"
#include "substrat/error.hpp"
#include "substrat/measures.hpp"
#include "substrat/pipeline.hpp"
#include "substrat/report.hpp"
#include "substrat/toy_automl.hpp"

namespace {

using namespace substrat;
using nlohmann::json;

constexpr std::uint64_t kDeterministicEvals = 100;
constexpr const char* kBuiltinAdapter = "builtin-toy";

struct InputOptions {
  std::string input;
  std::string target;
  std::string delimiter = ",";
  std::optional<std::size_t> bins;
};

struct SearchOptions {
  std::string strategy = "gendst";
  std::string rows = "sqrt";
  std::string cols = "0.25";
  std::uint64_t seed = kDefaultSeed;
  GaParams ga;
  std::optional<std::uint64_t> iterations;
  std::optional<double> search_seconds;
  bool dedupe = false;
  double epsilon = MabParams{}.epsilon;
};

struct AutomlOptions {
  std::string adapter = kBuiltinAdapter;
  double budget_s = 60.0;
  std::optional<std::uint64_t> budget_evals;
  double fine_tune_frac = 0.25;
  bool no_fine_tune = false;
  std::string workdir;
};

struct OutputOptions {
  std::string out;
  std::string format = "json";
  bool deterministic = false;
};

void add_input(CLI::App* app, InputOptions& o) {
  app->add_option("--input", o.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
  app->add_option("--target", o.target, "Name of the target column")->required();
  app->add_option("--delimiter", o.delimiter, "Field delimiter (a single character, or 'tab')")->capture_default_str();
  app->add_option("--bins", o.bins, "Equal-width bins for numeric columns (default: keep exact values)")
      ->check(CLI::PositiveNumber);
}

void add_search(CLI::App* app, SearchOptions& o) {
  std::string names;
  for (const auto& n : strategy_names()) names += (names.empty() ? "" : ", ") + n;
  app->add_option("--strategy", o.strategy, "One of: " + names)->capture_default_str();
  app->add_option("--rows", o.rows, "DST rows: a count, 'sqrt', or a fraction of N")->capture_default_str();
  app->add_option("--cols", o.cols, "DST columns incl. target: a count, 'sqrt', or a fraction of M")
      ->capture_default_str();
  app->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app->add_option("--generations", o.ga.generations, "Gen-DST generations")->capture_default_str();
  app->add_option("--population", o.ga.population, "Gen-DST population size")->capture_default_str();
  app->add_option("--mutation-prob", o.ga.mutation_prob, "Gen-DST per-candidate mutation probability")
      ->capture_default_str();
  app->add_option("--elite-frac", o.ga.elite_fraction, "Gen-DST elite fraction")->capture_default_str();
  app->add_option("--row-col-prob", o.ga.row_col_prob, "Probability an operator acts on rows")
      ->capture_default_str();
  app->add_option("--convergence-eps", o.ga.convergence_eps, "Early-stop threshold (0 disables)")
      ->capture_default_str();
  app->add_option("--iterations", o.iterations, "Iterations for mc / rounds for mab");
  app->add_option("--search-seconds", o.search_seconds, "Wall-clock budget for mc (replaces iterations)");
  app->add_flag("--dedupe", o.dedupe, "mc: never evaluate a subset twice");
  app->add_option("--epsilon", o.epsilon, "mab exploration rate")->capture_default_str();
}

void add_automl(CLI::App* app, AutomlOptions& o) {
  app->add_option("--adapter", o.adapter, "Adapter command line, or 'builtin-toy' (env SUBSTRAT_ADAPTER overrides)")
      ->capture_default_str();
  app->add_option("--budget-s", o.budget_s, "AutoML time budget in seconds")->capture_default_str();
  app->add_option("--budget-evals", o.budget_evals, "AutoML budget in candidate evaluations");
  app->add_option("--fine-tune-frac", o.fine_tune_frac, "Fine-tune budget as a fraction of the subset budget")
      ->capture_default_str();
  app->add_flag("--no-fine-tune", o.no_fine_tune, "Re-score the subset configuration on the full data instead");
  app->add_option("--workdir", o.workdir, "Directory for exported CSV files (default: private temp dir)");
}

void add_output(CLI::App* app, OutputOptions& o) {
  app->add_option("--out", o.out, "Output path (default: stdout)");
  app->add_option("--format", o.format, "json or table")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  app->add_flag("--deterministic", o.deterministic, "Evaluation-count budgets; report work units instead of seconds");
}

char delimiter_of(const InputOptions& o) {
  if (o.delimiter == "tab" || o.delimiter == "\\t") return '\t';
  if (o.delimiter.size() != 1) throw Error(ErrorCode::InvalidParams, "delimiter must be a single character");
  return o.delimiter[0];
}

Dataset load(const InputOptions& o) {
  IngestOptions ingest;
  ingest.delimiter = delimiter_of(o);
  ingest.bins = o.bins;
  return load_csv(o.input, o.target, ingest);
}

StrategyConfig strategy_config(const SearchOptions& o, bool deterministic) {
  StrategyConfig s = parse_strategy(o.strategy);
  s.ga = o.ga;
  s.ga.validate();
  if (o.iterations) {
    s.baseline.mc.iterations = *o.iterations;
    s.baseline.mc.wall_clock.reset();
    s.baseline.mab.rounds = *o.iterations;
  }
  if (o.search_seconds) {
    s.baseline.mc.wall_clock = Seconds(*o.search_seconds);
    s.baseline.mc.iterations.reset();
  }
  s.baseline.mc.deduplicate = o.dedupe;
  s.baseline.mab.epsilon = o.epsilon;
  const bool clock_bound = s.baseline.kind == BaselineKind::Mc && s.name != "gendst" && !s.baseline.mc.iterations;
  if (deterministic && clock_bound) {
    throw Error(ErrorCode::InvalidParams, "--deterministic needs an iteration budget for mc");
  }
  return s;
}

SubsetSize resolve(const SearchOptions& o, const Shape& shape) {
  const Index n = resolve_size(o.rows, shape.rows, 1);
  const Index m = resolve_size(o.cols, shape.cols, 2);
  if (n > shape.rows || m > shape.cols) throw Error(ErrorCode::SizeTooLarge, "subset larger than dataset");
  return {n, m};
}

std::string adapter_command(const AutomlOptions& o) {
  if (const char* env = std::getenv("SUBSTRAT_ADAPTER"); env != nullptr && *env != '\0') return env;
  return o.adapter;
}

std::unique_ptr<AutomlAdapter> make_adapter(const std::string& command) {
  if (command == kBuiltinAdapter) return std::make_unique<toy::ToyAdapter>();
  return std::make_unique<ProcessAdapter>(command);
}

PhaseBudget budget_of(const AutomlOptions& o, bool deterministic) {
  if (!(o.budget_s > 0.0)) throw Error(ErrorCode::InvalidParams, "--budget-s must be positive");
  PhaseBudget b{o.budget_s, o.budget_evals};
  if (deterministic && !b.evals) b.evals = kDeterministicEvals;
  return b;
}

CostUnit unit_of(const OutputOptions& o) { return o.deterministic ? CostUnit::WorkUnits : CostUnit::Seconds; }

void emit(const OutputOptions& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot write '" + o.out + "'");
  file << text;
}

std::string format_fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string cost_text(const PhaseCost& cost, CostUnit unit) {
  return unit == CostUnit::Seconds ? format_fixed(cost.wall_time.count()) + " s"
                                   : std::to_string(cost.work_units) + " work units";
}

std::string row(const std::string& key, const std::string& value) {
  std::string line = key;
  line.resize(std::max<std::size_t>(20, key.size() + 1), ' ');
  return line + value + "\n";
}


std::vector<Index> iota_indices(Index count) {
  std::vector<Index> out(count);
  for (Index i = 0; i < count; ++i) out[i] = i;
  return out;
}

// --- commands ---------------------------------------------------------------

int cmd_entropy(const InputOptions& in, std::vector<Index> rows, std::vector<Index> cols, const std::string& measure) {
  const Dataset dataset = load(in);
  if (rows.empty()) rows = iota_indices(dataset.n_rows());
  if (cols.empty()) cols = iota_indices(dataset.n_cols());
  const DatasetView view(dataset, std::move(rows), std::move(cols));
  std::cout << format_fixed(make_measure(measure)->evaluate(view)) << "\n";
  return 0;
}

int cmd_subset(const InputOptions& in, const SearchOptions& search, const OutputOptions& out) {
  const Dataset dataset = load(in);
  const StrategyConfig strategy = strategy_config(search, out.deterministic);
  const SubsetSize size = resolve(search, dataset.shape());
  const auto measure = make_measure("entropy");
  const SearchResult result = run_strategy(dataset, *measure, strategy, size.rows, size.cols, search.seed);
  const CostUnit unit = unit_of(out);

  json sidecar = search_sidecar(result, dataset, unit);
  sidecar["config"] = {{"strategy", describe_strategy(strategy)},
                       {"rows", size.rows},
                       {"cols", size.cols},
                       {"seed", search.seed}};
  if (!out.out.empty()) {
    std::filesystem::path csv = out.out;
    write_csv(csv, view(dataset, result.best), delimiter_of(in));
    std::filesystem::path side = csv;
    side.replace_extension(".json");
    std::ofstream file(side, std::ios::binary);
    if (!file) throw Error(ErrorCode::IoError, "cannot write '" + side.string() + "'");
    file << sidecar.dump(2) << "\n";
  }
  if (out.format == "table") {
    std::string text = row("strategy", result.strategy) +
                       row("size", std::to_string(result.best.n()) + " x " + std::to_string(result.best.m())) +
                       row("loss", format_fixed(result.best_loss.value, 6)) +
                       row("generations", std::to_string(result.generations_run)) +
                       row("evaluations", std::to_string(result.evaluations)) +
                       row("cost", cost_text({result.wall_time, result.work_units}, unit));
    std::cout << text;
  } else {
    std::cout << sidecar.dump(2) << "\n";
  }
  return 0;
}

std::string run_table(const PipelineReport& r, CostUnit unit) {
  std::string text = row("dataset", r.dataset + " (" + std::to_string(r.shape.rows) + " x " +
                                        std::to_string(r.shape.cols) + ")") +
                     row("strategy", r.strategy) +
                     row("subset", std::to_string(r.subset.n()) + " x " + std::to_string(r.subset.m()) + ", loss " +
                                       format_fixed(r.subset_loss, 6)) +
                     row("intermediate", r.intermediate.model.model_family + ", accuracy " +
                                             format_fixed(r.intermediate.model.accuracy)) +
                     row(r.fine_tune ? "final (fine-tuned)" : "final (no fine-tune)",
                         r.final_model.model.model_family + ", accuracy " + format_fixed(r.final_model.model.accuracy)) +
                     row("time(M_sub)", cost_text(r.total_cost, unit));
  if (r.full) {
    text += row("full AutoML", r.full->model.model_family + ", accuracy " + format_fixed(r.full->model.accuracy));
    text += row("time(M*)", cost_text(r.full->cost, unit));
    const auto& metrics = unit == CostUnit::Seconds ? r.metrics_seconds : r.metrics_work;
    if (metrics) {
      text += row("time_reduction", format_fixed(metrics->time_reduction));
      text += row("relative_accuracy", format_fixed(metrics->relative_accuracy));
    } else {
      text += row("metrics", "unavailable (adapter reports no work units)");
    }
  }
  return text;
}

PipelineOptions pipeline_options(const Dataset& dataset, const SearchOptions& search, const AutomlOptions& automl,
                                 const OutputOptions& out) {
  PipelineOptions o;
  o.strategy = strategy_config(search, out.deterministic);
  const SubsetSize size = resolve(search, dataset.shape());
  o.rows = size.rows;
  o.cols = size.cols;
  o.budget = budget_of(automl, out.deterministic);
  o.fine_tune_fraction = automl.fine_tune_frac;
  o.fine_tune = !automl.no_fine_tune;
  o.seed = search.seed;
  return o;
}

std::optional<std::filesystem::path> workdir_of(const AutomlOptions& automl) {
  if (automl.workdir.empty()) return std::nullopt;
  return std::filesystem::path(automl.workdir);
}

int cmd_run(const InputOptions& in, const SearchOptions& search, const AutomlOptions& automl, bool with_full,
            const OutputOptions& out) {
  const Dataset dataset = load(in);
  PipelineOptions options = pipeline_options(dataset, search, automl, out);
  options.with_full = with_full;
  auto adapter = make_adapter(adapter_command(automl));
  Workspace workspace(workdir_of(automl));
  const PipelineReport report = run_pipeline(dataset, options, *adapter, workspace);
  const CostUnit unit = unit_of(out);
  emit(out, out.format == "table" ? run_table(report, unit) : to_json(report, unit).dump(2) + "\n");
  return 0;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Cell {
  std::string strategy;
  std::string rows_spec;
  std::string cols_spec;
  std::optional<PipelineReport> report;
  std::string error;
};

int cmd_benchmark(const InputOptions& in, SearchOptions search, const AutomlOptions& automl,
                  const std::vector<std::string>& strategies, const std::vector<std::string>& rows_grid,
                  const std::vector<std::string>& cols_grid, std::size_t jobs, const OutputOptions& out) {
  if (strategies.empty()) {
    throw Error(ErrorCode::InvalidParams, "no strategies given (usage: --strategies gendst,mc100,...)");
  }
  for (const auto& s : strategies) parse_strategy(s);
  const Dataset dataset = load(in);
  const std::string command = adapter_command(automl);
  const PhaseBudget budget = budget_of(automl, out.deterministic);
  const CostUnit unit = unit_of(out);

  // Shared Full-AutoML baseline; every cell depends on it, so its failure is fatal.
  PhaseRecord full;
  {
    auto adapter = make_adapter(command);
    Workspace workspace(workdir_of(automl));
    full = run_full_automl(dataset, *adapter, budget, search.seed, workspace);
  }

  std::vector<Cell> cells;
  for (const auto& s : strategies) {
    for (const auto& r : rows_grid) {
      for (const auto& c : cols_grid) cells.push_back({s, r, c, std::nullopt, {}});
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::unique_ptr<AutomlAdapter> adapter;
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      Cell& cell = cells[k];
      try {
        if (!adapter) adapter = make_adapter(command);
        SearchOptions cell_search = search;
        cell_search.strategy = cell.strategy;
        cell_search.rows = cell.rows_spec;
        cell_search.cols = cell.cols_spec;
        PipelineOptions options = pipeline_options(dataset, cell_search, automl, out);
        std::optional<std::filesystem::path> dir;
        if (auto base = workdir_of(automl)) dir = *base / ("cell-" + std::to_string(k));
        Workspace workspace(dir);
        PipelineReport report = run_pipeline(dataset, options, *adapter, workspace);
        attach_full(report, full);
        cell.report = std::move(report);
      } catch (const std::exception& e) {
        cell.error = e.what();
        adapter.reset();
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  json rows_json = json::array();
  std::string table = row("strategy / size", "time_reduction  relative_accuracy");
  for (const auto& cell : cells) {
    json j{{"strategy", cell.strategy}, {"rows_spec", cell.rows_spec}, {"cols_spec", cell.cols_spec}};
    const std::string label = cell.strategy + " " + cell.rows_spec + "x" + cell.cols_spec;
    if (cell.report) {
      const PipelineReport& r = *cell.report;
      const auto& metrics = unit == CostUnit::Seconds ? r.metrics_seconds : r.metrics_work;
      j["ok"] = true;
      j["error"] = nullptr;
      j["rows"] = r.subset.n();
      j["cols"] = r.subset.m();
      j["subset_loss"] = r.subset_loss;
      j["intermediate_family"] = r.intermediate.model.model_family;
      j["final_family"] = r.final_model.model.model_family;
      j["final_accuracy"] = r.final_model.model.accuracy;
      j["total_cost"] = {{"wall_time_s", unit == CostUnit::Seconds ? json(r.total_cost.wall_time.count()) : json(nullptr)},
                         {"work_units", r.total_cost.work_units}};
      j["time_reduction"] = metrics ? json(metrics->time_reduction) : json(nullptr);
      j["relative_accuracy"] = metrics ? json(metrics->relative_accuracy) : json(nullptr);
      table += row(label, metrics ? format_fixed(metrics->time_reduction) + "          " +
                                        format_fixed(metrics->relative_accuracy)
                                  : std::string("n/a"));
    } else {
      j["ok"] = false;
      j["error"] = cell.error;
      table += row(label, "error: " + cell.error);
    }
    rows_json.push_back(std::move(j));
  }

  json config{{"strategies", strategies},
              {"rows_grid", rows_grid},
              {"cols_grid", cols_grid},
              {"budget", {{"time_s", budget.time_s}, {"evals", budget.evals ? json(*budget.evals) : json(nullptr)}}},
              {"fine_tune", !automl.no_fine_tune},
              {"fine_tune_fraction", automl.fine_tune_frac},
              {"adapter", command},
              {"seed", search.seed}};
  json report{{"cost_unit", to_string(unit)},
              {"config", std::move(config)},
              {"dataset", dataset.name()},
              {"shape", {{"rows", dataset.n_rows()}, {"cols", dataset.n_cols()}, {"target", dataset.target_col()}}},
              {"full", {{"model", to_json(full.model, unit)},
                        {"cost", {{"wall_time_s", unit == CostUnit::Seconds ? json(full.cost.wall_time.count()) : json(nullptr)},
                                  {"work_units", full.cost.work_units}}}}},
              {"cells", std::move(rows_json)}};
  emit(out, out.format == "table" ? table : report.dump(2) + "\n");
  return 0;
}

// Reports zero wall time so that replies depend only on the requests.
class ZeroClockAdapter final : public AutomlAdapter {
 public:
  std::string name() const override { return inner_.name(); }
  ModelConfig fit(const FitRequest& request) override { return zeroed(inner_.fit(request)); }
  ModelConfig score(const ScoreRequest& request) override { return zeroed(inner_.score(request)); }

 private:
  static ModelConfig zeroed(ModelConfig m) {
    m.wall_time = Seconds(0.0);
    return m;
  }
  toy::ToyAdapter inner_;
};

int cmd_toy_adapter(bool deterministic) {
  std::ios::sync_with_stdio(false);
  toy::ToyAdapter plain;
  ZeroClockAdapter zeroed;
  protocol::serve(std::cin, std::cout, deterministic ? static_cast<AutomlAdapter&>(zeroed) : plain);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"substrat: find small data subsets that preserve dataset entropy, and use them to speed up AutoML"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "substrat 0.1.0");

  InputOptions in;
  SearchOptions search;
  AutomlOptions automl;
  OutputOptions out;

  auto* entropy = app.add_subcommand("entropy", "Print the dataset entropy (4 decimals)");
  add_input(entropy, in);
  std::vector<Index> row_indices;
  std::vector<Index> col_indices;
  std::string measure = "entropy";
  entropy->add_option("--row-indices", row_indices, "Restrict to these rows (0-based, comma separated)")
      ->delimiter(',');
  entropy->add_option("--col-indices", col_indices, "Restrict to these columns (0-based, comma separated)")
      ->delimiter(',');
  entropy->add_option("--measure", measure, "Registered measure name")->capture_default_str();
  bool entropy_deterministic = false;
  entropy->add_flag("--deterministic", entropy_deterministic, "Accepted for uniformity; entropy has no clock input");

  auto* subset = app.add_subcommand("subset", "Search a data subset; writes CSV (--out) and a JSON sidecar");
  add_input(subset, in);
  add_search(subset, search);
  add_output(subset, out);

  bool with_full = false;
  auto* run = app.add_subcommand("run", "Subset search, AutoML on the subset, fine-tune on the full data");
  add_input(run, in);
  add_search(run, search);
  add_automl(run, automl);
  add_output(run, out);
  run->add_flag("--with-full", with_full, "Also run Full-AutoML and report time reduction / relative accuracy");

  std::string strategies = "gendst";
  std::string rows_grid = "sqrt";
  std::string cols_grid = "0.1,0.25,0.5";
  std::size_t jobs = 1;
  auto* bench = app.add_subcommand("benchmark", "Sweep strategies and DST sizes against one Full-AutoML baseline");
  add_input(bench, in);
  add_search(bench, search);
  add_automl(bench, automl);
  add_output(bench, out);
  bench->add_option("--strategies", strategies, "Comma-separated strategies")->capture_default_str();
  bench->add_option("--rows-grid", rows_grid, "Comma-separated row size specs")->capture_default_str();
  bench->add_option("--cols-grid", cols_grid, "Comma-separated column size specs")->capture_default_str();
  bench->add_option("--jobs", jobs, "Cells run concurrently, each with its own adapter")->capture_default_str();

  auto* adapter = app.add_subcommand("toy-adapter", "Serve the built-in toy AutoML over the adapter protocol");
  bool adapter_deterministic = false;
  adapter->add_flag("--deterministic", adapter_deterministic, "Report wall_time_s as 0 in every reply");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*entropy) return cmd_entropy(in, row_indices, col_indices, measure);
    if (*subset) return cmd_subset(in, search, out);
    if (*run) return cmd_run(in, search, automl, with_full, out);
    if (*bench) {
      return cmd_benchmark(in, search, automl, split_list(strategies), split_list(rows_grid), split_list(cols_grid), jobs,
                           out);
    }
    if (*adapter) return cmd_toy_adapter(adapter_deterministic);
  } catch (const Error& e) {
    std::cerr << "substrat: " << e.what() << "\n";
    return e.is_adapter_error() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "substrat: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
