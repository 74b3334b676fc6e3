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

#include "substrat/report.hpp"

#include "substrat/error.hpp"

namespace substrat {

using nlohmann::json;

std::string_view to_string(CostUnit unit) noexcept {
  return unit == CostUnit::Seconds ? "seconds" : "work_units";
}

namespace {

json seconds(Seconds s, CostUnit unit) { return unit == CostUnit::Seconds ? json(s.count()) : json(nullptr); }

Seconds read_seconds(const json& j) { return Seconds(j.is_null() ? 0.0 : j.get<double>()); }

json to_json(const PhaseCost& cost, CostUnit unit) {
  return {{"wall_time_s", seconds(cost.wall_time, unit)}, {"work_units", cost.work_units}};
}

PhaseCost cost_from_json(const json& j) {
  return {read_seconds(j.at("wall_time_s")), j.at("work_units").get<std::uint64_t>()};
}

json to_json(const PhaseRecord& record, CostUnit unit) {
  return {{"model", to_json(record.model, unit)}, {"cost", to_json(record.cost, unit)}};
}

ModelConfig model_from_json(const json& j) {
  ModelConfig m;
  m.model_family = j.at("model_family").get<std::string>();
  m.config_blob = j.at("config_blob").get<std::string>();
  m.accuracy = j.at("accuracy").get<double>();
  m.wall_time = read_seconds(j.at("wall_time_s"));
  m.evaluations = j.at("evaluations").get<std::uint64_t>();
  m.work_units = j.at("work_units").get<std::uint64_t>();
  return m;
}

PhaseRecord record_from_json(const json& j) { return {model_from_json(j.at("model")), cost_from_json(j.at("cost"))}; }

json to_json(const RequestRecord& r) {
  return {{"phase", r.phase},
          {"op", r.op},
          {"rows", r.rows},
          {"cols", r.cols},
          {"time_budget_s", r.time_budget_s},
          {"eval_budget", r.eval_budget ? json(*r.eval_budget) : json(nullptr)},
          {"restrict_family", r.restrict_family ? json(*r.restrict_family) : json(nullptr)}};
}

RequestRecord request_from_json(const json& j) {
  RequestRecord r;
  r.phase = j.at("phase").get<std::string>();
  r.op = j.at("op").get<std::string>();
  r.rows = j.at("rows").get<Index>();
  r.cols = j.at("cols").get<Index>();
  r.time_budget_s = j.at("time_budget_s").get<double>();
  if (!j.at("eval_budget").is_null()) r.eval_budget = j.at("eval_budget").get<std::uint64_t>();
  if (!j.at("restrict_family").is_null()) r.restrict_family = j.at("restrict_family").get<std::string>();
  return r;
}

}  // namespace

json to_json(const ModelConfig& model, CostUnit unit) {
  return {{"model_family", model.model_family}, {"config_blob", model.config_blob},
          {"accuracy", model.accuracy},         {"wall_time_s", seconds(model.wall_time, unit)},
          {"evaluations", model.evaluations},   {"work_units", model.work_units}};
}

json to_json(const PipelineReport& report, CostUnit unit) {
  json requests = json::array();
  for (const auto& r : report.requests) requests.push_back(to_json(r));
  const auto& metrics = unit == CostUnit::Seconds ? report.metrics_seconds : report.metrics_work;
  return {
      {"cost_unit", to_string(unit)},
      {"config", report.config},
      {"dataset", report.dataset},
      {"target", report.target},
      {"shape", {{"rows", report.shape.rows}, {"cols", report.shape.cols}, {"target", report.shape.target}}},
      {"seed", report.seed},
      {"strategy", report.strategy},
      {"fine_tune", report.fine_tune},
      {"subset",
       {{"rows", report.subset.rows()},
        {"cols", report.subset.cols()},
        {"columns", report.subset_columns},
        {"loss", report.subset_loss},
        {"generations", report.generations},
        {"evaluations", report.search_evaluations},
        {"cost", to_json(report.search_cost, unit)}}},
      {"intermediate", to_json(report.intermediate, unit)},
      {"final", to_json(report.final_model, unit)},
      {"total_cost", to_json(report.total_cost, unit)},
      {"full", report.full ? to_json(*report.full, unit) : json(nullptr)},
      {"metrics", metrics ? json{{"time_reduction", metrics->time_reduction},
                                 {"relative_accuracy", metrics->relative_accuracy}}
                          : json(nullptr)},
      {"requests", std::move(requests)},
  };
}

CostUnit cost_unit_of(const json& report) {
  const auto unit = report.at("cost_unit").get<std::string>();
  if (unit == "seconds") return CostUnit::Seconds;
  if (unit == "work_units") return CostUnit::WorkUnits;
  throw Error(ErrorCode::InvalidParams, "unknown cost_unit '" + unit + "'");
}

PipelineReport report_from_json(const json& j) {
  try {
    PipelineReport r;
    const CostUnit unit = cost_unit_of(j);
    r.config = j.at("config");
    r.dataset = j.at("dataset").get<std::string>();
    r.target = j.at("target").get<std::string>();
    const auto& shape = j.at("shape");
    r.shape = {shape.at("rows").get<Index>(), shape.at("cols").get<Index>(), shape.at("target").get<Index>()};
    r.seed = j.at("seed").get<std::uint64_t>();
    r.strategy = j.at("strategy").get<std::string>();
    r.fine_tune = j.at("fine_tune").get<bool>();
    const auto& subset = j.at("subset");
    r.subset = SubsetIndices::make(subset.at("rows").get<std::vector<Index>>(),
                                   subset.at("cols").get<std::vector<Index>>(), r.shape);
    r.subset_columns = subset.at("columns").get<std::vector<std::string>>();
    r.subset_loss = subset.at("loss").get<double>();
    r.generations = subset.at("generations").get<std::size_t>();
    r.search_evaluations = subset.at("evaluations").get<std::uint64_t>();
    r.search_cost = cost_from_json(subset.at("cost"));
    r.intermediate = record_from_json(j.at("intermediate"));
    r.final_model = record_from_json(j.at("final"));
    r.total_cost = cost_from_json(j.at("total_cost"));
    if (!j.at("full").is_null()) r.full = record_from_json(j.at("full"));
    if (const auto& m = j.at("metrics"); !m.is_null()) {
      Metrics metrics{m.at("time_reduction").get<double>(), m.at("relative_accuracy").get<double>()};
      (unit == CostUnit::Seconds ? r.metrics_seconds : r.metrics_work) = metrics;
    }
    for (const auto& q : j.at("requests")) r.requests.push_back(request_from_json(q));
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidParams, std::string("malformed report: ") + e.what());
  }
}

json search_sidecar(const SearchResult& result, const Dataset& dataset, CostUnit unit) {
  json columns = json::array();
  for (Index j : result.best.cols()) columns.push_back(dataset.column_name(j));
  return {{"cost_unit", to_string(unit)},
          {"dataset", dataset.name()},
          {"strategy", result.strategy},
          {"rows", result.best.rows()},
          {"cols", result.best.cols()},
          {"columns", std::move(columns)},
          {"loss", result.best_loss.value},
          {"generations", result.generations_run},
          {"evaluations", result.evaluations},
          {"work_units", result.work_units},
          {"wall_time_s", seconds(result.wall_time, unit)}};
}

}  // namespace substrat
