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

/// @file automl.hpp
/// AutoML adapter contract and its line-delimited JSON wire protocol.
///
/// Requests (one JSON object per line):
///
///   {"op":"fit","data_path":s,"target":s,"time_budget_s":x,"eval_budget":k|null,
///    "restrict_family":s|null,"seed":k}
///   {"op":"score","data_path":s,"target":s,"config_blob":s,"seed":k}
///   {"op":"shutdown"}                      -> {"ok":true}
///
/// Responses:
///
///   {"ok":true,"model_family":s,"config_blob":s,"accuracy":x,"wall_time_s":x,
///    "evaluations":k?,"work_units":k?}
///   {"ok":false,"error":s}
///
/// `score` refits one fixed configuration on the given data and reports its
/// holdout accuracy; adapters that do not support it answer ok:false.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "substrat/search.hpp"

namespace substrat {

/// AutoML output: a model family, an adapter-defined serialized pipeline, its
/// holdout accuracy and the cost of producing it.
struct ModelConfig {
  std::string model_family;
  std::string config_blob;
  double accuracy = 0.0;
  Seconds wall_time{0.0};
  /// Candidate evaluations performed (0 when the adapter does not say).
  std::uint64_t evaluations = 0;
  /// Deterministic cost in cell visits (0 when the adapter does not say).
  std::uint64_t work_units = 0;

  /// Throws AdapterProtocolError when an invariant is broken.
  void validate() const;
};

struct FitRequest {
  std::filesystem::path data_path;
  std::string target;
  double time_budget_s = 60.0;
  std::optional<std::uint64_t> eval_budget;
  std::optional<std::string> restrict_family;
  std::uint64_t seed = 0;
};

struct ScoreRequest {
  std::filesystem::path data_path;
  std::string target;
  std::string config_blob;
  std::uint64_t seed = 0;
  /// Watchdog budget for the call.
  double time_budget_s = 60.0;
};

class AutomlAdapter {
 public:
  virtual ~AutomlAdapter() = default;
  virtual std::string name() const = 0;
  virtual ModelConfig fit(const FitRequest& request) = 0;
  virtual ModelConfig score(const ScoreRequest& request) = 0;
};

namespace protocol {

nlohmann::json encode(const FitRequest& request);
nlohmann::json encode(const ScoreRequest& request);
nlohmann::json encode_shutdown();
nlohmann::json encode_ok(const ModelConfig& config);
nlohmann::json encode_error(std::string_view message);

/// Parses a response line. ok:false and malformed lines throw
/// AdapterProtocolError.
ModelConfig decode_response(std::string_view line);

FitRequest decode_fit(const nlohmann::json& request);
ScoreRequest decode_score(const nlohmann::json& request);

/// Server loop: reads requests from `in`, answers on `out` (flushed per
/// line), returns after "shutdown" or end of input. Handler exceptions become
/// ok:false replies; unparsable lines get {"ok":false,"error":"protocol"}.
void serve(std::istream& in, std::ostream& out, AutomlAdapter& backend);

}  // namespace protocol

/// Runs an adapter as a child process (`/bin/sh -c command`) speaking the
/// protocol over its stdin/stdout. Each call is supervised by a watchdog: if
/// no response arrives within 1.2x the request's time budget (at least one
/// second of grace) the child is killed and AdapterTimeout is thrown.
/// A child that cannot be started or exits early yields AdapterUnavailable.
class ProcessAdapter final : public AutomlAdapter {
 public:
  explicit ProcessAdapter(std::string command);
  ~ProcessAdapter() override;
  ProcessAdapter(const ProcessAdapter&) = delete;
  ProcessAdapter& operator=(const ProcessAdapter&) = delete;

  std::string name() const override { return command_; }
  ModelConfig fit(const FitRequest& request) override;
  ModelConfig score(const ScoreRequest& request) override;

  /// Sends shutdown and reaps the child. Safe to call repeatedly.
  void stop();

 private:
  void start();
  std::string exchange(const nlohmann::json& request, double budget_s);
  void kill_child();

  std::string command_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;
};

/// Watchdog deadline for a call with the given budget.
Seconds watchdog_limit(double budget_s);

}  // namespace substrat
