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


#include <chrono>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "substrat/error.hpp"
#include "substrat/toy_automl.hpp"

namespace substrat {
namespace {

using nlohmann::json;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

FitRequest flights_fit() {
  FitRequest r;
  r.data_path = testing::data_path("flights.csv");
  r.target = "Satisfied";
  r.time_budget_s = 5.0;
  r.eval_budget = 12;
  r.seed = 4;
  return r;
}

std::vector<json> replies(const std::string& transcript) {
  std::istringstream in(transcript);
  std::ostringstream out;
  toy::ToyAdapter backend;
  protocol::serve(in, out, backend);
  std::vector<json> lines;
  std::istringstream read(out.str());
  for (std::string line; std::getline(read, line);) lines.push_back(json::parse(line));
  return lines;
}

TEST(Protocol, RequestEncoding) {
  FitRequest fit = flights_fit();
  const json j = protocol::encode(fit);
  EXPECT_EQ(j.at("op"), "fit");
  EXPECT_EQ(j.at("eval_budget"), 12);
  EXPECT_TRUE(j.at("restrict_family").is_null());
  const FitRequest back = protocol::decode_fit(j);
  EXPECT_EQ(back.data_path, fit.data_path);
  EXPECT_EQ(back.eval_budget, fit.eval_budget);
  EXPECT_EQ(back.seed, 4u);
  EXPECT_EQ(protocol::encode_shutdown(), json({{"op", "shutdown"}}));
}

TEST(Protocol, DecodeResponse) {
  const ModelConfig m = protocol::decode_response(
      R"({"ok":true,"model_family":"majority","config_blob":"{}","accuracy":0.5,"wall_time_s":0.1})");
  EXPECT_EQ(m.model_family, "majority");
  EXPECT_EQ(m.evaluations, 0u);
  EXPECT_EQ(code_of([] { protocol::decode_response(R"({"ok":false,"error":"boom"})"); }),
            ErrorCode::AdapterProtocolError);
  EXPECT_EQ(code_of([] { protocol::decode_response("garbage"); }), ErrorCode::AdapterProtocolError);
  EXPECT_EQ(code_of([] {
              protocol::decode_response(
                  R"({"ok":true,"model_family":"m","config_blob":"","accuracy":1.5,"wall_time_s":0})");
            }),
            ErrorCode::AdapterProtocolError);
}

TEST(Serve, FitRestrictScoreShutdown) {
  FitRequest restricted = flights_fit();
  restricted.restrict_family = "naive_bayes";
  const auto out = replies(protocol::encode(flights_fit()).dump() + "\n" + protocol::encode(restricted).dump() +
                           "\n{not json\n" + R"({"op":"dance"})" + "\n" +
                           protocol::encode_shutdown().dump() + "\n" + protocol::encode(flights_fit()).dump() + "\n");
  ASSERT_EQ(out.size(), 5u);
  EXPECT_TRUE(out[0].at("ok").get<bool>());
  EXPECT_EQ(out[0].at("evaluations"), 12);
  EXPECT_EQ(out[1].at("model_family"), "naive_bayes");
  EXPECT_EQ(out[2], json({{"ok", false}, {"error", "protocol"}}));
  EXPECT_FALSE(out[3].at("ok").get<bool>());
  EXPECT_EQ(out[4], json({{"ok", true}}));
}

TEST(Serve, BackendErrorsBecomeReplies) {
  FitRequest missing = flights_fit();
  missing.data_path = "/nonexistent.csv";
  const auto out = replies(protocol::encode(missing).dump() + "\n");
  ASSERT_EQ(out.size(), 1u);
  EXPECT_FALSE(out[0].at("ok").get<bool>());
  EXPECT_NE(out[0].at("error").get<std::string>().find("IoError"), std::string::npos);
}

TEST(Watchdog, Limit) {
  EXPECT_DOUBLE_EQ(watchdog_limit(0.5).count(), 1.5);
  EXPECT_DOUBLE_EQ(watchdog_limit(5.0).count(), 6.0);
  EXPECT_DOUBLE_EQ(watchdog_limit(60.0).count(), 72.0);
}

#ifdef SUBSTRAT_CLI_PATH
TEST(Process, MatchesInProcessAdapter) {
  ProcessAdapter child(std::string(SUBSTRAT_CLI_PATH) + " toy-adapter");
  toy::ToyAdapter local;
  const ModelConfig a = child.fit(flights_fit());
  const ModelConfig b = local.fit(flights_fit());
  EXPECT_EQ(a.model_family, b.model_family);
  EXPECT_EQ(a.config_blob, b.config_blob);
  EXPECT_EQ(a.accuracy, b.accuracy);
  EXPECT_EQ(a.work_units, b.work_units);
  const ScoreRequest score{flights_fit().data_path, "Satisfied", a.config_blob, 4, 5.0};
  EXPECT_EQ(child.score(score).accuracy, local.score(score).accuracy);
  child.stop();
  child.stop();
}
#endif

TEST(Process, MissingCommandIsUnavailable) {
  ProcessAdapter child("/nonexistent/automl-server");
  try {
    child.fit(flights_fit());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AdapterUnavailable);
    EXPECT_NE(std::string(e.what()).find("127"), std::string::npos) << e.what();
  }
}

TEST(Process, GarbageReplyIsProtocolError) {
  ProcessAdapter child("read line; echo garbage; sleep 5");
  EXPECT_EQ(code_of([&] { child.fit(flights_fit()); }), ErrorCode::AdapterProtocolError);
}

TEST(Process, SilentChildTimesOut) {
  ProcessAdapter child("sleep 10");
  FitRequest r = flights_fit();
  r.time_budget_s = 0.2;
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(code_of([&] { child.fit(r); }), ErrorCode::AdapterTimeout);
  const double waited = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_GE(waited, watchdog_limit(0.2).count() - 0.05);
  EXPECT_LT(waited, watchdog_limit(0.2).count() + 2.0);
}

}  // namespace
}  // namespace substrat
