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

#include "substrat/automl.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include "substrat/error.hpp"

namespace substrat {

using nlohmann::json;

void ModelConfig::validate() const {
  if (model_family.empty()) throw Error(ErrorCode::AdapterProtocolError, "empty model_family");
  if (!std::isfinite(accuracy) || accuracy < 0.0 || accuracy > 1.0) {
    throw Error(ErrorCode::AdapterProtocolError, "accuracy outside [0, 1]");
  }
  if (!std::isfinite(wall_time.count()) || wall_time.count() < 0.0) {
    throw Error(ErrorCode::AdapterProtocolError, "negative wall_time_s");
  }
}

Seconds watchdog_limit(double budget_s) { return Seconds(std::max(1.2 * budget_s, budget_s + 1.0)); }

namespace protocol {

namespace {

json optional_json(const auto& value) { return value ? json(*value) : json(nullptr); }

template <typename T>
T field(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) throw Error(ErrorCode::AdapterProtocolError, std::string("missing field '") + key + "'");
  try {
    return it->template get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::AdapterProtocolError, std::string("bad type for field '") + key + "'");
  }
}

template <typename T>
std::optional<T> optional_field(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return std::nullopt;
  return field<T>(object, key);
}

}  // namespace

json encode(const FitRequest& request) {
  return {{"op", "fit"},
          {"data_path", request.data_path.string()},
          {"target", request.target},
          {"time_budget_s", request.time_budget_s},
          {"eval_budget", optional_json(request.eval_budget)},
          {"restrict_family", optional_json(request.restrict_family)},
          {"seed", request.seed}};
}

json encode(const ScoreRequest& request) {
  return {{"op", "score"},
          {"data_path", request.data_path.string()},
          {"target", request.target},
          {"config_blob", request.config_blob},
          {"seed", request.seed}};
}

json encode_shutdown() { return {{"op", "shutdown"}}; }

json encode_ok(const ModelConfig& config) {
  return {{"ok", true},
          {"model_family", config.model_family},
          {"config_blob", config.config_blob},
          {"accuracy", config.accuracy},
          {"wall_time_s", config.wall_time.count()},
          {"evaluations", config.evaluations},
          {"work_units", config.work_units}};
}

json encode_error(std::string_view message) { return {{"ok", false}, {"error", message}}; }

ModelConfig decode_response(std::string_view line) {
  json reply = json::parse(line.begin(), line.end(), nullptr, false);
  if (reply.is_discarded() || !reply.is_object()) {
    throw Error(ErrorCode::AdapterProtocolError, "response is not a JSON object");
  }
  if (!field<bool>(reply, "ok")) {
    throw Error(ErrorCode::AdapterProtocolError,
                "adapter error: " + optional_field<std::string>(reply, "error").value_or("unspecified"));
  }
  ModelConfig config;
  config.model_family = field<std::string>(reply, "model_family");
  config.config_blob = field<std::string>(reply, "config_blob");
  config.accuracy = field<double>(reply, "accuracy");
  config.wall_time = Seconds(field<double>(reply, "wall_time_s"));
  config.evaluations = optional_field<std::uint64_t>(reply, "evaluations").value_or(0);
  config.work_units = optional_field<std::uint64_t>(reply, "work_units").value_or(0);
  config.validate();
  return config;
}

FitRequest decode_fit(const json& request) {
  FitRequest out;
  out.data_path = field<std::string>(request, "data_path");
  out.target = field<std::string>(request, "target");
  out.time_budget_s = field<double>(request, "time_budget_s");
  out.eval_budget = optional_field<std::uint64_t>(request, "eval_budget");
  out.restrict_family = optional_field<std::string>(request, "restrict_family");
  out.seed = optional_field<std::uint64_t>(request, "seed").value_or(0);
  return out;
}

ScoreRequest decode_score(const json& request) {
  ScoreRequest out;
  out.data_path = field<std::string>(request, "data_path");
  out.target = field<std::string>(request, "target");
  out.config_blob = field<std::string>(request, "config_blob");
  out.seed = optional_field<std::uint64_t>(request, "seed").value_or(0);
  return out;
}

void serve(std::istream& in, std::ostream& out, AutomlAdapter& backend) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json request = json::parse(line, nullptr, false);
    json reply;
    if (request.is_discarded() || !request.is_object() || !request.contains("op") || !request["op"].is_string()) {
      reply = encode_error("protocol");
    } else {
      const auto op = request["op"].get<std::string>();
      if (op == "shutdown") {
        out << json{{"ok", true}}.dump() << '\n' << std::flush;
        return;
      }
      try {
        if (op == "fit") {
          reply = encode_ok(backend.fit(decode_fit(request)));
        } else if (op == "score") {
          reply = encode_ok(backend.score(decode_score(request)));
        } else {
          reply = encode_error("unknown op '" + op + "'");
        }
      } catch (const std::exception& e) {
        reply = encode_error(e.what());
      }
    }
    out << reply.dump() << '\n' << std::flush;
  }
}

}  // namespace protocol

// --- ProcessAdapter --------------------------------------------------------

namespace {

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

bool write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

std::string describe_status(int status) {
  if (WIFEXITED(status)) return "exited with status " + std::to_string(WEXITSTATUS(status));
  if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
  return "stopped";
}

}  // namespace

ProcessAdapter::ProcessAdapter(std::string command) : command_(std::move(command)) {
  if (command_.empty()) throw Error(ErrorCode::AdapterUnavailable, "empty adapter command");
}

ProcessAdapter::~ProcessAdapter() { stop(); }

void ProcessAdapter::start() {
  // A child that dies mid-write must surface as EPIPE, not terminate us.
  struct sigaction current {};
  if (::sigaction(SIGPIPE, nullptr, &current) == 0 && current.sa_handler == SIG_DFL) std::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw Error(ErrorCode::AdapterUnavailable, std::strerror(errno));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw Error(ErrorCode::AdapterUnavailable, std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw Error(ErrorCode::AdapterUnavailable, std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::signal(SIGPIPE, SIG_DFL);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  pending_.clear();
}

void ProcessAdapter::kill_child() {
  if (pid_ > 0) {
    ::kill(-pid_, SIGKILL);
    ::kill(pid_, SIGKILL);
    int status = 0;
    while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
  }
  pid_ = -1;
  close_fd(to_child_);
  close_fd(from_child_);
  pending_.clear();
}

void ProcessAdapter::stop() {
  if (pid_ <= 0) return;
  write_all(to_child_, protocol::encode_shutdown().dump() + "\n");
  close_fd(to_child_);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(1);
  int status = 0;
  while (std::chrono::steady_clock::now() < deadline) {
    const pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == pid_ || (r < 0 && errno != EINTR)) {
      ::kill(-pid_, SIGKILL);
      pid_ = -1;
      close_fd(from_child_);
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  kill_child();
}

std::string ProcessAdapter::exchange(const json& request, double budget_s) {
  if (pid_ <= 0) start();
  if (!write_all(to_child_, request.dump() + "\n")) {
    kill_child();
    throw Error(ErrorCode::AdapterUnavailable, "adapter '" + command_ + "' is not accepting requests");
  }

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(watchdog_limit(budget_s));
  char buffer[4096];
  for (;;) {
    if (auto nl = pending_.find('\n'); nl != std::string::npos) {
      std::string line = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      kill_child();
      throw Error(ErrorCode::AdapterTimeout, "no response within " + std::to_string(watchdog_limit(budget_s).count()) + " s");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      kill_child();
      throw Error(ErrorCode::AdapterUnavailable, std::strerror(errno));
    }
    if (ready == 0) continue;
    const ssize_t n = ::read(from_child_, buffer, sizeof buffer);
    if (n < 0) {
      if (errno == EINTR) continue;
      kill_child();
      throw Error(ErrorCode::AdapterUnavailable, std::strerror(errno));
    }
    if (n == 0) {
      int status = 0;
      close_fd(to_child_);
      close_fd(from_child_);
      while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
      }
      pid_ = -1;
      pending_.clear();
      throw Error(ErrorCode::AdapterUnavailable, "adapter '" + command_ + "' " + describe_status(status));
    }
    pending_.append(buffer, static_cast<std::size_t>(n));
  }
}

ModelConfig ProcessAdapter::fit(const FitRequest& request) {
  return protocol::decode_response(exchange(protocol::encode(request), request.time_budget_s));
}

ModelConfig ProcessAdapter::score(const ScoreRequest& request) {
  return protocol::decode_response(exchange(protocol::encode(request), request.time_budget_s));
}

}  // namespace substrat
