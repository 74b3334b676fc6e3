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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace substrat {

enum class ErrorCode {
  // ingestion
  MissingTarget,
  RaggedRows,
  EmptyFile,
  IoError,
  // subsets and views
  IndexOutOfRange,
  TargetMissing,
  SizeTooLarge,
  InvalidSubset,
  EmptyView,
  // search
  IncompatibleShapes,
  EmptyPopulation,
  TooManyCombinations,
  InvalidParams,
  UnknownMeasure,
  // pipeline / adapter
  AdapterUnavailable,
  AdapterProtocolError,
  AdapterTimeout,
  DivisionByZero,
};

/// Stable identifier for an error code; the CLI prints these verbatim.
constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingTarget: return "MissingTarget";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TargetMissing: return "TargetMissing";
    case ErrorCode::SizeTooLarge: return "SizeTooLarge";
    case ErrorCode::InvalidSubset: return "InvalidSubset";
    case ErrorCode::EmptyView: return "EmptyView";
    case ErrorCode::IncompatibleShapes: return "IncompatibleShapes";
    case ErrorCode::EmptyPopulation: return "EmptyPopulation";
    case ErrorCode::TooManyCombinations: return "TooManyCombinations";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::UnknownMeasure: return "UnknownMeasure";
    case ErrorCode::AdapterUnavailable: return "AdapterUnavailable";
    case ErrorCode::AdapterProtocolError: return "AdapterProtocolError";
    case ErrorCode::AdapterTimeout: return "AdapterTimeout";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
  }
  return "Unknown";
}

/// Single exception type for the library. `code()` carries the failure
/// category; `what()` is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for errors raised at the AutoML adapter boundary.
  bool is_adapter_error() const noexcept {
    return code_ == ErrorCode::AdapterUnavailable || code_ == ErrorCode::AdapterProtocolError ||
           code_ == ErrorCode::AdapterTimeout;
  }

 private:
  ErrorCode code_;
};

}  // namespace substrat
