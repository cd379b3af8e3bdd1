// Copyright 2026 The Provesizer Authors
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

#include "provesizer/error.hpp"

namespace provesizer {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kFinalityInfeasible: return "finality-infeasible";
    case ErrorCode::kMemoryInfeasible: return "memory-infeasible";
    case ErrorCode::kEncodingOverflow: return "encoding-overflow";
    case ErrorCode::kBoundsTooLarge: return "bounds-too-large";
    case ErrorCode::kSolverError: return "solver-error";
    case ErrorCode::kSolverUnavailable: return "solver-unavailable";
    case ErrorCode::kUnknownScenario: return "unknown-scenario";
    case ErrorCode::kUnknownMachine: return "unknown-machine";
    case ErrorCode::kInsufficientRows: return "insufficient-rows";
    case ErrorCode::kInvalidConfig: return "invalid-config";
  }
  return "unknown";
}

}  // namespace provesizer
