// Copyright 2026 The Reroute Authors
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

#include "reroute/error.hpp"

namespace reroute {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kInvariant: return "invariant-violation";
    case ErrorCode::kNotDag: return "not-a-dag";
    case ErrorCode::kWrongPairCount: return "wrong-pair-count";
    case ErrorCode::kMalformedSchedule: return "malformed-schedule";
    case ErrorCode::kRoundTooLarge: return "round-too-large";
    case ErrorCode::kPrecondition: return "precondition-violation";
    case ErrorCode::kDegenerateFormula: return "degenerate-formula";
    case ErrorCode::kUnsatisfied: return "assignment-does-not-satisfy";
    case ErrorCode::kInvalidSequence: return "sequence-invalid";
    case ErrorCode::kHorizonExceeded: return "rounds-exceed-horizon";
    case ErrorCode::kPathNotInGraph: return "path-not-in-graph";
    case ErrorCode::kEmptyGraph: return "empty-graph";
  }
  return "unknown";
}

}  // namespace reroute
