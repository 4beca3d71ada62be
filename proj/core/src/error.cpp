// Copyright 2026 The reentry Authors
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

#include "reentry/error.hpp"

namespace reentry {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::undefined_hazard: return "undefined-hazard";
    case ErrorCode::insufficient_table: return "insufficient-table";
    case ErrorCode::unsupported_objective: return "unsupported-objective";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::undefined_priority: return "undefined-priority";
    case ErrorCode::no_canonical_induction: return "no-canonical-induction";
    case ErrorCode::invalid_decision: return "invalid-decision";
    case ErrorCode::runaway_simulation: return "runaway-simulation";
    case ErrorCode::type_error: return "type-error";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::induced_infeasibility: return "induced-infeasibility";
    case ErrorCode::too_large_for_enumeration: return "too-large-for-enumeration";
    case ErrorCode::state_space_too_large: return "state-space-too-large";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace reentry
