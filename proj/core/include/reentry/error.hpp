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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reentry {

enum class ErrorCode {
  invalid_parameter,
  undefined_hazard,
  insufficient_table,
  unsupported_objective,
  parse_error,
  undefined_priority,
  no_canonical_induction,
  invalid_decision,
  runaway_simulation,
  type_error,
  out_of_range,
  induced_infeasibility,
  too_large_for_enumeration,
  state_space_too_large,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; `code()` lets callers
// branch (e.g. fall back to Monte Carlo on too_large_for_enumeration).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the "<code>: " prefix of what().
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace reentry
