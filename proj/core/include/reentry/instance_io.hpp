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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

#include "reentry/model.hpp"

namespace reentry {

using AnyInstance = std::variant<FlowShopInstance, ParallelInstance>;

/// Instance files are JSON:
///   {"type": "flowshop", "m": 2, "jobs": [{"id": 1, "weight": 1, "dist": {...}}]}
///   {"type": "parallel", "arrivals": [0, 1], "jobs": [{"id": 1, "weight": 1, "p": 2.5}]}
/// with distributions {"kind": "geometric"|"deterministic"|"negbin"|"consecutive"|"empirical",
/// "q": .., "L": .., "epsilon": .., "pmf": [[k, p], ...]}.
/// Parse failures throw parse_error naming the offending field path.
AnyInstance parse_instance(const std::string& text);
std::string dump_instance(const AnyInstance& inst);

AnyInstance load_instance(const std::filesystem::path& path);
void save_instance(const AnyInstance& inst, const std::filesystem::path& path);

FlowShopInstance load_flow_shop(const std::filesystem::path& path);

/// CSV with header `job,loop,start,machine,finish`. Flow-shop loops expand to
/// one row per machine visit.
void write_trace_csv(std::ostream& out, const ScheduleTrace& trace);

}  // namespace reentry
