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

#include <span>
#include <vector>

#include "reentry/model.hpp"
#include "reentry/policy.hpp"

namespace reentry {

struct EngineConfig {
  // Simulated-time safety bound; 0 picks m * sum_j max_support(Y_j) + m,
  // the longest any schedule without voluntary idling can take.
  int horizon_cap = 0;
  bool record_loops = true;
};

/// Unit-step reentrant flow shop. At each integer t: the loop that entered
/// machine 1 at t - m leaves machine m (the job completes if that was loop
/// y_j, otherwise it rejoins the uncompleted set); then the policy picks at
/// most one job to enter machine 1.
ScheduleTrace simulate_flow_shop(const FlowShopInstance& inst, const Policy& policy, const Realization& y,
                                 EngineConfig cfg = {});

/// Same engine without building a trace; writes C_j into `completions`.
/// Used by the exact evaluators on their inner loop.
void simulate_flow_shop_completions(const FlowShopInstance& inst, const Policy& policy,
                                    std::span<const int> loops, std::span<double> completions,
                                    int horizon_cap = 0);

/// Unit-step parallel machines with arrivals. Non-preemptive rules keep a
/// started job on its machine until it finishes; preemptive rules re-rank
/// all unfinished jobs every unit. `y` supplies processing lengths for
/// stochastic jobs; deterministic jobs must have integer durations.
/// `tie_break` is a permutation of job ids (empty = ascending id).
ScheduleTrace simulate_parallel_arrivals(const ParallelInstance& inst, ParallelRule rule, const Realization& y,
                                         EngineConfig cfg = {}, std::span<const int> tie_break = {});

/// List scheduling of deterministic jobs in `order` (job ids): each job starts
/// on the machine that becomes available first (ties to the lowest index).
ScheduleTrace deterministic_list_schedule(const ParallelInstance& inst, std::span<const int> order);

}  // namespace reentry
