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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "reentry/model.hpp"
#include "reentry/policy.hpp"

namespace reentry {

struct EnumerationOptions {
  std::size_t cap = 1'000'000;  // maximum number of realizations
  unsigned threads = 1;         // 0 = hardware concurrency; result does not depend on it
};

/// E[gamma] under `policy`: sum over every realization y of the truncated
/// distributions of P(y) * gamma(simulate_flow_shop(inst, policy, y)).
/// Throws too_large_for_enumeration when the realization count exceeds the cap.
double evaluate_policy_exact(const FlowShopInstance& inst, const Policy& policy, Objective objective,
                             EnumerationOptions options = {});

std::size_t realization_count(const FlowShopInstance& inst);

enum class PolicyClass {
  all,              // every non-anticipatory rule, idling included
  non_interruptive  // a job that re-enters must be restarted at once
};

struct MdpOptions {
  std::size_t state_cap = 10'000'000;
  // All-geometric instances drop loops_done from the state (hazard q at every
  // loop). The state graph then has cycles and is solved by value iteration.
  bool collapse_memoryless = true;
  PolicyClass policy_class = PolicyClass::all;
  bool record_decisions = true;
};

/// Per-job status inside an MDP state.
struct JobStatus {
  enum class Kind { done, waiting, in_pipeline };
  Kind kind = Kind::waiting;
  int loops_done = 0;
  int position = 0;  // units since entering machine 1 (1..m-1) when in_pipeline
};

/// State of the flow shop right after completions at some time t and before
/// the machine-1 decision. Time is implicit: each transition is one unit.
struct MdpState {
  std::vector<JobStatus> jobs;
};

struct MdpSolution {
  double value = 0.0;
  std::size_t states = 0;
  bool collapsed = false;
  double truncated_mass = 0.0;  // probability that some job exceeds a truncation point
  // encoded state -> chosen job id (0 = idle)
  std::unordered_map<std::uint64_t, int> decisions;
  std::vector<int> radix;  // per-job code radix, for decode_state
  int machines = 1;

  MdpState decode_state(std::uint64_t code) const;
};

/// Minimum expected objective over the requested policy class by backward
/// induction on the truncated state graph (makespan, sum C_j, sum w_j C_j).
/// Throws state_space_too_large when more than `state_cap` states are reached.
MdpSolution optimal_expected(const FlowShopInstance& inst, Objective objective, MdpOptions options = {});

/// Expected objective of a time-homogeneous policy computed on the same state
/// graph (decisions read from the policy instead of minimized). Views passed
/// to the policy carry now = 0 and active start times -position.
double evaluate_policy_mdp(const FlowShopInstance& inst, const Policy& policy, Objective objective,
                           MdpOptions options = {});

struct ParallelSolution {
  double value = 0.0;
  ScheduleTrace trace;
  std::vector<int> machine_of;  // per job, 1-based machine
};

/// Exhaustive search over job-to-machine assignments of a deterministic
/// instance; each machine runs its jobs in non-increasing w/p from its
/// arrival. Supports makespan, sum C_j, sum w_j C_j and alpha variants.
ParallelSolution brute_force_parallel_opt(const ParallelInstance& inst, Objective objective,
                                          std::size_t job_cap = 12);

enum class TieMode { best, worst, explicit_order };

struct WsptResult {
  double value = 0.0;
  std::vector<int> order;
  std::size_t orders_examined = 0;
};

/// List schedule of a WSPT-consistent order (w/p non-increasing). best/worst
/// search every order that permutes jobs of equal ratio; explicit_order uses
/// `order`, which must itself be WSPT-consistent.
WsptResult wspt_value(const ParallelInstance& inst, TieMode mode, Objective objective,
                      std::span<const int> order = {}, std::size_t order_cap = 2'000'000);

/// Objective of `deterministic_list_schedule(inst, order)` without building a trace.
double list_schedule_objective(const ParallelInstance& inst, std::span<const int> order, Objective objective);

}  // namespace reentry
