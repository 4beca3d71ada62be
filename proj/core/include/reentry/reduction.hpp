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

#include <vector>

#include "reentry/model.hpp"
#include "reentry/policy.hpp"

namespace reentry {

/// Flow-shop time tau = m * period + phase - 1 with phase in [1, m].
struct TimePoint {
  long long tau = 0;
  long long period = 0;
  int phase = 1;

  static TimePoint decompose(long long tau, int machines);
};

/// Arrival of machine i in auxiliary instance k (both 1-based, <= m):
/// 0 if i + k <= m + 1, else 1.
int arrival_time(int machine, int k, int machines);

/// Auxiliary parallel instance I_k: m machines arriving per `arrival_time`,
/// one job per flow-shop job with X_j = Y_j and the same weight.
ParallelInstance build_auxiliary(const FlowShopInstance& inst, int k);

struct MappedSlot {
  int machine = 1;
  long long start = 0;
};

/// A loop entering machine 1 at tau becomes one unit on machine `phase`
/// starting at period + a^k_phase in I_k.
MappedSlot time_map(long long tau, int k, int machines);

/// Replays a flow-shop trace into the induced schedule on I_k.
ScheduleTrace induced_trace(const ScheduleTrace& flow_trace, int k);

/// The policy pi_k induced on I_k by a flow-shop policy: it replays the
/// flow-shop decision sequence through `time_map`, so it exists for every
/// policy, including ones with no canonical parallel counterpart.
class InducedPolicy {
 public:
  InducedPolicy(const Policy& flow_policy, int k) : flow_policy_(&flow_policy), k_(k) {}

  ScheduleTrace run(const FlowShopInstance& inst, const Realization& y) const;
  int k() const { return k_; }

 private:
  const Policy* flow_policy_;
  int k_;
};

InducedPolicy induce_policy(const Policy& flow_policy, int k);

struct JobIdentity {
  int id = 0;
  long long flow_completion = 0;
  std::vector<long long> induced_completions;  // index k - 1
  bool identity_holds = false;                 // C_j = sum_k C_j^{pi_k}
  bool formula_holds = false;                  // C_j^{pi_k} = (C_j - (i - 1)) / m + a^k_i
};

struct IdentityReport {
  std::vector<JobIdentity> jobs;
  long long flow_makespan = 0;
  std::vector<long long> induced_makespans;
  bool makespan_holds = false;  // C_max = sum_k C_max^{pi_k}, attained by the same job

  bool all_hold() const;
};

/// Simulates the flow shop and all m induced schedules under `y` and checks
/// the per-job completion-time identity in exact integer arithmetic.
/// Throws induced_infeasibility if any induced trace is infeasible.
IdentityReport verify_identity(const FlowShopInstance& inst, const Policy& policy, const Realization& y);

}  // namespace reentry
