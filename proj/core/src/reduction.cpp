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

#include "reentry/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "reentry/error.hpp"
#include "reentry/simulator.hpp"

namespace reentry {

TimePoint TimePoint::decompose(long long tau, int machines) {
  if (machines < 1) throw Error(ErrorCode::out_of_range, "machine count must be positive");
  if (tau < 0) throw Error(ErrorCode::out_of_range, "time must be non-negative");
  return {tau, tau / machines, static_cast<int>(tau % machines) + 1};
}

int arrival_time(int machine, int k, int machines) {
  if (machines < 1 || machine < 1 || machine > machines || k < 1 || k > machines) {
    throw Error(ErrorCode::out_of_range, "arrival_time(i=" + std::to_string(machine) + ", k=" +
                                             std::to_string(k) + ", m=" + std::to_string(machines) + ")");
  }
  return machine + k <= machines + 1 ? 0 : 1;
}

ParallelInstance build_auxiliary(const FlowShopInstance& inst, int k) {
  const int m = inst.machines;
  if (k < 1 || k > m) {
    throw Error(ErrorCode::out_of_range, "auxiliary index k=" + std::to_string(k) + " outside [1, m]");
  }
  ParallelInstance aux;
  for (int i = 1; i <= m; ++i) aux.arrivals.push_back(arrival_time(i, k, m));
  for (const auto& j : inst.jobs) aux.jobs.push_back({j.id, j.weight, j.dist});
  return aux;
}

MappedSlot time_map(long long tau, int k, int machines) {
  const auto tp = TimePoint::decompose(tau, machines);
  return {tp.phase, tp.period + arrival_time(tp.phase, k, machines)};
}

ScheduleTrace induced_trace(const ScheduleTrace& flow_trace, int k) {
  if (flow_trace.kind != TraceKind::flow_shop) {
    throw Error(ErrorCode::type_error, "induced_trace expects a flow-shop trace");
  }
  const int m = flow_trace.machines;
  ScheduleTrace out;
  out.kind = TraceKind::parallel;
  out.machines = m;
  out.jobs.resize(flow_trace.jobs.size());
  for (std::size_t j = 0; j < flow_trace.jobs.size(); ++j) {
    const auto& src = flow_trace.jobs[j];
    auto& dst = out.jobs[j];
    dst.id = src.id;
    for (const auto& op : src.operations) {
      const auto slot = time_map(static_cast<long long>(op.start), k, m);
      const double start = static_cast<double>(slot.start);
      if (!dst.operations.empty()) {
        auto& last = dst.operations.back();
        if (last.machine == slot.machine && last.finish == start) {
          last.finish = start + 1.0;
          continue;
        }
      }
      dst.operations.push_back({op.loop, start, slot.machine, start + 1.0});
    }
    if (!dst.operations.empty()) dst.completion = dst.operations.back().finish;
    out.horizon = std::max(out.horizon, dst.completion);
  }
  return out;
}

ScheduleTrace InducedPolicy::run(const FlowShopInstance& inst, const Realization& y) const {
  return induced_trace(simulate_flow_shop(inst, *flow_policy_, y), k_);
}

InducedPolicy induce_policy(const Policy& flow_policy, int k) { return InducedPolicy(flow_policy, k); }

bool IdentityReport::all_hold() const {
  if (!makespan_holds) return false;
  return std::all_of(jobs.begin(), jobs.end(), [](const JobIdentity& j) { return j.identity_holds && j.formula_holds; });
}

IdentityReport verify_identity(const FlowShopInstance& inst, const Policy& policy, const Realization& y) {
  const int m = inst.machines;
  const auto flow = simulate_flow_shop(inst, policy, y);
  const auto to_int = [](double v) {
    if (v != std::floor(v)) throw Error(ErrorCode::induced_infeasibility, "non-integer completion time");
    return static_cast<long long>(v);
  };

  IdentityReport report;
  report.jobs.resize(flow.jobs.size());
  for (std::size_t j = 0; j < flow.jobs.size(); ++j) {
    report.jobs[j].id = flow.jobs[j].id;
    report.jobs[j].flow_completion = to_int(flow.jobs[j].completion);
  }
  report.flow_makespan = to_int(flow.makespan());

  for (int k = 1; k <= m; ++k) {
    const auto aux = build_auxiliary(inst, k);
    const auto induced = induced_trace(flow, k);
    const auto problems = check_feasibility(induced, aux.arrivals);
    if (!problems.empty()) {
      throw Error(ErrorCode::induced_infeasibility, "I_" + std::to_string(k) + ": " + problems.front());
    }
    for (std::size_t j = 0; j < induced.jobs.size(); ++j) {
      long long units = 0;
      for (const auto& op : induced.jobs[j].operations) units += to_int(op.finish - op.start);
      if (units != y.loops[j]) {
        throw Error(ErrorCode::induced_infeasibility,
                    "job " + std::to_string(induced.jobs[j].id) + " receives " + std::to_string(units) +
                        " units in I_" + std::to_string(k) + " but needs " + std::to_string(y.loops[j]));
      }
      report.jobs[j].induced_completions.push_back(to_int(induced.jobs[j].completion));
    }
    report.induced_makespans.push_back(to_int(induced.makespan()));
  }

  for (std::size_t j = 0; j < report.jobs.size(); ++j) {
    auto& r = report.jobs[j];
    long long sum = 0;
    for (long long c : r.induced_completions) sum += c;
    r.identity_holds = sum == r.flow_completion;
    // phase of the final loop's entry into machine 1
    const auto last_start = static_cast<long long>(flow.jobs[j].operations.back().start);
    const int phase = TimePoint::decompose(last_start, m).phase;
    r.formula_holds = true;
    for (int k = 1; k <= m; ++k) {
      const long long numerator = r.flow_completion - (phase - 1);
      const bool ok = numerator % m == 0 &&
                      numerator / m + arrival_time(phase, k, m) == r.induced_completions[k - 1];
      r.formula_holds = r.formula_holds && ok;
    }
  }

  long long induced_sum = 0;
  for (long long c : report.induced_makespans) induced_sum += c;
  bool same_job = false;
  for (const auto& r : report.jobs) {
    if (r.flow_completion != report.flow_makespan) continue;
    bool attains_all = true;
    for (int k = 0; k < m; ++k) attains_all = attains_all && r.induced_completions[k] == report.induced_makespans[k];
    same_job = same_job || attains_all;
  }
  report.makespan_holds = induced_sum == report.flow_makespan && same_job;
  return report;
}

}  // namespace reentry
