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

#include "reentry/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "reentry/error.hpp"

namespace reentry {
namespace {

int default_flow_cap(const FlowShopInstance& inst) {
  long long total = 0;
  for (const auto& j : inst.jobs) total += j.dist.max_support();
  const long long cap = static_cast<long long>(inst.machines) * (total + 1);
  return static_cast<int>(std::min<long long>(cap, 1'000'000'000LL));
}

struct NullRecorder {
  void start(int, int, int, int) {}
};

struct TraceRecorder {
  ScheduleTrace* trace;
  int m;
  void start(int job, int loop, int t, int) {
    trace->jobs[job - 1].operations.push_back({loop, double(t), 1, double(t + m)});
  }
};

template <typename Recorder>
int run_flow_shop(const FlowShopInstance& inst, const Policy& policy, std::span<const int> loops,
                  std::span<double> completions, int horizon_cap, Recorder& recorder) {
  const int n = inst.job_count();
  const int m = inst.machines;
  if (static_cast<int>(loops.size()) != n || static_cast<int>(completions.size()) != n) {
    throw Error(ErrorCode::invalid_parameter, "realization length does not match job count");
  }
  for (int j = 0; j < n; ++j) {
    if (loops[j] < 1) throw Error(ErrorCode::invalid_parameter, "loop counts must be positive");
  }
  const int minimum_cap = default_flow_cap(inst);
  if (horizon_cap == 0) {
    horizon_cap = minimum_cap;
  } else if (horizon_cap < minimum_cap - m) {
    throw Error(ErrorCode::invalid_parameter, "horizon cap below m * sum of maximum loop counts");
  }

  thread_local std::vector<int> done_loops;
  thread_local std::vector<int> entry;  // entry[t % m] = job that entered machine 1 at t, 0 if none
  thread_local std::vector<int> entry_loops;
  thread_local std::vector<WaitingJob> waiting;
  thread_local std::vector<ActiveJob> active;
  done_loops.assign(n, 0);
  entry.assign(m, 0);
  entry_loops.assign(m, 0);
  waiting.clear();
  for (int id = 1; id <= n; ++id) waiting.push_back({id, 0});
  active.clear();

  int remaining = n;
  for (int t = 0;; ++t) {
    const int slot = t % m;
    if (t >= m && entry[slot] != 0) {
      const int id = entry[slot];
      entry[slot] = 0;
      const int k = ++done_loops[id - 1];
      if (k == loops[id - 1]) {
        completions[id - 1] = t;
        --remaining;
      } else {
        auto pos = std::lower_bound(waiting.begin(), waiting.end(), id,
                                    [](const WaitingJob& w, int v) { return w.id < v; });
        waiting.insert(pos, WaitingJob{id, k});
      }
    }
    if (remaining == 0) return t;
    if (t > horizon_cap) {
      throw Error(ErrorCode::runaway_simulation,
                  "flow shop exceeded horizon cap " + std::to_string(horizon_cap) + " under " + policy.name());
    }
    if (waiting.empty()) continue;

    active.clear();
    for (int back = m - 1; back >= 1; --back) {
      const int started = t - back;
      if (started < 0) continue;
      const int id = entry[started % m];
      if (id != 0) active.push_back({id, entry_loops[started % m], started});
    }
    ObservationView view{t, waiting, active, &inst};
    const auto choice = policy.decide(view);
    if (!choice) continue;
    auto it = std::find_if(waiting.begin(), waiting.end(), [&](const WaitingJob& w) { return w.id == *choice; });
    if (it == waiting.end()) {
      throw Error(ErrorCode::invalid_decision, policy.name() + " chose job " + std::to_string(*choice) +
                                                   " which is not waiting at t=" + std::to_string(t));
    }
    entry[slot] = *choice;
    entry_loops[slot] = it->loops_completed;
    recorder.start(*choice, it->loops_completed + 1, t, m);
    waiting.erase(it);
  }
}

}  // namespace

ScheduleTrace simulate_flow_shop(const FlowShopInstance& inst, const Policy& policy, const Realization& y,
                                 EngineConfig cfg) {
  if (const auto problems = validate(y, inst); !problems.empty()) {
    throw Error(ErrorCode::invalid_parameter, "invalid realization: " + problems.front());
  }
  ScheduleTrace trace;
  trace.kind = TraceKind::flow_shop;
  trace.machines = inst.machines;
  trace.jobs.resize(inst.jobs.size());
  for (std::size_t i = 0; i < inst.jobs.size(); ++i) trace.jobs[i].id = inst.jobs[i].id;
  std::vector<double> completions(inst.jobs.size(), 0.0);
  int horizon = 0;
  if (cfg.record_loops) {
    TraceRecorder rec{&trace, inst.machines};
    horizon = run_flow_shop(inst, policy, y.loops, completions, cfg.horizon_cap, rec);
  } else {
    NullRecorder rec;
    horizon = run_flow_shop(inst, policy, y.loops, completions, cfg.horizon_cap, rec);
  }
  for (std::size_t i = 0; i < completions.size(); ++i) trace.jobs[i].completion = completions[i];
  trace.horizon = horizon;
  return trace;
}

void simulate_flow_shop_completions(const FlowShopInstance& inst, const Policy& policy,
                                    std::span<const int> loops, std::span<double> completions,
                                    int horizon_cap) {
  NullRecorder rec;
  run_flow_shop(inst, policy, loops, completions, horizon_cap, rec);
}

namespace {

std::vector<int> tie_ranks(int n, std::span<const int> tie_break) {
  std::vector<int> rank(n);
  if (tie_break.empty()) {
    std::iota(rank.begin(), rank.end(), 0);
    return rank;
  }
  if (static_cast<int>(tie_break.size()) != n) {
    throw Error(ErrorCode::invalid_parameter, "tie_break must be a permutation of job ids");
  }
  std::vector<bool> seen(n, false);
  for (int pos = 0; pos < n; ++pos) {
    const int id = tie_break[pos];
    if (id < 1 || id > n || seen[id - 1]) {
      throw Error(ErrorCode::invalid_parameter, "tie_break must be a permutation of job ids");
    }
    seen[id - 1] = true;
    rank[id - 1] = pos;
  }
  return rank;
}

void append_unit(JobTrace& job, int loop, int t, int machine) {
  if (!job.operations.empty()) {
    auto& last = job.operations.back();
    if (last.machine == machine && last.finish == t) {
      last.finish = t + 1;
      return;
    }
  }
  job.operations.push_back({loop, double(t), machine, double(t + 1)});
}

}  // namespace

ScheduleTrace simulate_parallel_arrivals(const ParallelInstance& inst, ParallelRule rule, const Realization& y,
                                         EngineConfig cfg, std::span<const int> tie_break) {
  if (const auto problems = validate(inst); !problems.empty()) {
    throw Error(ErrorCode::invalid_parameter, "invalid instance: " + problems.front());
  }
  const int n = inst.job_count();
  const int machines = inst.machine_count();
  std::vector<int> arrival(machines);
  for (int i = 0; i < machines; ++i) {
    const double a = inst.arrivals[i];
    if (a != std::floor(a)) throw Error(ErrorCode::type_error, "unit-step simulation needs integer arrivals");
    arrival[i] = static_cast<int>(a);
  }
  std::vector<int> length(n);
  long long total = 0;
  for (int j = 0; j < n; ++j) {
    const auto& job = inst.jobs[j];
    if (job.is_deterministic()) {
      const double p = job.duration();
      if (p != std::floor(p)) throw Error(ErrorCode::type_error, "unit-step simulation needs integer durations");
      length[j] = static_cast<int>(p);
    } else {
      if (static_cast<int>(y.loops.size()) != n) {
        throw Error(ErrorCode::invalid_parameter, "realization length does not match job count");
      }
      const auto& d = std::get<LoopDistribution>(job.processing);
      if (d.pmf(y.loops[j]) <= 0.0) {
        throw Error(ErrorCode::invalid_parameter,
                    "job " + std::to_string(job.id) + ": realized length outside support");
      }
      length[j] = y.loops[j];
    }
    total += length[j];
  }
  const int latest_arrival = *std::max_element(arrival.begin(), arrival.end());
  const long long cap = cfg.horizon_cap > 0 ? cfg.horizon_cap : total + latest_arrival + 1;

  const auto rank = tie_ranks(n, tie_break);
  auto priority = [&](int j, int processed) {
    const auto& job = inst.jobs[j];
    switch (rule) {
      case ParallelRule::lept: return job.expected_duration();
      case ParallelRule::sept: return 1.0 / job.expected_duration();
      case ParallelRule::wsept: return job.weight / job.expected_duration();
      case ParallelRule::preemptive_lept:
      case ParallelRule::preemptive_sept: {
        double r = 0.0;
        if (job.is_deterministic()) {
          r = job.duration() - processed;
        } else {
          r = std::get<LoopDistribution>(job.processing).cond_remaining_mean(processed);
        }
        return rule == ParallelRule::preemptive_lept ? r : 1.0 / r;
      }
    }
    return 0.0;
  };

  ScheduleTrace trace;
  trace.kind = TraceKind::parallel;
  trace.machines = machines;
  trace.jobs.resize(n);
  for (int j = 0; j < n; ++j) trace.jobs[j].id = inst.jobs[j].id;

  const bool preemptive = is_preemptive(rule);
  std::vector<int> processed(n, 0);
  std::vector<int> running_on(n, -1);    // machine currently held (non-preemptive) or used last unit
  std::vector<int> machine_job(machines, -1);
  std::vector<bool> finished(n, false);
  int remaining = n;
  std::vector<int> candidates;
  for (int t = 0; remaining > 0; ++t) {
    if (t > cap) throw Error(ErrorCode::runaway_simulation, "parallel simulation exceeded its horizon cap");
    std::vector<int> free_machines;
    if (preemptive) std::fill(machine_job.begin(), machine_job.end(), -1);
    for (int i = 0; i < machines; ++i) {
      if (arrival[i] <= t && machine_job[i] == -1) free_machines.push_back(i);
    }
    candidates.clear();
    for (int j = 0; j < n; ++j) {
      if (finished[j]) continue;
      if (!preemptive && running_on[j] != -1) continue;
      candidates.push_back(j);
    }
    std::vector<double> prio(n, 0.0);
    for (int j : candidates) prio[j] = priority(j, processed[j]);
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      if (prio[a] != prio[b]) return prio[a] > prio[b];
      return rank[a] < rank[b];
    });
    if (candidates.size() > free_machines.size()) candidates.resize(free_machines.size());

    if (preemptive) {
      // keep a selected job on the machine it used last unit when possible
      std::vector<bool> taken(machines, false);
      std::vector<int> unplaced;
      for (int j : candidates) {
        const int prev = running_on[j];
        if (prev >= 0 && arrival[prev] <= t && !taken[prev]) {
          taken[prev] = true;
          machine_job[prev] = j;
        } else {
          unplaced.push_back(j);
        }
      }
      std::size_t next = 0;
      for (int i : free_machines) {
        if (next == unplaced.size()) break;
        if (!taken[i]) {
          taken[i] = true;
          machine_job[i] = unplaced[next++];
        }
      }
      std::fill(running_on.begin(), running_on.end(), -1);
    } else {
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        machine_job[free_machines[c]] = candidates[c];
        running_on[candidates[c]] = free_machines[c];
      }
    }

    for (int i = 0; i < machines; ++i) {
      const int j = machine_job[i];
      if (j < 0) continue;
      append_unit(trace.jobs[j], 1, t, i + 1);
      running_on[j] = i;
      if (++processed[j] == length[j]) {
        finished[j] = true;
        --remaining;
        trace.jobs[j].completion = t + 1;
        machine_job[i] = -1;
        if (!preemptive) running_on[j] = -1;
      }
    }
    trace.horizon = t + 1;
  }
  return trace;
}

ScheduleTrace deterministic_list_schedule(const ParallelInstance& inst, std::span<const int> order) {
  const int n = inst.job_count();
  if (static_cast<int>(order.size()) != n) throw Error(ErrorCode::invalid_parameter, "order must list every job");
  for (const auto& j : inst.jobs) {
    if (!j.is_deterministic()) {
      throw Error(ErrorCode::type_error, "job " + std::to_string(j.id) + " is stochastic; list schedule needs p_j");
    }
  }
  using Slot = std::pair<double, int>;  // (available time, machine index)
  std::priority_queue<Slot, std::vector<Slot>, std::greater<>> machines;
  for (int i = 0; i < inst.machine_count(); ++i) machines.emplace(inst.arrivals[i], i);

  ScheduleTrace trace;
  trace.kind = TraceKind::parallel;
  trace.machines = inst.machine_count();
  trace.jobs.resize(n);
  std::vector<bool> placed(n, false);
  for (int id : order) {
    if (id < 1 || id > n || placed[id - 1]) throw Error(ErrorCode::invalid_parameter, "order is not a permutation");
    placed[id - 1] = true;
    auto [avail, machine] = machines.top();
    machines.pop();
    const double finish = avail + inst.jobs[id - 1].duration();
    auto& jt = trace.jobs[id - 1];
    jt.id = id;
    jt.operations.push_back({1, avail, machine + 1, finish});
    jt.completion = finish;
    machines.emplace(finish, machine);
    trace.horizon = std::max(trace.horizon, finish);
  }
  return trace;
}

}  // namespace reentry
