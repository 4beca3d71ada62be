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

#include "reentry/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <array>
#include <functional>

#include "reentry/error.hpp"
#include "reentry/simulator.hpp"
#include "parallel.hpp"

namespace reentry {
namespace {

constexpr std::size_t kChunk = 1024;

double per_step_cost(Objective objective, std::span<const double> weights, std::span<const int> codes) {
  switch (objective.kind) {
    case Objective::Kind::makespan: {
      for (int c : codes) {
        if (c != 0) return 1.0;
      }
      return 0.0;
    }
    case Objective::Kind::total_completion: {
      double s = 0.0;
      for (int c : codes) s += c != 0 ? 1.0 : 0.0;
      return s;
    }
    case Objective::Kind::total_weighted_completion: {
      double s = 0.0;
      for (std::size_t j = 0; j < codes.size(); ++j) s += codes[j] != 0 ? weights[j] : 0.0;
      return s;
    }
    case Objective::Kind::alpha_weighted_completion: break;
  }
  throw Error(ErrorCode::unsupported_objective, "alpha-completion objectives are not defined on the flow shop");
}

double realization_objective(Objective objective, std::span<const double> weights,
                             std::span<const double> completions) {
  switch (objective.kind) {
    case Objective::Kind::makespan: return *std::max_element(completions.begin(), completions.end());
    case Objective::Kind::total_completion: return std::accumulate(completions.begin(), completions.end(), 0.0);
    case Objective::Kind::total_weighted_completion: {
      double s = 0.0;
      for (std::size_t j = 0; j < completions.size(); ++j) s += weights[j] * completions[j];
      return s;
    }
    case Objective::Kind::alpha_weighted_completion: break;
  }
  throw Error(ErrorCode::unsupported_objective, "alpha-completion objectives are not defined on the flow shop");
}

}  // namespace

std::size_t realization_count(const FlowShopInstance& inst) {
  long double count = 1.0L;
  for (const auto& j : inst.jobs) count *= static_cast<long double>(j.dist.support().size());
  if (count > static_cast<long double>(std::numeric_limits<std::size_t>::max() / 2)) {
    return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(count);
}

double evaluate_policy_exact(const FlowShopInstance& inst, const Policy& policy, Objective objective,
                             EnumerationOptions options) {
  if (objective.kind == Objective::Kind::alpha_weighted_completion) {
    throw Error(ErrorCode::unsupported_objective, "alpha-completion objectives are not defined on the flow shop");
  }
  const std::size_t total = realization_count(inst);
  if (total > options.cap) {
    throw Error(ErrorCode::too_large_for_enumeration,
                std::to_string(total) + " realizations exceed the cap of " + std::to_string(options.cap));
  }
  const int n = inst.job_count();
  std::vector<std::vector<std::pair<int, double>>> supports;
  for (const auto& j : inst.jobs) supports.push_back(j.dist.support());
  const auto weights = inst.weights();

  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  detail::parallel_for(chunks, options.threads, [&](std::size_t c) {
    std::vector<int> loops(n);
    std::vector<double> completions(n);
    std::vector<std::size_t> digit(n);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(total, begin + kChunk);
    std::size_t rest = begin;
    for (int j = n - 1; j >= 0; --j) {
      digit[j] = rest % supports[j].size();
      rest /= supports[j].size();
    }
    double sum = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
      double prob = 1.0;
      for (int j = 0; j < n; ++j) {
        loops[j] = supports[j][digit[j]].first;
        prob *= supports[j][digit[j]].second;
      }
      simulate_flow_shop_completions(inst, policy, loops, completions);
      sum += prob * realization_objective(objective, weights, completions);
      for (int j = n - 1; j >= 0; --j) {
        if (++digit[j] < supports[j].size()) break;
        digit[j] = 0;
      }
    }
    partial[c] = sum;
  });
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

namespace {

// Per-job code: 0 = done, otherwise 1 + loops_done * m + position, where
// position 0 means waiting and 1..m-1 means in the pipeline.
class FlowShopMdp {
 public:
  struct Outcome {
    double prob;
    std::uint64_t next;
  };

  FlowShopMdp(const FlowShopInstance& inst, Objective objective, const MdpOptions& options)
      : inst_(inst), objective_(objective), options_(options), n_(inst.job_count()), m_(inst.machines) {
    per_step_cost(objective, {}, {});  // rejects alpha objectives up front
    weights_ = inst.weights();
    collapsed_ = options.collapse_memoryless && options.policy_class == PolicyClass::all &&
                 std::all_of(inst.jobs.begin(), inst.jobs.end(), [](const FlowShopJob& j) {
                   return j.dist.params().kind == DistKind::geometric;
                 });
    hazards_.resize(n_);
    radix_.resize(n_);
    stride_.resize(n_);
    long double space = 1.0L;
    for (int j = 0; j < n_; ++j) {
      const auto& d = inst.jobs[j].dist;
      if (collapsed_) {
        hazards_[j] = {d.params().success_prob};
      } else {
        for (int l = 0; l < d.max_support() && d.survival(l) > 0.0; ++l) hazards_[j].push_back(d.hazard(l));
      }
      radix_[j] = 1 + static_cast<int>(hazards_[j].size()) * m_;
      space *= radix_[j];
    }
    if (space > 9.0e18L) throw Error(ErrorCode::state_space_too_large, "state encoding exceeds 64 bits");
    std::uint64_t s = 1;
    for (int j = n_ - 1; j >= 0; --j) {
      stride_[j] = s;
      s *= static_cast<std::uint64_t>(radix_[j]);
    }
    truncated_mass_ = 0.0;
    for (const auto& j : inst.jobs) truncated_mass_ += j.dist.truncation_tail();
  }

  bool collapsed() const { return collapsed_; }
  double truncated_mass() const { return truncated_mass_; }
  const std::vector<int>& radix() const { return radix_; }

  std::uint64_t initial() const {
    std::uint64_t code = 0;
    for (int j = 0; j < n_; ++j) code += stride_[j] * 1;  // waiting, no loops done
    return code;
  }

  void decode(std::uint64_t code, std::vector<int>& out) const {
    out.resize(n_);
    for (int j = 0; j < n_; ++j) {
      out[j] = static_cast<int>(code / stride_[j]);
      code %= stride_[j];
    }
  }

  std::uint64_t encode(const std::vector<int>& codes) const {
    std::uint64_t c = 0;
    for (int j = 0; j < n_; ++j) c += stride_[j] * static_cast<std::uint64_t>(codes[j]);
    return c;
  }

  double cost(const std::vector<int>& codes) const { return per_step_cost(objective_, weights_, codes); }

  static bool waiting(int c, int m) { return c != 0 && (c - 1) % m == 0; }
  static int loops_of(int c, int m) { return (c - 1) / m; }
  static int position_of(int c, int m) { return (c - 1) % m; }

  bool pipeline_empty(const std::vector<int>& codes) const {
    for (int c : codes) {
      if (c != 0 && position_of(c, m_) != 0) return false;
    }
    return true;
  }

  // Legal actions: job indices (0-based) that are waiting, -1 for idle.
  void actions(const std::vector<int>& codes, std::vector<int>& out) const {
    out.clear();
    if (options_.policy_class == PolicyClass::non_interruptive) {
      for (int j = 0; j < n_; ++j) {
        if (waiting(codes[j], m_) && loops_of(codes[j], m_) > 0) {
          out.push_back(j);
          return;
        }
      }
    }
    for (int j = 0; j < n_; ++j) {
      if (waiting(codes[j], m_)) out.push_back(j);
    }
    // idling with an empty pipeline leaves the state unchanged at positive cost
    if (!pipeline_empty(codes)) out.push_back(-1);
  }

  int transitions(const std::vector<int>& codes, int action, Outcome out[2]) const {
    thread_local std::vector<int> next;
    next = codes;
    int completing = -1;
    for (int j = 0; j < n_; ++j) {
      int c = next[j];
      if (c == 0) continue;
      int p = position_of(c, m_);
      if (j == action) p = 1;
      else if (p == 0) continue;
      else ++p;
      const int l = loops_of(c, m_);
      if (p == m_) {
        completing = j;
        next[j] = 1 + l * m_;
      } else {
        next[j] = 1 + l * m_ + p;
      }
    }
    if (completing < 0) {
      out[0] = {1.0, encode(next)};
      return 1;
    }
    const int l = collapsed_ ? 0 : loops_of(next[completing], m_);
    const double h = hazards_[completing][static_cast<std::size_t>(l)];
    int count = 0;
    if (h > 0.0) {
      next[completing] = 0;
      out[count++] = {h, encode(next)};
    }
    if (h < 1.0) {
      const int next_loops = collapsed_ ? 0 : l + 1;
      next[completing] = 1 + next_loops * m_;
      out[count++] = {1.0 - h, encode(next)};
    }
    return count;
  }

  int n() const { return n_; }
  int m() const { return m_; }
  const MdpOptions& options() const { return options_; }
  const FlowShopInstance& instance() const { return inst_; }

 private:
  const FlowShopInstance& inst_;
  Objective objective_;
  MdpOptions options_;
  int n_;
  int m_;
  bool collapsed_ = false;
  double truncated_mass_ = 0.0;
  std::vector<double> weights_;
  std::vector<std::vector<double>> hazards_;
  std::vector<int> radix_;
  std::vector<std::uint64_t> stride_;
};

// Chooses an action for a decoded state; -1 idle, otherwise 0-based job.
using ActionSource = std::function<int(const std::vector<int>& codes)>;

class AcyclicSolver {
 public:
  AcyclicSolver(const FlowShopMdp& mdp, const ActionSource* fixed, bool record)
      : mdp_(mdp), fixed_(fixed), record_(record) {}

  double solve(std::uint64_t code, int depth = 0) {
    if (code == 0) return 0.0;
    if (auto it = memo_.find(code); it != memo_.end()) return it->second;
    if (depth > 200'000) throw Error(ErrorCode::state_space_too_large, "state graph too deep");
    std::vector<int> codes;
    mdp_.decode(code, codes);
    const double step = mdp_.cost(codes);
    FlowShopMdp::Outcome outcomes[2];
    double best = std::numeric_limits<double>::infinity();
    int best_action = -1;
    if (fixed_ != nullptr) {
      best_action = (*fixed_)(codes);
      if (best_action < 0 && mdp_.pipeline_empty(codes)) {
        throw Error(ErrorCode::runaway_simulation, "policy idles with every unfinished job waiting");
      }
      const int k = mdp_.transitions(codes, best_action, outcomes);
      best = 0.0;
      for (int o = 0; o < k; ++o) best += outcomes[o].prob * solve(outcomes[o].next, depth + 1);
    } else {
      std::vector<int> acts;
      mdp_.actions(codes, acts);
      for (int a : acts) {
        const int k = mdp_.transitions(codes, a, outcomes);
        double v = 0.0;
        for (int o = 0; o < k; ++o) v += outcomes[o].prob * solve(outcomes[o].next, depth + 1);
        if (v < best) {
          best = v;
          best_action = a;
        }
      }
    }
    const double value = step + best;
    memo_.emplace(code, value);
    if (memo_.size() > mdp_.options().state_cap) {
      throw Error(ErrorCode::state_space_too_large,
                  "more than " + std::to_string(mdp_.options().state_cap) + " states reached");
    }
    if (record_) decisions_.emplace(code, best_action + 1);
    return value;
  }

  std::size_t states() const { return memo_.size(); }
  std::unordered_map<std::uint64_t, int>& decisions() { return decisions_; }

 private:
  const FlowShopMdp& mdp_;
  const ActionSource* fixed_;
  bool record_;
  std::unordered_map<std::uint64_t, double> memo_;
  std::unordered_map<std::uint64_t, int> decisions_;
};

// Value iteration on the (cyclic) collapsed state graph.
double solve_cyclic(const FlowShopMdp& mdp, const ActionSource* fixed, std::size_t& states,
                    std::unordered_map<std::uint64_t, int>* decisions) {
  struct Action {
    int job;
    int count;
    double prob[2];
    std::size_t next[2];
  };
  std::vector<std::uint64_t> codes_of;
  std::unordered_map<std::uint64_t, std::size_t> index;
  std::vector<double> step_cost;
  std::vector<std::vector<Action>> acts;
  constexpr std::size_t kTerminal = std::numeric_limits<std::size_t>::max();

  std::queue<std::uint64_t> frontier;
  const auto start = mdp.initial();
  index.emplace(start, 0);
  codes_of.push_back(start);
  frontier.push(start);
  std::vector<int> codes;
  std::vector<int> legal;
  FlowShopMdp::Outcome outcomes[2];
  std::vector<std::vector<std::pair<int, std::array<std::pair<double, std::uint64_t>, 2>>>> raw;
  while (!frontier.empty()) {
    const auto code = frontier.front();
    frontier.pop();
    mdp.decode(code, codes);
    step_cost.push_back(mdp.cost(codes));
    if (fixed != nullptr) {
      const int a = (*fixed)(codes);
      if (a < 0 && mdp.pipeline_empty(codes)) {
        throw Error(ErrorCode::runaway_simulation, "policy idles with every unfinished job waiting");
      }
      legal.assign(1, a);
    } else {
      mdp.actions(codes, legal);
    }
    std::vector<Action> list;
    for (int a : legal) {
      Action act{a, mdp.transitions(codes, a, outcomes), {0, 0}, {kTerminal, kTerminal}};
      for (int o = 0; o < act.count; ++o) {
        act.prob[o] = outcomes[o].prob;
        const auto nxt = outcomes[o].next;
        if (nxt == 0) continue;
        auto [it, inserted] = index.emplace(nxt, codes_of.size());
        if (inserted) {
          codes_of.push_back(nxt);
          frontier.push(nxt);
          if (codes_of.size() > mdp.options().state_cap) {
            throw Error(ErrorCode::state_space_too_large, "collapsed state space exceeds cap");
          }
        }
        act.next[o] = it->second;
      }
      list.push_back(act);
    }
    acts.push_back(std::move(list));
  }
  states = codes_of.size();

  std::vector<double> value(states, 0.0);
  std::vector<int> choice(states, -1);
  for (int sweep = 0; sweep < 5'000'000; ++sweep) {
    double delta = 0.0;
    for (std::size_t s = 0; s < states; ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& act : acts[s]) {
        double v = 0.0;
        for (int o = 0; o < act.count; ++o) v += act.prob[o] * (act.next[o] == kTerminal ? 0.0 : value[act.next[o]]);
        if (v < best) {
          best = v;
          choice[s] = act.job;
        }
      }
      const double updated = step_cost[s] + best;
      delta = std::max(delta, std::abs(updated - value[s]));
      value[s] = updated;
    }
    if (delta <= 1e-14 * std::max(1.0, value[0])) break;
  }
  if (decisions != nullptr) {
    for (std::size_t s = 0; s < states; ++s) decisions->emplace(codes_of[s], choice[s] + 1);
  }
  return value[0];
}

ActionSource policy_actions(const FlowShopMdp& mdp, const Policy& policy) {
  return [&mdp, &policy](const std::vector<int>& codes) {
    const int m = mdp.m();
    std::vector<WaitingJob> waiting;
    std::vector<ActiveJob> active;
    for (int j = 0; j < mdp.n(); ++j) {
      const int c = codes[j];
      if (c == 0) continue;
      const int l = FlowShopMdp::loops_of(c, m);
      const int p = FlowShopMdp::position_of(c, m);
      if (p == 0) {
        waiting.push_back({j + 1, l});
      } else {
        active.push_back({j + 1, l, -p});
      }
    }
    std::sort(active.begin(), active.end(), [](const ActiveJob& a, const ActiveJob& b) { return a.start < b.start; });
    ObservationView view{0, waiting, active, &mdp.instance()};
    const auto pick = policy.decide(view);
    if (!pick) return -1;
    const bool ok = std::any_of(waiting.begin(), waiting.end(), [&](const WaitingJob& w) { return w.id == *pick; });
    if (!ok) throw Error(ErrorCode::invalid_decision, policy.name() + " chose a job that is not waiting");
    return *pick - 1;
  };
}

}  // namespace

MdpState MdpSolution::decode_state(std::uint64_t code) const {
  MdpState state;
  std::vector<std::uint64_t> stride(radix.size());
  std::uint64_t s = 1;
  for (int j = static_cast<int>(radix.size()) - 1; j >= 0; --j) {
    stride[j] = s;
    s *= static_cast<std::uint64_t>(radix[j]);
  }
  for (std::size_t j = 0; j < radix.size(); ++j) {
    const int c = static_cast<int>(code / stride[j]);
    code %= stride[j];
    JobStatus st;
    if (c == 0) {
      st.kind = JobStatus::Kind::done;
    } else {
      st.loops_done = (c - 1) / machines;
      st.position = (c - 1) % machines;
      st.kind = st.position == 0 ? JobStatus::Kind::waiting : JobStatus::Kind::in_pipeline;
    }
    state.jobs.push_back(st);
  }
  return state;
}

MdpSolution optimal_expected(const FlowShopInstance& inst, Objective objective, MdpOptions options) {
  FlowShopMdp mdp(inst, objective, options);
  MdpSolution sol;
  sol.collapsed = mdp.collapsed();
  sol.truncated_mass = mdp.collapsed() ? 0.0 : mdp.truncated_mass();
  sol.radix = mdp.radix();
  sol.machines = inst.machines;
  if (mdp.collapsed()) {
    sol.value = solve_cyclic(mdp, nullptr, sol.states, options.record_decisions ? &sol.decisions : nullptr);
  } else {
    AcyclicSolver solver(mdp, nullptr, options.record_decisions);
    sol.value = solver.solve(mdp.initial());
    sol.states = solver.states();
    sol.decisions = std::move(solver.decisions());
  }
  return sol;
}

double evaluate_policy_mdp(const FlowShopInstance& inst, const Policy& policy, Objective objective,
                           MdpOptions options) {
  FlowShopMdp mdp(inst, objective, options);
  const ActionSource source = policy_actions(mdp, policy);
  if (mdp.collapsed()) {
    std::size_t states = 0;
    return solve_cyclic(mdp, &source, states, nullptr);
  }
  AcyclicSolver solver(mdp, &source, false);
  return solver.solve(mdp.initial());
}

namespace {

double job_contribution(Objective objective, double weight, double start, double length) {
  switch (objective.kind) {
    case Objective::Kind::total_completion: return start + length;
    case Objective::Kind::total_weighted_completion: return weight * (start + length);
    case Objective::Kind::alpha_weighted_completion: return weight * (start + objective.alpha * length);
    case Objective::Kind::makespan: return 0.0;
  }
  return 0.0;
}

void require_deterministic(const ParallelInstance& inst) {
  if (const auto problems = validate(inst); !problems.empty()) {
    throw Error(ErrorCode::invalid_parameter, "invalid instance: " + problems.front());
  }
  if (!inst.all_deterministic()) throw Error(ErrorCode::type_error, "instance has stochastic jobs");
}

// Smith order: non-increasing w/p, ties by id.
std::vector<int> smith_order(const ParallelInstance& inst) {
  std::vector<int> order(inst.job_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& ja = inst.jobs[a];
    const auto& jb = inst.jobs[b];
    return ja.weight * jb.duration() > jb.weight * ja.duration();
  });
  return order;
}

struct BruteForce {
  const ParallelInstance& inst;
  Objective objective;
  std::vector<int> order;                    // jobs in Smith order
  std::vector<int> group_of;                 // machine -> arrival group
  std::vector<std::vector<int>> groups;      // machines sharing an arrival time
  std::vector<double> load;                  // next free time per machine
  std::vector<int> used_in_group;            // machines of each group opened so far
  std::vector<int> assign;                   // per job (original index)
  std::vector<int> best_assign;
  double best = std::numeric_limits<double>::infinity();

  void search(std::size_t pos, double cost) {
    if (cost >= best) return;
    if (pos == order.size()) {
      best = cost;
      best_assign = assign;
      return;
    }
    const int job = order[pos];
    const double p = inst.jobs[job].duration();
    const double w = inst.jobs[job].weight;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const int open = used_in_group[g];
      const int limit = std::min<int>(open + 1, static_cast<int>(groups[g].size()));
      for (int slot = 0; slot < limit; ++slot) {
        const int machine = groups[g][slot];
        const double start = load[machine];
        double next_cost;
        if (objective.kind == Objective::Kind::makespan) {
          next_cost = std::max(cost, start + p);
        } else {
          next_cost = cost + job_contribution(objective, w, start, p);
        }
        load[machine] = start + p;
        if (slot == open) ++used_in_group[g];
        assign[job] = machine;
        search(pos + 1, next_cost);
        if (slot == open) --used_in_group[g];
        load[machine] = start;
      }
    }
  }
};

}  // namespace

ParallelSolution brute_force_parallel_opt(const ParallelInstance& inst, Objective objective, std::size_t job_cap) {
  require_deterministic(inst);
  if (static_cast<std::size_t>(inst.job_count()) > job_cap) {
    throw Error(ErrorCode::too_large_for_enumeration,
                std::to_string(inst.job_count()) + " jobs exceed the brute-force cap of " + std::to_string(job_cap));
  }
  BruteForce bf{inst, objective, smith_order(inst), {}, {}, {}, {}, {}, {}};
  const int machines = inst.machine_count();
  bf.group_of.assign(machines, -1);
  for (int i = 0; i < machines; ++i) {
    bool found = false;
    for (std::size_t g = 0; g < bf.groups.size(); ++g) {
      if (inst.arrivals[bf.groups[g].front()] == inst.arrivals[i]) {
        bf.groups[g].push_back(i);
        bf.group_of[i] = static_cast<int>(g);
        found = true;
        break;
      }
    }
    if (!found) {
      bf.group_of[i] = static_cast<int>(bf.groups.size());
      bf.groups.push_back({i});
    }
  }
  bf.load = inst.arrivals;
  bf.used_in_group.assign(bf.groups.size(), 0);
  bf.assign.assign(inst.job_count(), -1);
  bf.search(0, 0.0);

  // Rebuild the trace from the best assignment.
  ParallelSolution sol;
  sol.value = bf.best;
  sol.trace.kind = TraceKind::parallel;
  sol.trace.machines = machines;
  sol.trace.jobs.resize(inst.job_count());
  std::vector<double> load = inst.arrivals;
  for (int job : bf.order) {
    const int machine = bf.best_assign[job];
    const double start = load[machine];
    const double finish = start + inst.jobs[job].duration();
    load[machine] = finish;
    auto& jt = sol.trace.jobs[job];
    jt.id = inst.jobs[job].id;
    jt.operations.push_back({1, start, machine + 1, finish});
    jt.completion = finish;
    sol.trace.horizon = std::max(sol.trace.horizon, finish);
  }
  sol.machine_of.resize(inst.job_count());
  for (int j = 0; j < inst.job_count(); ++j) sol.machine_of[j] = bf.best_assign[j] + 1;
  return sol;
}

double list_schedule_objective(const ParallelInstance& inst, std::span<const int> order, Objective objective) {
  using Slot = std::pair<double, int>;
  std::priority_queue<Slot, std::vector<Slot>, std::greater<>> machines;
  for (int i = 0; i < inst.machine_count(); ++i) machines.emplace(inst.arrivals[i], i);
  double total = 0.0;
  for (int id : order) {
    auto [avail, machine] = machines.top();
    machines.pop();
    const auto& job = inst.jobs[static_cast<std::size_t>(id - 1)];
    const double p = job.duration();
    if (objective.kind == Objective::Kind::makespan) {
      total = std::max(total, avail + p);
    } else {
      total += job_contribution(objective, job.weight, avail, p);
    }
    machines.emplace(avail + p, machine);
  }
  return total;
}

WsptResult wspt_value(const ParallelInstance& inst, TieMode mode, Objective objective, std::span<const int> order,
                      std::size_t order_cap) {
  require_deterministic(inst);
  const int n = inst.job_count();
  const auto base = smith_order(inst);
  auto same_ratio = [&](int a, int b) {
    return inst.jobs[a].weight * inst.jobs[b].duration() == inst.jobs[b].weight * inst.jobs[a].duration();
  };

  if (mode == TieMode::explicit_order) {
    if (static_cast<int>(order.size()) != n) throw Error(ErrorCode::invalid_parameter, "explicit order must list every job");
    for (std::size_t k = 1; k < order.size(); ++k) {
      const int a = order[k - 1] - 1;
      const int b = order[k] - 1;
      if (a < 0 || b < 0 || a >= n || b >= n) throw Error(ErrorCode::invalid_parameter, "order has an unknown job id");
      if (inst.jobs[a].weight * inst.jobs[b].duration() < inst.jobs[b].weight * inst.jobs[a].duration()) {
        throw Error(ErrorCode::invalid_parameter, "explicit order is not WSPT-consistent");
      }
    }
    WsptResult r;
    r.order.assign(order.begin(), order.end());
    r.value = list_schedule_objective(inst, r.order, objective);
    r.orders_examined = 1;
    return r;
  }

  // Tie classes as contiguous blocks of the Smith order. Within a block, jobs
  // with identical (w, p) are interchangeable, so only distinct multiset
  // permutations of their type labels are enumerated.
  struct Block {
    std::vector<int> types;                    // current permutation of type labels
    std::vector<std::vector<int>> members;     // type label -> job indices
  };
  std::vector<Block> blocks;
  long double count = 1.0L;
  for (std::size_t s = 0; s < base.size();) {
    std::size_t e = s + 1;
    while (e < base.size() && same_ratio(base[s], base[e])) ++e;
    Block b;
    std::vector<std::pair<double, double>> keys;
    for (std::size_t k = s; k < e; ++k) {
      const auto& job = inst.jobs[base[k]];
      const std::pair<double, double> key{job.weight, job.duration()};
      auto it = std::find(keys.begin(), keys.end(), key);
      int label;
      if (it == keys.end()) {
        label = static_cast<int>(keys.size());
        keys.push_back(key);
        b.members.emplace_back();
      } else {
        label = static_cast<int>(it - keys.begin());
      }
      b.members[label].push_back(base[k]);
      b.types.push_back(label);
    }
    std::sort(b.types.begin(), b.types.end());
    // multinomial coefficient of this block
    long double perms = std::tgamma(static_cast<long double>(b.types.size()) + 1.0L);
    for (const auto& mem : b.members) perms /= std::tgamma(static_cast<long double>(mem.size()) + 1.0L);
    count *= perms;
    blocks.push_back(std::move(b));
    s = e;
  }
  if (count > static_cast<long double>(order_cap) + 0.5L) {
    throw Error(ErrorCode::too_large_for_enumeration,
                "WSPT tie orders exceed the cap; supply an explicit order instead");
  }

  WsptResult result;
  result.value = mode == TieMode::best ? std::numeric_limits<double>::infinity()
                                       : -std::numeric_limits<double>::infinity();
  std::vector<int> current(n);
  std::vector<std::size_t> cursor;
  for (;;) {
    std::size_t pos = 0;
    for (const auto& b : blocks) {
      cursor.assign(b.members.size(), 0);
      for (int label : b.types) current[pos++] = b.members[label][cursor[label]++] + 1;
    }
    const double v = list_schedule_objective(inst, current, objective);
    ++result.orders_examined;
    if ((mode == TieMode::best && v < result.value) || (mode == TieMode::worst && v > result.value)) {
      result.value = v;
      result.order = current;
    }
    // odometer over blocks, last block fastest
    int b = static_cast<int>(blocks.size()) - 1;
    for (; b >= 0; --b) {
      if (std::next_permutation(blocks[b].types.begin(), blocks[b].types.end())) break;
      // next_permutation wrapped around to sorted order; carry into the previous block
    }
    if (b < 0) break;
  }
  return result;
}

}  // namespace reentry
