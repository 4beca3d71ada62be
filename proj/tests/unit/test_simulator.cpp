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

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "reentry/error.hpp"
#include "reentry/exact.hpp"
#include "reentry/experiments.hpp"
#include "reentry/reduction.hpp"
#include "reentry/simulator.hpp"

using namespace reentry;

namespace {

struct Idle final : Policy {
  std::optional<int> decide(const ObservationView&) const override { return std::nullopt; }
  std::string name() const override { return "idle"; }
};

struct Bogus final : Policy {
  std::optional<int> decide(const ObservationView&) const override { return 99; }
  std::string name() const override { return "bogus"; }
};

Realization manual(std::vector<int> loops) { return {std::move(loops), std::nullopt}; }

ParallelInstance parallel(std::vector<double> arrivals, std::vector<double> p) {
  ParallelInstance inst;
  inst.arrivals = std::move(arrivals);
  for (std::size_t j = 0; j < p.size(); ++j) inst.jobs.push_back({static_cast<int>(j + 1), 1.0, p[j]});
  return inst;
}

}  // namespace

TEST_CASE("single job passes through the pipeline") {
  FlowShopInstance inst;
  inst.machines = 2;
  inst.jobs.push_back({1, 1.0, LoopDistribution::geometric(0.5)});
  const PriorityPolicy policy(PriorityRule::wlel(), inst);
  const auto trace = simulate_flow_shop(inst, policy, manual({1}));
  CHECK(trace.jobs[0].completion == 2.0);
  CHECK(trace.makespan() == 2.0);
  const auto three = simulate_flow_shop(inst, policy, manual({3}));
  CHECK(three.makespan() == 6.0);
  CHECK(three.jobs[0].operations.size() == 3);
}

TEST_CASE("LVF vs MERL makespans on the reference instance") {
  const auto inst = lvf_merl_instance(0.01);
  const PriorityPolicy lvf(PriorityRule::lvf(), inst);
  const PriorityPolicy merl(PriorityRule::merl(), inst);
  const int lvf_expected[] = {6, 7, 8, 9};
  const int merl_expected[] = {6, 7, 8, 10};
  for (int y3 = 1; y3 <= 4; ++y3) {
    const auto y = manual({2, 2, y3});
    CHECK(simulate_flow_shop(inst, lvf, y).makespan() == lvf_expected[y3 - 1]);
    CHECK(simulate_flow_shop(inst, merl, y).makespan() == merl_expected[y3 - 1]);
  }
}

TEST_CASE("flow-shop traces are feasible and reproducible") {
  FlowShopInstance inst;
  inst.machines = 3;
  inst.jobs.push_back({1, 1.0, LoopDistribution::geometric(0.4)});
  inst.jobs.push_back({2, 2.0, LoopDistribution::negative_binomial(2, 0.6)});
  inst.jobs.push_back({3, 1.0, LoopDistribution::consecutive_success(2, 0.7)});
  inst.jobs.push_back({4, 3.0, LoopDistribution::deterministic(2)});
  Rng rng(3);
  for (const auto& rule : {PriorityRule::wlel(), PriorityRule::merl(), PriorityRule::lvf()}) {
    const PriorityPolicy policy(rule, inst);
    for (int trial = 0; trial < 200; ++trial) {
      const auto y = sample_realization(inst, rng);
      const auto trace = simulate_flow_shop(inst, policy, y);
      CHECK(check_feasibility(trace).empty());
      for (std::size_t j = 0; j < trace.jobs.size(); ++j) {
        const auto& ops = trace.jobs[j].operations;
        REQUIRE(static_cast<int>(ops.size()) == y.loops[j]);
        for (const auto& op : ops) CHECK(op.finish == op.start + inst.machines);
      }
      const auto again = simulate_flow_shop(inst, policy, y);
      CHECK(again.completions() == trace.completions());
      std::vector<double> fast(inst.jobs.size());
      simulate_flow_shop_completions(inst, policy, y.loops, fast);
      CHECK(fast == trace.completions());
    }
  }
}

TEST_CASE("static rules restart a reentering job at once") {
  FlowShopInstance inst;
  inst.machines = 2;
  inst.jobs.push_back({1, 1.0, LoopDistribution::deterministic(3)});
  inst.jobs.push_back({2, 1.0, LoopDistribution::deterministic(2)});
  inst.jobs.push_back({3, 1.0, LoopDistribution::deterministic(1)});
  const PriorityPolicy policy(PriorityRule::mel(), inst);
  const auto trace = simulate_flow_shop(inst, policy, manual({3, 2, 1}));
  for (const auto& j : trace.jobs) {
    for (std::size_t l = 1; l < j.operations.size(); ++l) {
      CHECK(j.operations[l].start == j.operations[l - 1].finish);
    }
  }
}

TEST_CASE("flow-shop engine errors") {
  FlowShopInstance inst;
  inst.machines = 2;
  inst.jobs.push_back({1, 1.0, LoopDistribution::deterministic(2)});
  try {
    (void)simulate_flow_shop(inst, Idle{}, manual({2}));
    FAIL("expected runaway_simulation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::runaway_simulation);
  }
  try {
    (void)simulate_flow_shop(inst, Bogus{}, manual({2}));
    FAIL("expected invalid_decision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_decision);
  }
  const PriorityPolicy policy(PriorityRule::wlel(), inst);
  CHECK_THROWS_AS(simulate_flow_shop(inst, policy, manual({3})), Error);
  CHECK_THROWS_AS(simulate_flow_shop(inst, policy, manual({2, 2})), Error);
  EngineConfig cfg;
  cfg.horizon_cap = 1;
  CHECK_THROWS_AS(simulate_flow_shop(inst, policy, manual({2}), cfg), Error);
}

TEST_CASE("parallel machines with arrivals") {
  const auto one = parallel({0.0}, {3.0});
  for (auto rule : {ParallelRule::sept, ParallelRule::lept, ParallelRule::wsept, ParallelRule::preemptive_sept}) {
    CHECK(simulate_parallel_arrivals(one, rule, manual({})).makespan() == 3.0);
  }
  const auto two = parallel({0.0}, {1.0, 2.0});
  const auto sept = simulate_parallel_arrivals(two, ParallelRule::sept, manual({}));
  CHECK(objective_value(sept, two, Objective::total_completion()) == 4.0);
  const auto lept = simulate_parallel_arrivals(two, ParallelRule::lept, manual({}));
  CHECK(objective_value(lept, two, Objective::total_completion()) == 5.0);

  const auto late = parallel({2.0, 0.0}, {2.0, 2.0});
  const auto t = simulate_parallel_arrivals(late, ParallelRule::sept, manual({}));
  const std::vector<double> arrivals{2.0, 0.0};
  CHECK(check_feasibility(t, arrivals).empty());
  CHECK(t.completions() == std::vector<double>{2.0, 4.0});

  CHECK_THROWS_AS(simulate_parallel_arrivals(parallel({0.5}, {1.0}), ParallelRule::sept, manual({})), Error);
  CHECK_THROWS_AS(simulate_parallel_arrivals(parallel({0.0}, {1.5}), ParallelRule::sept, manual({})), Error);
}

TEST_CASE("auxiliary instance of a single-job shop") {
  FlowShopInstance inst;
  inst.machines = 2;
  inst.jobs.push_back({1, 1.0, LoopDistribution::geometric(0.5)});
  const auto aux = build_auxiliary(inst, 2);
  const auto trace = simulate_parallel_arrivals(aux, ParallelRule::wsept, manual({1}));
  CHECK(trace.jobs[0].completion == 1.0);
  CHECK(trace.jobs[0].operations[0].machine == 1);
}

TEST_CASE("preemptive rules re-rank every unit") {
  // two stochastic jobs on one machine; preemptive LEPT keeps switching to the
  // job with the larger expected remaining time
  ParallelInstance inst;
  inst.arrivals = {0.0};
  inst.jobs.push_back({1, 1.0, LoopDistribution::deterministic(3)});
  inst.jobs.push_back({2, 1.0, LoopDistribution::deterministic(2)});
  const auto t = simulate_parallel_arrivals(inst, ParallelRule::preemptive_lept, manual({3, 2}));
  CHECK(check_feasibility(t).empty());
  CHECK(t.makespan() == 5.0);
  CHECK(t.jobs[0].operations.size() > 1);
}

TEST_CASE("deterministic list schedule") {
  const double phi = std::numbers::phi;
  const auto golden = golden_ratio_instance(1);
  // job 1 is the large job
  const std::vector<int> small_first{2, 1};
  const std::vector<int> large_first{1, 2};
  const auto wc = Objective::total_weighted_completion();
  CHECK(objective_value(deterministic_list_schedule(golden, small_first), golden, wc) ==
        doctest::Approx(phi * (1 + phi) + 1.0).epsilon(1e-12));
  CHECK(objective_value(deterministic_list_schedule(golden, large_first), golden, wc) ==
        doctest::Approx(phi * phi + 2.0).epsilon(1e-12));
  CHECK(list_schedule_objective(golden, small_first, wc) ==
        objective_value(deterministic_list_schedule(golden, small_first), golden, wc));

  const auto wait = parallel({5.0}, {2.0});
  const std::vector<int> only{1};
  CHECK(deterministic_list_schedule(wait, only).jobs[0].completion == 7.0);

  ParallelInstance sto;
  sto.arrivals = {0.0};
  sto.jobs.push_back({1, 1.0, LoopDistribution::geometric(0.5)});
  CHECK_THROWS_AS(deterministic_list_schedule(sto, only), Error);
  const std::vector<int> bad{1, 1};
  CHECK_THROWS_AS(deterministic_list_schedule(parallel({0.0}, {1.0, 1.0}), bad), Error);
}
