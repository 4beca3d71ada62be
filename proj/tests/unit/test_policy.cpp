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

#include <vector>

#include "doctest.h"
#include "reentry/error.hpp"
#include "reentry/experiments.hpp"
#include "reentry/policy.hpp"
#include "reentry/simulator.hpp"

using namespace reentry;

namespace {

FlowShopInstance geometric_shop(std::vector<double> qs, std::vector<double> weights = {}) {
  FlowShopInstance inst;
  inst.machines = 2;
  for (std::size_t j = 0; j < qs.size(); ++j) {
    inst.jobs.push_back({static_cast<int>(j + 1), weights.empty() ? 1.0 : weights[j], LoopDistribution::geometric(qs[j])});
  }
  return inst;
}

ObservationView view_of(const FlowShopInstance& inst, const std::vector<WaitingJob>& waiting) {
  ObservationView v;
  v.uncompleted = waiting;
  v.instance = &inst;
  return v;
}

}  // namespace

TEST_CASE("priority values") {
  const auto inst = geometric_shop({0.5}, {3.0});
  CHECK(priority_value(PriorityRule::wlel(), 1, 0, inst) == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(priority_value(PriorityRule::mel(), 1, 0, inst) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(priority_value(PriorityRule::lel(), 1, 0, inst) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(priority_value(PriorityRule::lvf(), 1, 0, inst) == doctest::Approx(2.0).epsilon(1e-6));
  for (int k = 0; k < 10; ++k) {
    CHECK(priority_value(PriorityRule::merl(), 1, k, inst) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(priority_value(PriorityRule::lerl(), 1, k, inst) == doctest::Approx(0.5).epsilon(1e-6));
  }
  // static rules ignore loops_completed
  CHECK(priority_value(PriorityRule::wlel(), 1, 7, inst) == priority_value(PriorityRule::wlel(), 1, 0, inst));

  FlowShopInstance det;
  det.jobs.push_back({1, 1.0, LoopDistribution::deterministic(5)});
  CHECK(priority_value(PriorityRule::merl(), 1, 3, det) == 2.0);
  CHECK(priority_value(PriorityRule::lerl(), 1, 3, det) == 0.5);
  try {
    (void)priority_value(PriorityRule::merl(), 1, 5, det);
    FAIL("expected undefined_priority");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::undefined_priority);
  }
  CHECK_THROWS_AS(priority_value(PriorityRule::mel(), 2, 0, det), Error);
  CHECK(priority_value(PriorityRule::custom({4.5}), 1, 0, det) == 4.5);
}

TEST_CASE("decide picks the top priority job") {
  FlowShopInstance inst;
  inst.machines = 1;
  inst.jobs.push_back({1, 1.0, LoopDistribution::deterministic(5)});
  inst.jobs.push_back({2, 1.0, LoopDistribution::deterministic(2)});
  const std::vector<WaitingJob> both{{1, 0}, {2, 0}};
  CHECK(decide(PriorityRule::lel(), view_of(inst, both)) == 2);
  CHECK(decide(PriorityRule::mel(), view_of(inst, both)) == 1);
  const std::vector<WaitingJob> none;
  CHECK_FALSE(decide(PriorityRule::lel(), view_of(inst, none)).has_value());
}

TEST_CASE("ties follow the tie-break order") {
  const auto inst = geometric_shop({0.5, 0.5, 0.5});
  const std::vector<WaitingJob> all{{3, 0}, {2, 0}, {1, 0}};
  CHECK(decide(PriorityRule::wlel(), view_of(inst, all)) == 1);
  auto rule = PriorityRule::wlel();
  rule.tie_break = {3, 1, 2};
  CHECK(decide(rule, view_of(inst, all)) == 3);
  rule.tie_break = {1, 1, 2};
  CHECK_THROWS_AS(PriorityPolicy(rule, inst), Error);
  CHECK_THROWS_AS(PriorityPolicy(PriorityRule::custom({1.0}), inst), Error);
}

TEST_CASE("MERL picks a deterministic job first on the LVF example") {
  const auto inst = lvf_merl_instance(0.01);
  const std::vector<WaitingJob> all{{1, 0}, {2, 0}, {3, 0}};
  const auto view = view_of(inst, all);
  CHECK(priority_value(PriorityRule::merl(), 3, 0, inst) < 2.0);
  CHECK(decide(PriorityRule::merl(), view) == 1);
  // LVF prefers the geometric job: it is the only one with variance
  CHECK(decide(PriorityRule::lvf(), view) == 3);
}

TEST_CASE("LVF breaks variance ties by expected remaining loops") {
  FlowShopInstance inst;
  inst.machines = 2;
  inst.jobs.push_back({1, 1.0, LoopDistribution::deterministic(1)});
  inst.jobs.push_back({2, 1.0, LoopDistribution::deterministic(3)});
  const PriorityPolicy lvf(PriorityRule::lvf(), inst);
  CHECK(lvf.priority(1, 0) == lvf.priority(2, 0));
  CHECK(lvf.secondary(2, 0) == 3.0);
  const std::vector<WaitingJob> both{{1, 0}, {2, 0}};
  CHECK(lvf.decide(view_of(inst, both)) == 2);
  const PriorityPolicy wlel(PriorityRule::wlel(), inst);
  CHECK(wlel.secondary(1, 0) == 0.0);
}

TEST_CASE("MERL equals MEL and LERL equals LEL on geometric views") {
  const auto inst = geometric_shop({0.3, 0.5, 0.8, 0.65});
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<WaitingJob> waiting;
    for (int id = 1; id <= inst.job_count(); ++id) {
      if (rng.uniform() < 0.6) waiting.push_back({id, rng.uniform_int(0, 8)});
    }
    const auto view = view_of(inst, waiting);
    CHECK(decide(PriorityRule::merl(), view) == decide(PriorityRule::mel(), view));
    CHECK(decide(PriorityRule::lerl(), view) == decide(PriorityRule::lel(), view));
  }
}

TEST_CASE("decisions do not depend on unrevealed loop counts") {
  // Two realizations that differ only in job 3's count must produce the same
  // schedule until job 3's count is revealed.
  FlowShopInstance inst;
  inst.machines = 3;
  inst.jobs.push_back({1, 1.0, LoopDistribution::geometric(0.4)});
  inst.jobs.push_back({2, 2.0, LoopDistribution::negative_binomial(2, 0.6)});
  inst.jobs.push_back({3, 1.0, LoopDistribution::consecutive_success(2, 0.7)});
  for (const auto& rule : {PriorityRule::wlel(), PriorityRule::merl(), PriorityRule::lvf(), PriorityRule::lerl()}) {
    const PriorityPolicy policy(rule, inst);
    const auto a = simulate_flow_shop(inst, policy, Realization{{2, 3, 2}, std::nullopt});
    const auto b = simulate_flow_shop(inst, policy, Realization{{2, 3, 5}, std::nullopt});
    const double revealed = a.jobs[2].completion;
    for (int j = 0; j < 3; ++j) {
      for (std::size_t l = 0; l < std::min(a.jobs[j].operations.size(), b.jobs[j].operations.size()); ++l) {
        if (a.jobs[j].operations[l].start < revealed && b.jobs[j].operations[l].start < revealed) {
          CHECK(a.jobs[j].operations[l].start == b.jobs[j].operations[l].start);
        }
      }
    }
  }
}

TEST_CASE("induced parallel rules") {
  CHECK(induced_parallel_rule(RuleKind::wlel) == ParallelRule::wsept);
  CHECK(induced_parallel_rule(RuleKind::mel) == ParallelRule::lept);
  CHECK(induced_parallel_rule(RuleKind::lel) == ParallelRule::sept);
  CHECK(induced_parallel_rule(RuleKind::merl) == ParallelRule::preemptive_lept);
  CHECK(induced_parallel_rule(RuleKind::lerl) == ParallelRule::preemptive_sept);
  for (auto kind : {RuleKind::lvf, RuleKind::custom}) {
    try {
      (void)induced_parallel_rule(kind);
      FAIL("expected no_canonical_induction");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::no_canonical_induction);
    }
  }
}

TEST_CASE("rule parsing") {
  for (const char* name : {"mel", "lel", "wlel", "merl", "lerl", "lvf"}) CHECK(PriorityRule::parse(name).name() == name);
  CHECK_THROWS_AS(PriorityRule::parse("fifo"), Error);
  CHECK_THROWS_AS(PriorityRule::parse("custom:/nonexistent.json"), Error);
}
