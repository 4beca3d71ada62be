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
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "reentry/error.hpp"
#include "reentry/evaluation.hpp"
#include "reentry/experiments.hpp"

using namespace reentry;

namespace {

FlowShopInstance single(const LoopDistribution& d, int m = 1) {
  FlowShopInstance inst;
  inst.machines = m;
  inst.jobs.push_back({1, 1.0, d});
  return inst;
}

struct Broken final : Policy {
  std::optional<int> decide(const ObservationView&) const override { return 42; }
  std::string name() const override { return "broken"; }
};

}  // namespace

TEST_CASE("deterministic instance has zero spread") {
  FlowShopInstance inst;
  inst.machines = 2;
  inst.jobs.push_back({1, 2.0, LoopDistribution::deterministic(2)});
  inst.jobs.push_back({2, 1.0, LoopDistribution::deterministic(3)});
  const PriorityPolicy policy(PriorityRule::wlel(), inst);
  const auto obj = Objective::total_weighted_completion();
  const auto r = mc_estimate(inst, policy, obj, 50, 1);
  CHECK(r.sd == 0.0);
  CHECK(r.ci95 == 0.0);
  CHECK(r.mean == evaluate_policy_exact(inst, policy, obj));
  CHECK(r.approximate());
  const PriorityPolicy other(PriorityRule::mel(), inst);
  const auto p = paired_compare(inst, policy, other, obj, 50, 1);
  CHECK(p.ci95_diff == 0.0);
}

TEST_CASE("geometric mean from a million samples") {
  const auto d = LoopDistribution::geometric(0.5);
  const auto inst = single(d);
  const PriorityPolicy policy(PriorityRule::wlel(), inst);
  const auto r = mc_estimate(inst, policy, Objective::makespan(), 1'000'000, 2024);
  CHECK(std::abs(r.mean - d.mean()) < 0.01);
  CHECK_FALSE(r.approximate());
  CHECK(r.ci95 == doctest::Approx(1.96 * r.sd / 1000.0).epsilon(1e-12));
}

TEST_CASE("reports are reproducible and thread independent") {
  const auto inst = lvf_merl_instance(0.01);
  const PriorityPolicy policy(PriorityRule::merl(), inst);
  const auto a = mc_estimate(inst, policy, Objective::makespan(), 20'000, 9, 1);
  const auto b = mc_estimate(inst, policy, Objective::makespan(), 20'000, 9, 1);
  const auto c = mc_estimate(inst, policy, Objective::makespan(), 20'000, 9, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.sd == b.sd);
  CHECK(a.mean == c.mean);
  CHECK(a.sd == c.sd);
  const auto d = mc_estimate(inst, policy, Objective::makespan(), 20'000, 10, 1);
  CHECK(a.mean != d.mean);
}

TEST_CASE("paired comparison") {
  const auto inst = lvf_merl_instance(0.01);
  const PriorityPolicy lvf(PriorityRule::lvf(), inst);
  const PriorityPolicy merl(PriorityRule::merl(), inst);
  const auto same = paired_compare(inst, lvf, lvf, Objective::makespan(), 1000, 3);
  CHECK(same.mean_diff == 0.0);
  CHECK(same.sd_diff == 0.0);

  const auto p = paired_compare(inst, lvf, merl, Objective::makespan(), 100'000, 1);
  CHECK(p.mean_diff < 0.0);
  CHECK(p.mean_diff + p.ci95_diff < 0.0);
  CHECK(p.ci95_diff <= p.unpaired_ci95);
  CHECK(p.mean_a - p.mean_b == doctest::Approx(p.mean_diff).epsilon(1e-9));
  // thread count does not change the pairing
  const auto q = paired_compare(inst, lvf, merl, Objective::makespan(), 100'000, 1, 3);
  CHECK(q.mean_diff == p.mean_diff);
}

TEST_CASE("95% intervals cover the exact value") {
  FlowShopInstance inst;
  inst.machines = 2;
  inst.jobs.push_back({1, 1.0, LoopDistribution::geometric(0.4)});
  inst.jobs.push_back({2, 2.0, LoopDistribution::negative_binomial(2, 0.7)});
  const PriorityPolicy policy(PriorityRule::wlel(), inst);
  const auto obj = Objective::total_weighted_completion();
  const double exact = evaluate_policy_exact(inst, policy, obj);
  int covered = 0;
  constexpr int meta = 500;
  for (int t = 0; t < meta; ++t) {
    const auto r = mc_estimate(inst, policy, obj, 1000, derive_seed(77, t));
    if (std::abs(r.mean - exact) <= r.ci95) ++covered;
  }
  CHECK(covered >= 465);  // 93% of 500
}

TEST_CASE("errors carry the replication index") {
  const auto inst = single(LoopDistribution::geometric(0.5));
  try {
    (void)mc_estimate(inst, Broken{}, Objective::makespan(), 10, 1);
    FAIL("expected invalid_decision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_decision);
    CHECK(std::string(e.what()).find("replication 0") != std::string::npos);
  }
  const PriorityPolicy policy(PriorityRule::wlel(), inst);
  CHECK_THROWS_AS(mc_estimate(inst, policy, Objective::makespan(), 1, 1), Error);
  CHECK_THROWS_AS(mc_estimate(inst, policy, Objective::alpha_weighted(0.5), 10, 1), Error);
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  const std::vector<double> small{1.0, 2.0, 3.0};
  CHECK(pairwise_sum(small) == 6.0);
}

TEST_CASE("ratio scan over single-job families") {
  const FlowShopGenerator gen = [](Rng& rng) {
    return single(LoopDistribution::geometric(0.3 + 0.6 * rng.uniform(), 1e-6), rng.uniform_int(1, 3));
  };
  const auto report = ratio_scan(gen, PriorityRule::wlel(), Objective::total_weighted_completion(), 20, 5);
  CHECK(report.failures == 0);
  for (const auto& rec : report.records) {
    CHECK(rec.method == "exact");
    CHECK(rec.ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rec.nbue);
    CHECK(rec.bound == doctest::Approx(wlel_bound(rec.delta)).epsilon(1e-15));
  }
}

TEST_CASE("ratio scan falls back and records oracle failures") {
  const FlowShopGenerator big = [](Rng&) {
    FlowShopInstance inst;
    inst.machines = 1;
    for (int id = 1; id <= 2; ++id) inst.jobs.push_back({id, 1.0, LoopDistribution::geometric(0.1, 1e-9)});
    return inst;
  };
  RatioScanOptions opts;
  opts.enumeration.cap = 100;
  const auto mdp = ratio_scan(big, PriorityRule::wlel(), Objective::total_weighted_completion(), 1, 1, opts);
  CHECK(mdp.records[0].method == "mdp");
  CHECK(mdp.records[0].ratio == doctest::Approx(1.0).epsilon(1e-9));

  opts.mdp.state_cap = 10;
  const auto failed = ratio_scan(big, PriorityRule::wlel(), Objective::total_weighted_completion(), 1, 1, opts);
  CHECK(failed.failures == 1);
  CHECK_FALSE(failed.records[0].error.empty());
}

TEST_CASE("WSPT scan is thread independent") {
  const auto a = wspt_ratio_scan(random_binary_arrival_instance, Objective::total_weighted_completion(), 30, 3,
                                 (1.0 + std::sqrt(2.0)) / 2.0, 1);
  const auto b = wspt_ratio_scan(random_binary_arrival_instance, Objective::total_weighted_completion(), 30, 3,
                                 (1.0 + std::sqrt(2.0)) / 2.0, 4);
  std::ostringstream sa, sb;
  write_ratio_csv(sa, a.records);
  write_ratio_csv(sb, b.records);
  CHECK(sa.str() == sb.str());
  CHECK(a.failures == 0);
  CHECK(a.max_ratio >= 1.0);
  CHECK(a.max_ratio <= (1.0 + std::sqrt(2.0)) / 2.0 + 1e-9);
}

TEST_CASE("csv formatting") {
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(35.5) == "35.5");
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(std::nan("")) == "nan");
  McReport r;
  r.policy = "wlel";
  r.objective = "sumwc";
  r.n = 10;
  r.mean = 2.5;
  r.sd = 0.25;
  r.ci95 = 0.1;
  r.seed = 7;
  std::ostringstream out;
  write_mc_csv(out, std::span<const McReport>(&r, 1));
  CHECK(out.str() == "policy,objective,n,mean,sd,ci95,seed\nwlel,sumwc,10,2.5,0.25,0.1,7\n");
}
