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

#include <benchmark/benchmark.h>

#include <vector>

#include "reentry/evaluation.hpp"
#include "reentry/exact.hpp"
#include "reentry/experiments.hpp"
#include "reentry/simulator.hpp"

using namespace reentry;

namespace {

FlowShopInstance mixed_shop(int jobs, int machines) {
  FlowShopInstance inst;
  inst.machines = machines;
  for (int id = 1; id <= jobs; ++id) {
    const double q = 0.4 + 0.1 * (id % 5);
    LoopDistribution d = id % 3 == 0   ? LoopDistribution::geometric(q, 1e-6)
                         : id % 3 == 1 ? LoopDistribution::negative_binomial(2, q, 1e-6)
                                       : LoopDistribution::consecutive_success(2, q, 1e-6);
    inst.jobs.push_back({id, static_cast<double>(1 + id % 4), std::move(d)});
  }
  return inst;
}

void BM_SimulateFlowShop(benchmark::State& state) {
  const auto inst = mixed_shop(static_cast<int>(state.range(0)), 3);
  const PriorityPolicy policy(PriorityRule::wlel(), inst);
  Rng rng(1);
  std::vector<Realization> ys;
  for (int i = 0; i < 256; ++i) ys.push_back(sample_realization(inst, rng));
  std::vector<double> completions(inst.jobs.size());
  std::size_t i = 0;
  for (auto _ : state) {
    simulate_flow_shop_completions(inst, policy, ys[i++ % ys.size()].loops, completions);
    benchmark::DoNotOptimize(completions.data());
  }
}
BENCHMARK(BM_SimulateFlowShop)->Arg(4)->Arg(16)->Arg(64);

void BM_EnumerateExact(benchmark::State& state) {
  const auto inst = mixed_shop(3, 2);
  const PriorityPolicy policy(PriorityRule::wlel(), inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_policy_exact(inst, policy, Objective::total_weighted_completion()));
  }
  state.counters["realizations"] = static_cast<double>(realization_count(inst));
}
BENCHMARK(BM_EnumerateExact)->Unit(benchmark::kMillisecond);

void BM_OptimalMdp(benchmark::State& state) {
  FlowShopInstance inst;
  inst.machines = static_cast<int>(state.range(0));
  for (int id = 1; id <= 3; ++id) inst.jobs.push_back({id, 1.0, LoopDistribution::geometric(0.2 + 0.2 * id)});
  MdpOptions opt;
  opt.collapse_memoryless = false;
  opt.record_decisions = false;
  std::size_t states = 0;
  for (auto _ : state) {
    const auto sol = optimal_expected(inst, Objective::total_completion(), opt);
    states = sol.states;
    benchmark::DoNotOptimize(sol.value);
  }
  state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_OptimalMdp)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto inst = lvf_merl_instance(0.01);
  const PriorityPolicy policy(PriorityRule::merl(), inst);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_estimate(inst, policy, Objective::makespan(), n, 7).mean);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_MonteCarlo)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_BruteForceParallel(benchmark::State& state) {
  Rng rng(3);
  std::vector<ParallelInstance> insts;
  for (int i = 0; i < 64; ++i) insts.push_back(random_binary_arrival_instance(rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        brute_force_parallel_opt(insts[i++ % insts.size()], Objective::total_weighted_completion()).value);
  }
}
BENCHMARK(BM_BruteForceParallel);

}  // namespace
BENCHMARK_MAIN();
