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
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "reentry/exact.hpp"
#include "reentry/model.hpp"
#include "reentry/policy.hpp"
#include "reentry/rng.hpp"

namespace reentry {

struct McReport {
  std::string policy;
  std::string objective;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;    // sample standard deviation
  double ci95 = 0.0;  // 1.96 * sd / sqrt(n)
  std::uint64_t seed = 0;

  /// Normal-approximation intervals are labeled approximate below 1000 samples.
  bool approximate() const { return n < 1000; }
};

/// Replication r draws its realization from Rng(derive_seed(seed, r)), so the
/// report does not depend on `threads`.
McReport mc_estimate(const FlowShopInstance& inst, const Policy& policy, Objective objective, std::size_t n,
                     std::uint64_t seed, unsigned threads = 1);

struct PairedReport {
  std::string policy_a;
  std::string policy_b;
  std::string objective;
  std::size_t n = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_diff = 0.0;  // a - b
  double sd_diff = 0.0;
  double ci95_diff = 0.0;
  double unpaired_ci95 = 0.0;  // half-width if a and b had used independent draws
  std::uint64_t seed = 0;
};

/// Both policies run on the same realization sequence.
PairedReport paired_compare(const FlowShopInstance& inst, const Policy& a, const Policy& b, Objective objective,
                            std::size_t n, std::uint64_t seed, unsigned threads = 1);

/// Pairwise (cascade) summation in a fixed order.
double pairwise_sum(std::span<const double> values);

using FlowShopGenerator = std::function<FlowShopInstance(Rng&)>;
using ParallelGenerator = std::function<ParallelInstance(Rng&)>;

struct RatioRecord {
  std::size_t index = 0;
  std::string method;  // "exact", "mdp" or "mc"
  double policy_value = 0.0;
  double optimum = 0.0;
  double ratio = 0.0;
  double bound = 0.0;  // instance-specific guarantee, 0 when none
  double delta = 0.0;  // max scv over jobs (flow shop)
  bool nbue = false;   // every job NBUE (flow shop)
  int jobs = 0;
  int machines = 0;
  std::string error;  // non-empty when the oracle failed; the scan continues
};

struct RatioScanReport {
  std::vector<RatioRecord> records;
  double max_ratio = 0.0;
  std::size_t argmax = 0;
  double max_excess = -1.0;  // max over records of ratio - bound
  std::size_t failures = 0;
};

struct RatioScanOptions {
  MdpOptions mdp{.state_cap = 2'000'000, .collapse_memoryless = false};
  EnumerationOptions enumeration{};
  std::size_t mc_samples = 100'000;
  unsigned threads = 1;  // instances are scanned concurrently; records keep index order
  // Instance-specific bound; default is 1 + (sqrt(2) - 1)(1 + delta) / 2.
  std::function<double(const FlowShopInstance&)> bound;
};

/// Instance i comes from generator(Rng(derive_seed(seed, i))). Policy values
/// are exact (enumeration, then MDP evaluation) where feasible, else Monte
/// Carlo; the optimum is optimal_expected.
RatioScanReport ratio_scan(const FlowShopGenerator& generator, const PriorityRule& rule, Objective objective,
                           std::size_t trials, std::uint64_t seed, const RatioScanOptions& options = {});

/// Worst tie order of WSPT against brute_force_parallel_opt on deterministic
/// parallel instances. `bound` is recorded on every record.
RatioScanReport wspt_ratio_scan(const ParallelGenerator& generator, Objective objective, std::size_t trials,
                                std::uint64_t seed, double bound, unsigned threads = 1);

double max_scv(const FlowShopInstance& inst);
bool all_nbue(const FlowShopInstance& inst);
double wlel_bound(double delta);

/// Shortest round-trip decimal form used in every CSV the library writes.
std::string format_real(double value);

void write_mc_csv(std::ostream& out, std::span<const McReport> reports, bool header = true);
void write_ratio_csv(std::ostream& out, std::span<const RatioRecord> records, bool header = true);

}  // namespace reentry
