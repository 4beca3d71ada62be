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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "reentry/distribution.hpp"

namespace reentry {

struct FlowShopJob {
  int id = 0;  // dense 1..n
  double weight = 1.0;
  LoopDistribution dist = LoopDistribution::deterministic(1);

  bool operator==(const FlowShopJob&) const = default;
};

/// Reentrant flow shop with unit operation times: every loop of a job visits
/// machines 1..m in consecutive unit slots.
struct FlowShopInstance {
  int machines = 1;
  std::vector<FlowShopJob> jobs;

  int job_count() const { return static_cast<int>(jobs.size()); }
  std::vector<double> weights() const;
  const FlowShopJob& job(int id) const { return jobs.at(static_cast<std::size_t>(id - 1)); }

  bool operator==(const FlowShopInstance&) const = default;
};

/// Processing requirement of a parallel-machine job: either stochastic with
/// integer support, or a fixed real duration.
using Processing = std::variant<LoopDistribution, double>;

struct ParallelJob {
  int id = 0;
  double weight = 1.0;
  Processing processing = 1.0;

  bool is_deterministic() const { return std::holds_alternative<double>(processing); }
  double duration() const;  // deterministic jobs only
  double expected_duration() const;

  bool operator==(const ParallelJob&) const = default;
};

/// Identical parallel machines, machine i usable from `arrivals[i]` on.
struct ParallelInstance {
  std::vector<double> arrivals;
  std::vector<ParallelJob> jobs;

  int machine_count() const { return static_cast<int>(arrivals.size()); }
  int job_count() const { return static_cast<int>(jobs.size()); }
  bool all_deterministic() const;
  std::vector<double> weights() const;

  bool operator==(const ParallelInstance&) const = default;
};

/// A sampled loop-count vector, one entry per job in id order.
struct Realization {
  std::vector<int> loops;
  std::optional<std::uint64_t> seed;  // nullopt for manually specified vectors
};

Realization sample_realization(const FlowShopInstance& inst, Rng& rng);

struct OperationRecord {
  int loop = 0;  // 1-based
  double start = 0.0;
  int machine = 1;  // 1-based; the entry machine for flow-shop loops
  double finish = 0.0;
};

enum class TraceKind { flow_shop, parallel };

struct JobTrace {
  int id = 0;
  std::vector<OperationRecord> operations;
  double completion = 0.0;
};

/// Flow-shop traces hold one record per loop (start on machine 1, finish on
/// machine m). Parallel traces hold one record per maximal contiguous run of
/// a job on one machine.
struct ScheduleTrace {
  TraceKind kind = TraceKind::flow_shop;
  int machines = 1;
  std::vector<JobTrace> jobs;
  double horizon = 0.0;

  double makespan() const;
  std::vector<double> completions() const;
};

struct Objective {
  enum class Kind { makespan, total_completion, total_weighted_completion, alpha_weighted_completion };
  Kind kind = Kind::total_weighted_completion;
  double alpha = 1.0;

  static Objective makespan() { return {Kind::makespan, 1.0}; }
  static Objective total_completion() { return {Kind::total_completion, 1.0}; }
  static Objective total_weighted_completion() { return {Kind::total_weighted_completion, 1.0}; }
  static Objective alpha_weighted(double alpha);

  /// "cmax", "sumc", "sumwc", "sumwc-alpha:<a>".
  static Objective parse(const std::string& text);
  std::string name() const;
};

/// Objective of a complete trace. alpha-objectives use C_j(alpha) = S_j +
/// alpha p_j and need a single contiguous record per job; they are rejected
/// on flow-shop traces with unsupported_objective.
double objective_value(const ScheduleTrace& trace, std::span<const double> weights, Objective objective);
double objective_value(const ScheduleTrace& trace, const FlowShopInstance& inst, Objective objective);
double objective_value(const ScheduleTrace& trace, const ParallelInstance& inst, Objective objective);

/// Every invariant violation, empty when the instance is well formed.
std::vector<std::string> validate(const FlowShopInstance& inst);
std::vector<std::string> validate(const ParallelInstance& inst);
std::vector<std::string> validate(const Realization& y, const FlowShopInstance& inst);

/// Feasibility violations of a trace: overlapping operations of one job,
/// two operations on one machine in one slot, use before arrival.
std::vector<std::string> check_feasibility(const ScheduleTrace& trace,
                                           std::span<const double> arrivals = {});

}  // namespace reentry
