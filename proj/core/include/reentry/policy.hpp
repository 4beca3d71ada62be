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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reentry/model.hpp"

namespace reentry {

struct WaitingJob {
  int id = 0;
  int loops_completed = 0;
};

struct ActiveJob {
  int id = 0;
  int loops_completed = 0;  // loops finished before the one in progress
  int start = 0;            // time the current loop entered machine 1
};

/// Everything a non-anticipatory policy may look at when machine 1 is free.
/// Realized loop counts of unfinished jobs are never part of the view.
struct ObservationView {
  int now = 0;
  std::span<const WaitingJob> uncompleted;  // uncompleted and not active
  std::span<const ActiveJob> active;
  const FlowShopInstance* instance = nullptr;
};

/// A flow-shop scheduling policy. `decide` must be a pure function of the
/// view; nullopt means leave machine 1 idle for this unit.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::optional<int> decide(const ObservationView& view) const = 0;
  virtual std::string name() const = 0;
};

enum class RuleKind { mel, lel, wlel, merl, lerl, lvf, custom };

struct PriorityRule {
  RuleKind kind = RuleKind::wlel;
  std::vector<double> custom_values;  // per job id - 1, CUSTOM only
  std::vector<int> tie_break;         // permutation of job ids; empty = ascending id

  static PriorityRule mel() { return {RuleKind::mel, {}, {}}; }
  static PriorityRule lel() { return {RuleKind::lel, {}, {}}; }
  static PriorityRule wlel() { return {RuleKind::wlel, {}, {}}; }
  static PriorityRule merl() { return {RuleKind::merl, {}, {}}; }
  static PriorityRule lerl() { return {RuleKind::lerl, {}, {}}; }
  static PriorityRule lvf() { return {RuleKind::lvf, {}, {}}; }
  static PriorityRule custom(std::vector<double> values, std::vector<int> tie_break = {});

  /// "mel", "lel", "wlel", "merl", "lerl", "lvf", or "custom:<file>" where the
  /// file holds {"values": [...], "tie_break": [...]}.
  static PriorityRule parse(const std::string& text);
  bool is_dynamic() const { return kind == RuleKind::merl || kind == RuleKind::lerl; }
  std::string name() const;
};

std::string to_string(RuleKind kind);

/// Larger value = scheduled first. Static rules ignore `loops_completed`.
/// Throws undefined_priority when a dynamic rule conditions on a zero-mass event.
double priority_value(const PriorityRule& rule, int job_id, int loops_completed,
                      const FlowShopInstance& inst);

/// Priority rule bound to an instance; priorities are tabulated once.
/// LVF breaks variance ties by the larger expected remaining loop count
/// E[Y - k | Y > k]; every rule then falls back to `tie_break`.
class PriorityPolicy final : public Policy {
 public:
  PriorityPolicy(PriorityRule rule, const FlowShopInstance& inst);

  std::optional<int> decide(const ObservationView& view) const override;
  std::string name() const override { return rule_.name(); }
  double priority(int job_id, int loops_completed) const;
  /// Second sort key; 0 for every rule except LVF.
  double secondary(int job_id, int loops_completed) const;
  const PriorityRule& rule() const { return rule_; }

 private:
  PriorityRule rule_;
  std::vector<std::vector<double>> table_;      // [job][loops] (one entry for static rules)
  std::vector<std::vector<double>> secondary_;  // [job][loops], LVF only
  std::vector<int> tie_rank_;               // [job], lower wins ties
};

/// Convenience wrapper that binds `rule` to `view.instance` on each call.
std::optional<int> decide(const PriorityRule& rule, const ObservationView& view);

enum class ParallelRule { lept, sept, wsept, preemptive_lept, preemptive_sept };

std::string to_string(ParallelRule rule);
bool is_preemptive(ParallelRule rule);

/// Parallel-machine rule a flow-shop priority rule induces through the
/// reduction. LVF and CUSTOM have no canonical counterpart.
ParallelRule induced_parallel_rule(RuleKind kind);

}  // namespace reentry
