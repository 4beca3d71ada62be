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

#include "reentry/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "reentry/error.hpp"

namespace reentry {

PriorityRule PriorityRule::custom(std::vector<double> values, std::vector<int> tie_break) {
  return {RuleKind::custom, std::move(values), std::move(tie_break)};
}

PriorityRule PriorityRule::parse(const std::string& text) {
  if (text == "mel") return mel();
  if (text == "lel") return lel();
  if (text == "wlel") return wlel();
  if (text == "merl") return merl();
  if (text == "lerl") return lerl();
  if (text == "lvf") return lvf();
  const std::string prefix = "custom:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string path = text.substr(prefix.size());
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::parse_error, "cannot open custom priority file " + path);
    nlohmann::json doc;
    try {
      in >> doc;
      auto values = doc.at("values").get<std::vector<double>>();
      std::vector<int> ties;
      if (doc.contains("tie_break")) ties = doc["tie_break"].get<std::vector<int>>();
      return custom(std::move(values), std::move(ties));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::parse_error, path + ": " + e.what());
    }
  }
  throw Error(ErrorCode::invalid_parameter, "unknown policy '" + text + "'");
}

std::string to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::mel: return "mel";
    case RuleKind::lel: return "lel";
    case RuleKind::wlel: return "wlel";
    case RuleKind::merl: return "merl";
    case RuleKind::lerl: return "lerl";
    case RuleKind::lvf: return "lvf";
    case RuleKind::custom: return "custom";
  }
  return "?";
}

std::string PriorityRule::name() const { return to_string(kind); }

double priority_value(const PriorityRule& rule, int job_id, int loops_completed,
                      const FlowShopInstance& inst) {
  if (job_id < 1 || job_id > inst.job_count()) {
    throw Error(ErrorCode::out_of_range, "job id " + std::to_string(job_id));
  }
  const auto& job = inst.job(job_id);
  const auto& d = job.dist;
  switch (rule.kind) {
    case RuleKind::mel: return d.mean();
    case RuleKind::lel: return 1.0 / d.mean();
    case RuleKind::wlel: return job.weight / d.mean();
    case RuleKind::lvf: return d.variance();
    case RuleKind::merl:
    case RuleKind::lerl: {
      if (loops_completed < 0 || d.survival(loops_completed) <= 0.0) {
        throw Error(ErrorCode::undefined_priority,
                    "job " + std::to_string(job_id) + " cannot have completed " +
                        std::to_string(loops_completed) + " loops and still be unfinished");
      }
      const double r = d.cond_remaining_mean(loops_completed);
      return rule.kind == RuleKind::merl ? r : 1.0 / r;
    }
    case RuleKind::custom: {
      const auto idx = static_cast<std::size_t>(job_id - 1);
      if (idx >= rule.custom_values.size() || !std::isfinite(rule.custom_values[idx])) {
        throw Error(ErrorCode::undefined_priority, "custom rule has no value for job " + std::to_string(job_id));
      }
      return rule.custom_values[idx];
    }
  }
  return 0.0;
}

PriorityPolicy::PriorityPolicy(PriorityRule rule, const FlowShopInstance& inst) : rule_(std::move(rule)) {
  const int n = inst.job_count();
  if (rule_.kind == RuleKind::custom && static_cast<int>(rule_.custom_values.size()) != n) {
    throw Error(ErrorCode::invalid_parameter, "custom rule needs one value per job");
  }
  table_.resize(n);
  for (int id = 1; id <= n; ++id) {
    auto& row = table_[id - 1];
    if (rule_.is_dynamic()) {
      const auto& d = inst.job(id).dist;
      for (int k = 0; k < d.max_support() && d.survival(k) > 0.0; ++k) {
        row.push_back(priority_value(rule_, id, k, inst));
      }
    } else {
      row.push_back(priority_value(rule_, id, 0, inst));
    }
  }
  if (rule_.kind == RuleKind::lvf) {
    secondary_.resize(n);
    for (int id = 1; id <= n; ++id) {
      const auto& d = inst.job(id).dist;
      for (int k = 0; k < d.max_support() && d.survival(k) > 0.0; ++k) {
        secondary_[id - 1].push_back(d.cond_remaining_mean(k));
      }
    }
  }
  tie_rank_.assign(n, 0);
  if (rule_.tie_break.empty()) {
    std::iota(tie_rank_.begin(), tie_rank_.end(), 0);
  } else {
    std::vector<int> sorted = rule_.tie_break;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 1);
    if (sorted != ids) throw Error(ErrorCode::invalid_parameter, "tie_break must be a permutation of job ids");
    for (int pos = 0; pos < n; ++pos) tie_rank_[rule_.tie_break[pos] - 1] = pos;
  }
}

double PriorityPolicy::priority(int job_id, int loops_completed) const {
  const auto& row = table_.at(static_cast<std::size_t>(job_id - 1));
  if (!rule_.is_dynamic()) return row.front();
  if (loops_completed < 0 || loops_completed >= static_cast<int>(row.size())) {
    throw Error(ErrorCode::undefined_priority,
                "job " + std::to_string(job_id) + " cannot have completed " + std::to_string(loops_completed) +
                    " loops and still be unfinished");
  }
  return row[static_cast<std::size_t>(loops_completed)];
}

double PriorityPolicy::secondary(int job_id, int loops_completed) const {
  if (secondary_.empty()) return 0.0;
  const auto& row = secondary_.at(static_cast<std::size_t>(job_id - 1));
  if (loops_completed < 0 || loops_completed >= static_cast<int>(row.size())) {
    throw Error(ErrorCode::undefined_priority,
                "job " + std::to_string(job_id) + " cannot have completed " + std::to_string(loops_completed) +
                    " loops and still be unfinished");
  }
  return row[static_cast<std::size_t>(loops_completed)];
}

std::optional<int> PriorityPolicy::decide(const ObservationView& view) const {
  std::optional<int> best;
  double best_value = 0.0;
  double best_secondary = 0.0;
  for (const auto& w : view.uncompleted) {
    const double v = priority(w.id, w.loops_completed);
    const double s = secondary(w.id, w.loops_completed);
    const bool better = !best || v > best_value ||
                        (v == best_value && (s > best_secondary ||
                                             (s == best_secondary && tie_rank_[w.id - 1] < tie_rank_[*best - 1])));
    if (better) {
      best = w.id;
      best_value = v;
      best_secondary = s;
    }
  }
  return best;
}

std::optional<int> decide(const PriorityRule& rule, const ObservationView& view) {
  if (view.instance == nullptr) throw Error(ErrorCode::invalid_parameter, "view has no instance");
  return PriorityPolicy(rule, *view.instance).decide(view);
}

std::string to_string(ParallelRule rule) {
  switch (rule) {
    case ParallelRule::lept: return "lept";
    case ParallelRule::sept: return "sept";
    case ParallelRule::wsept: return "wsept";
    case ParallelRule::preemptive_lept: return "preemptive-lept";
    case ParallelRule::preemptive_sept: return "preemptive-sept";
  }
  return "?";
}

bool is_preemptive(ParallelRule rule) {
  return rule == ParallelRule::preemptive_lept || rule == ParallelRule::preemptive_sept;
}

ParallelRule induced_parallel_rule(RuleKind kind) {
  switch (kind) {
    case RuleKind::mel: return ParallelRule::lept;
    case RuleKind::lel: return ParallelRule::sept;
    case RuleKind::wlel: return ParallelRule::wsept;
    case RuleKind::merl: return ParallelRule::preemptive_lept;
    case RuleKind::lerl: return ParallelRule::preemptive_sept;
    case RuleKind::lvf:
    case RuleKind::custom: break;
  }
  throw Error(ErrorCode::no_canonical_induction,
              to_string(kind) + " has no canonical parallel counterpart; use induced traces instead");
}

}  // namespace reentry
