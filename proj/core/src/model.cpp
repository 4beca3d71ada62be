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

#include "reentry/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "reentry/error.hpp"

namespace reentry {

std::vector<double> FlowShopInstance::weights() const {
  std::vector<double> w;
  w.reserve(jobs.size());
  for (const auto& j : jobs) w.push_back(j.weight);
  return w;
}

double ParallelJob::duration() const {
  if (!is_deterministic()) {
    throw Error(ErrorCode::type_error, "job " + std::to_string(id) + " has stochastic processing");
  }
  return std::get<double>(processing);
}

double ParallelJob::expected_duration() const {
  if (is_deterministic()) return std::get<double>(processing);
  return std::get<LoopDistribution>(processing).mean();
}

bool ParallelInstance::all_deterministic() const {
  return std::all_of(jobs.begin(), jobs.end(), [](const ParallelJob& j) { return j.is_deterministic(); });
}

std::vector<double> ParallelInstance::weights() const {
  std::vector<double> w;
  w.reserve(jobs.size());
  for (const auto& j : jobs) w.push_back(j.weight);
  return w;
}

Realization sample_realization(const FlowShopInstance& inst, Rng& rng) {
  Realization y;
  y.loops.reserve(inst.jobs.size());
  for (const auto& j : inst.jobs) y.loops.push_back(j.dist.sample(rng));
  return y;
}

double ScheduleTrace::makespan() const {
  double c = 0.0;
  for (const auto& j : jobs) c = std::max(c, j.completion);
  return c;
}

std::vector<double> ScheduleTrace::completions() const {
  std::vector<double> c;
  c.reserve(jobs.size());
  for (const auto& j : jobs) c.push_back(j.completion);
  return c;
}

Objective Objective::alpha_weighted(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream os;
    os << "alpha must lie in (0, 1], got " << alpha;
    throw Error(ErrorCode::invalid_parameter, os.str());
  }
  return {Kind::alpha_weighted_completion, alpha};
}

Objective Objective::parse(const std::string& text) {
  if (text == "cmax" || text == "makespan") return makespan();
  if (text == "sumc") return total_completion();
  if (text == "sumwc") return total_weighted_completion();
  const std::string prefix = "sumwc-alpha:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      return alpha_weighted(std::stod(text.substr(prefix.size())));
    } catch (const std::logic_error&) {
    }
  }
  throw Error(ErrorCode::invalid_parameter, "unknown objective '" + text + "'");
}

std::string Objective::name() const {
  switch (kind) {
    case Kind::makespan: return "cmax";
    case Kind::total_completion: return "sumc";
    case Kind::total_weighted_completion: return "sumwc";
    case Kind::alpha_weighted_completion: {
      std::ostringstream os;
      os << "sumwc-alpha:" << alpha;
      return os.str();
    }
  }
  return "?";
}

double objective_value(const ScheduleTrace& trace, std::span<const double> weights, Objective objective) {
  if (weights.size() != trace.jobs.size()) {
    throw Error(ErrorCode::invalid_parameter, "weight count does not match trace job count");
  }
  switch (objective.kind) {
    case Objective::Kind::makespan: return trace.makespan();
    case Objective::Kind::total_completion: {
      double s = 0.0;
      for (const auto& j : trace.jobs) s += j.completion;
      return s;
    }
    case Objective::Kind::total_weighted_completion: {
      double s = 0.0;
      for (std::size_t i = 0; i < trace.jobs.size(); ++i) s += weights[i] * trace.jobs[i].completion;
      return s;
    }
    case Objective::Kind::alpha_weighted_completion: {
      if (trace.kind == TraceKind::flow_shop) {
        throw Error(ErrorCode::unsupported_objective, "alpha-completion objectives need a parallel trace");
      }
      double s = 0.0;
      for (std::size_t i = 0; i < trace.jobs.size(); ++i) {
        const auto& ops = trace.jobs[i].operations;
        if (ops.size() != 1) {
          throw Error(ErrorCode::unsupported_objective,
                      "job " + std::to_string(trace.jobs[i].id) +
                          " is not processed contiguously; C_j(alpha) is undefined");
        }
        const double start = ops.front().start;
        const double length = ops.front().finish - start;
        s += weights[i] * (start + objective.alpha * length);
      }
      return s;
    }
  }
  return 0.0;
}

double objective_value(const ScheduleTrace& trace, const FlowShopInstance& inst, Objective objective) {
  const auto w = inst.weights();
  return objective_value(trace, w, objective);
}

double objective_value(const ScheduleTrace& trace, const ParallelInstance& inst, Objective objective) {
  const auto w = inst.weights();
  return objective_value(trace, w, objective);
}

namespace {

void check_ids_and_weights(const auto& jobs, std::vector<std::string>& out) {
  if (jobs.empty()) out.emplace_back("no jobs");
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    if (j.id != static_cast<int>(i) + 1) {
      out.push_back("job at position " + std::to_string(i) + " has id " + std::to_string(j.id) +
                    ", expected " + std::to_string(i + 1));
    }
    if (!(j.weight > 0.0) || !std::isfinite(j.weight)) {
      out.push_back("job " + std::to_string(j.id) + ": non-positive weight");
    }
  }
}

}  // namespace

std::vector<std::string> validate(const FlowShopInstance& inst) {
  std::vector<std::string> out;
  if (inst.machines < 1) out.emplace_back("no machines");
  check_ids_and_weights(inst.jobs, out);
  return out;
}

std::vector<std::string> validate(const ParallelInstance& inst) {
  std::vector<std::string> out;
  if (inst.arrivals.empty()) out.emplace_back("no machines");
  for (std::size_t i = 0; i < inst.arrivals.size(); ++i) {
    if (!(inst.arrivals[i] >= 0.0) || !std::isfinite(inst.arrivals[i])) {
      out.push_back("machine " + std::to_string(i + 1) + ": negative arrival time");
    }
  }
  check_ids_and_weights(inst.jobs, out);
  for (const auto& j : inst.jobs) {
    if (j.is_deterministic() && !(j.duration() > 0.0)) {
      out.push_back("job " + std::to_string(j.id) + ": non-positive processing time");
    }
  }
  return out;
}

std::vector<std::string> validate(const Realization& y, const FlowShopInstance& inst) {
  std::vector<std::string> out;
  if (y.loops.size() != inst.jobs.size()) {
    out.push_back("realization has " + std::to_string(y.loops.size()) + " entries for " +
                  std::to_string(inst.jobs.size()) + " jobs");
    return out;
  }
  for (std::size_t i = 0; i < y.loops.size(); ++i) {
    if (inst.jobs[i].dist.pmf(y.loops[i]) <= 0.0) {
      out.push_back("job " + std::to_string(i + 1) + ": loop count " + std::to_string(y.loops[i]) +
                    " outside support");
    }
  }
  return out;
}

std::vector<std::string> check_feasibility(const ScheduleTrace& trace, std::span<const double> arrivals) {
  std::vector<std::string> out;
  // machine -> list of (start, finish, job)
  std::map<int, std::vector<std::tuple<double, double, int>>> by_machine;
  for (const auto& j : trace.jobs) {
    auto ops = j.operations;
    std::sort(ops.begin(), ops.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if (ops[k].finish < ops[k].start) {
        out.push_back("job " + std::to_string(j.id) + ": operation finishes before it starts");
      }
      if (k > 0 && ops[k].start < ops[k - 1].finish) {
        out.push_back("job " + std::to_string(j.id) + ": overlapping operations at " +
                      std::to_string(ops[k].start));
      }
      if (trace.kind == TraceKind::flow_shop) {
        // a loop occupies machine i during [s + i - 1, s + i)
        for (int i = 1; i <= trace.machines; ++i) {
          by_machine[i].emplace_back(ops[k].start + i - 1, ops[k].start + i, j.id);
        }
        if (ops[k].finish != ops[k].start + trace.machines) {
          out.push_back("job " + std::to_string(j.id) + ": loop does not span m unit slots");
        }
      } else {
        by_machine[ops[k].machine].emplace_back(ops[k].start, ops[k].finish, j.id);
        const auto mi = static_cast<std::size_t>(ops[k].machine - 1);
        if (!arrivals.empty()) {
          if (mi >= arrivals.size()) {
            out.push_back("job " + std::to_string(j.id) + ": unknown machine " +
                          std::to_string(ops[k].machine));
          } else if (ops[k].start < arrivals[mi]) {
            out.push_back("job " + std::to_string(j.id) + ": machine " + std::to_string(ops[k].machine) +
                          " used before its arrival");
          }
        }
      }
    }
    if (!ops.empty() && ops.back().finish != j.completion) {
      out.push_back("job " + std::to_string(j.id) + ": completion differs from last operation finish");
    }
  }
  for (auto& [machine, slots] : by_machine) {
    std::sort(slots.begin(), slots.end());
    for (std::size_t k = 1; k < slots.size(); ++k) {
      if (std::get<0>(slots[k]) < std::get<1>(slots[k - 1])) {
        out.push_back("machine " + std::to_string(machine) + ": jobs " +
                      std::to_string(std::get<2>(slots[k - 1])) + " and " +
                      std::to_string(std::get<2>(slots[k])) + " overlap");
      }
    }
  }
  return out;
}

}  // namespace reentry
