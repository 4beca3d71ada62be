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

#include "reentry/evaluation.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "parallel.hpp"
#include "reentry/error.hpp"
#include "reentry/simulator.hpp"

namespace reentry {
namespace {

constexpr double kZ95 = 1.96;

double realization_value(const FlowShopInstance& inst, const Policy& policy, Objective objective,
                         std::span<const int> loops, std::span<double> completions) {
  simulate_flow_shop_completions(inst, policy, loops, completions);
  switch (objective.kind) {
    case Objective::Kind::makespan: {
      double v = 0.0;
      for (double c : completions) v = std::max(v, c);
      return v;
    }
    case Objective::Kind::total_completion: {
      double v = 0.0;
      for (double c : completions) v += c;
      return v;
    }
    case Objective::Kind::total_weighted_completion: {
      double v = 0.0;
      for (std::size_t j = 0; j < completions.size(); ++j) v += inst.jobs[j].weight * completions[j];
      return v;
    }
    case Objective::Kind::alpha_weighted_completion: break;
  }
  throw Error(ErrorCode::unsupported_objective, "alpha-completion objectives are not defined on the flow shop");
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments moments(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  Moments m;
  m.mean = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - m.mean) * (values[i] - m.mean);
  m.sd = values.size() > 1 ? std::sqrt(pairwise_sum(sq) / (n - 1.0)) : 0.0;
  return m;
}

void require_samples(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::invalid_parameter, "n_samples must be at least 2");
}

// Runs `count` replications; body(r, loops, completions) fills row r.
template <class Body>
void replicate(const FlowShopInstance& inst, std::size_t count, std::uint64_t seed, unsigned threads, Body&& body) {
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  detail::parallel_for(blocks, threads, [&](std::size_t b) {
    Realization y;
    std::vector<double> completions(inst.jobs.size());
    const std::size_t end = std::min(count, (b + 1) * kBlock);
    for (std::size_t r = b * kBlock; r < end; ++r) {
      Rng rng(derive_seed(seed, r));
      y = sample_realization(inst, rng);
      try {
        body(r, std::span<const int>(y.loops), std::span<double>(completions));
      } catch (const Error& e) {
        throw Error(e.code(), "replication " + std::to_string(r) + ": " + e.detail());
      }
    }
  });
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

McReport mc_estimate(const FlowShopInstance& inst, const Policy& policy, Objective objective, std::size_t n,
                     std::uint64_t seed, unsigned threads) {
  require_samples(n);
  std::vector<double> values(n);
  replicate(inst, n, seed, threads, [&](std::size_t r, std::span<const int> loops, std::span<double> completions) {
    values[r] = realization_value(inst, policy, objective, loops, completions);
  });
  const auto mo = moments(values);
  McReport report;
  report.policy = policy.name();
  report.objective = objective.name();
  report.n = n;
  report.mean = mo.mean;
  report.sd = mo.sd;
  report.ci95 = kZ95 * mo.sd / std::sqrt(static_cast<double>(n));
  report.seed = seed;
  return report;
}

PairedReport paired_compare(const FlowShopInstance& inst, const Policy& a, const Policy& b, Objective objective,
                            std::size_t n, std::uint64_t seed, unsigned threads) {
  require_samples(n);
  std::vector<double> va(n);
  std::vector<double> vb(n);
  std::vector<double> diff(n);
  replicate(inst, n, seed, threads, [&](std::size_t r, std::span<const int> loops, std::span<double> completions) {
    va[r] = realization_value(inst, a, objective, loops, completions);
    vb[r] = realization_value(inst, b, objective, loops, completions);
    diff[r] = va[r] - vb[r];
  });
  const auto ma = moments(va);
  const auto mb = moments(vb);
  const auto md = moments(diff);
  const double root_n = std::sqrt(static_cast<double>(n));
  PairedReport report;
  report.policy_a = a.name();
  report.policy_b = b.name();
  report.objective = objective.name();
  report.n = n;
  report.mean_a = ma.mean;
  report.mean_b = mb.mean;
  report.mean_diff = md.mean;
  report.sd_diff = md.sd;
  report.ci95_diff = kZ95 * md.sd / root_n;
  report.unpaired_ci95 = kZ95 * std::sqrt(ma.sd * ma.sd + mb.sd * mb.sd) / root_n;
  report.seed = seed;
  return report;
}

double max_scv(const FlowShopInstance& inst) {
  double delta = 0.0;
  for (const auto& j : inst.jobs) delta = std::max(delta, j.dist.scv());
  return delta;
}

bool all_nbue(const FlowShopInstance& inst) {
  for (const auto& j : inst.jobs) {
    if (!j.dist.is_nbue()) return false;
  }
  return true;
}

double wlel_bound(double delta) { return 1.0 + 0.5 * (std::sqrt(2.0) - 1.0) * (1.0 + delta); }

RatioScanReport ratio_scan(const FlowShopGenerator& generator, const PriorityRule& rule, Objective objective,
                           std::size_t trials, std::uint64_t seed, const RatioScanOptions& options) {
  RatioScanReport report;
  report.records.resize(trials);
  detail::parallel_for(trials, options.threads, [&](std::size_t i) {
    auto& rec = report.records[i];
    rec.index = i;
    Rng rng(derive_seed(seed, i));
    const auto inst = generator(rng);
    rec.jobs = inst.job_count();
    rec.machines = inst.machines;
    rec.delta = max_scv(inst);
    rec.nbue = all_nbue(inst);
    rec.bound = options.bound ? options.bound(inst) : wlel_bound(rec.delta);
    try {
      const PriorityPolicy policy(rule, inst);
      try {
        rec.policy_value = evaluate_policy_exact(inst, policy, objective, options.enumeration);
        rec.method = "exact";
      } catch (const Error& e) {
        if (e.code() != ErrorCode::too_large_for_enumeration) throw;
        try {
          rec.policy_value = evaluate_policy_mdp(inst, policy, objective, options.mdp);
          rec.method = "mdp";
        } catch (const Error& e2) {
          if (e2.code() != ErrorCode::state_space_too_large) throw;
          rec.policy_value = mc_estimate(inst, policy, objective, options.mc_samples, derive_seed(seed, i), 1).mean;
          rec.method = "mc";
        }
      }
      auto mdp = options.mdp;
      mdp.record_decisions = false;
      rec.optimum = optimal_expected(inst, objective, mdp).value;
      rec.ratio = rec.policy_value / rec.optimum;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  for (const auto& rec : report.records) {
    if (!rec.error.empty()) {
      ++report.failures;
      continue;
    }
    if (rec.ratio > report.max_ratio) {
      report.max_ratio = rec.ratio;
      report.argmax = rec.index;
    }
    report.max_excess = std::max(report.max_excess, rec.ratio - rec.bound);
  }
  return report;
}

RatioScanReport wspt_ratio_scan(const ParallelGenerator& generator, Objective objective, std::size_t trials,
                                std::uint64_t seed, double bound, unsigned threads) {
  RatioScanReport report;
  report.records.resize(trials);
  detail::parallel_for(trials, threads, [&](std::size_t i) {
    auto& rec = report.records[i];
    rec.index = i;
    rec.bound = bound;
    rec.method = "exact";
    Rng rng(derive_seed(seed, i));
    const auto inst = generator(rng);
    rec.jobs = inst.job_count();
    rec.machines = inst.machine_count();
    try {
      rec.policy_value = wspt_value(inst, TieMode::worst, objective).value;
      rec.optimum = brute_force_parallel_opt(inst, objective).value;
      rec.ratio = rec.policy_value / rec.optimum;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  for (const auto& rec : report.records) {
    if (!rec.error.empty()) {
      ++report.failures;
      continue;
    }
    if (rec.ratio > report.max_ratio) {
      report.max_ratio = rec.ratio;
      report.argmax = rec.index;
    }
    report.max_excess = std::max(report.max_excess, rec.ratio - rec.bound);
  }
  return report;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_mc_csv(std::ostream& out, std::span<const McReport> reports, bool header) {
  if (header) out << "policy,objective,n,mean,sd,ci95,seed\n";
  for (const auto& r : reports) {
    out << r.policy << ',' << r.objective << ',' << r.n << ',' << format_real(r.mean) << ',' << format_real(r.sd)
        << ',' << format_real(r.ci95) << ',' << r.seed << '\n';
  }
}

void write_ratio_csv(std::ostream& out, std::span<const RatioRecord> records, bool header) {
  if (header) out << "index,jobs,machines,method,policy_value,optimum,ratio,bound,delta,nbue,error\n";
  for (const auto& r : records) {
    std::string error = r.error;
    for (char& c : error) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << r.index << ',' << r.jobs << ',' << r.machines << ',' << r.method << ',' << format_real(r.policy_value)
        << ',' << format_real(r.optimum) << ',' << format_real(r.ratio) << ',' << format_real(r.bound) << ','
        << format_real(r.delta) << ',' << (r.nbue ? 1 : 0) << ',' << error << '\n';
  }
}

}  // namespace reentry
