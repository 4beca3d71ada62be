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

#include "reentry/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reentry/error.hpp"

namespace reentry {
namespace {

constexpr int kMaxSupport = 5'000'000;

void require_probability(double q, const char* what) {
  if (!(q > 0.0 && q <= 1.0)) {
    std::ostringstream os;
    os << what << " must lie in (0, 1], got " << q;
    throw Error(ErrorCode::invalid_parameter, os.str());
  }
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    std::ostringstream os;
    os << "truncation epsilon must lie in (0, 1), got " << epsilon;
    throw Error(ErrorCode::invalid_parameter, os.str());
  }
}

void require_loops(int loops) {
  if (loops < 1) {
    throw Error(ErrorCode::invalid_parameter,
                "required loop count must be >= 1, got " + std::to_string(loops));
  }
}

std::string format_label(const std::string& name, const std::vector<std::pair<const char*, double>>& args) {
  std::ostringstream os;
  os << name << '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ',';
    os << args[i].first << '=' << args[i].second;
  }
  os << ')';
  return os.str();
}

// P(Binomial(trials, q) < successes), i.e. the negative binomial survival
// P(Y > trials). Summed term-by-term so tiny tails keep relative precision.
double binomial_lower_tail(int trials, int successes, double q) {
  double total = 0.0;
  const double log_q = std::log(q);
  const double log_f = std::log1p(-q);
  for (int s = 0; s < successes && s <= trials; ++s) {
    const double log_term = std::lgamma(trials + 1.0) - std::lgamma(s + 1.0) -
                            std::lgamma(trials - s + 1.0) + s * log_q + (trials - s) * log_f;
    total += std::exp(log_term);
  }
  return total;
}

}  // namespace

LoopDistribution::LoopDistribution(std::vector<double> mass, double truncation_tail,
                                   DistParams params, std::string label)
    : mass_(std::move(mass)),
      truncation_tail_(truncation_tail),
      params_(std::move(params)),
      label_(std::move(label)) {
  const int k_max = static_cast<int>(mass_.size());
  survival_.assign(k_max + 1, 0.0);
  for (int k = k_max - 1; k >= 0; --k) survival_[k] = survival_[k + 1] + mass_[k];
  remaining_.assign(k_max + 1, 0.0);
  for (int k = k_max - 1; k >= 0; --k) remaining_[k] = remaining_[k + 1] + survival_[k];

  cdf_.resize(k_max);
  double acc = 0.0;
  for (int k = 0; k < k_max; ++k) {
    acc += mass_[k];
    cdf_[k] = acc;
  }
  min_support_ = 1;
  while (min_support_ <= k_max && mass_[min_support_ - 1] <= 0.0) ++min_support_;

  double m1 = 0.0;
  for (int k = 1; k <= k_max; ++k) m1 += k * mass_[k - 1];
  double m2 = 0.0;
  for (int k = 1; k <= k_max; ++k) m2 += (k - m1) * (k - m1) * mass_[k - 1];
  mean_ = m1;
  variance_ = m2;
}

LoopDistribution LoopDistribution::geometric(double q, double epsilon) {
  require_probability(q, "geometric success probability");
  require_epsilon(epsilon);
  std::vector<double> mass;
  double survive = 1.0;  // (1 - q)^(k - 1)
  double tail = 0.0;
  for (int k = 1;; ++k) {
    mass.push_back(q * survive);
    survive *= 1.0 - q;
    if (survive <= epsilon) {
      tail = survive;
      mass.back() += survive;
      break;
    }
    if (k >= kMaxSupport) throw Error(ErrorCode::invalid_parameter, "geometric support too long");
  }
  DistParams params{DistKind::geometric, 1, q, epsilon, {}};
  return LoopDistribution(std::move(mass), tail, std::move(params),
                          format_label("geometric", {{"q", q}}));
}

LoopDistribution LoopDistribution::deterministic(int loops) {
  require_loops(loops);
  if (loops > kMaxSupport) throw Error(ErrorCode::invalid_parameter, "loop count too large");
  std::vector<double> mass(loops, 0.0);
  mass.back() = 1.0;
  DistParams params{DistKind::deterministic, loops, 1.0, kDefaultTruncation, {}};
  return LoopDistribution(std::move(mass), 0.0, std::move(params),
                          "deterministic(L=" + std::to_string(loops) + ")");
}

LoopDistribution LoopDistribution::negative_binomial(int loops, double q, double epsilon) {
  require_loops(loops);
  require_probability(q, "negative binomial success probability");
  require_epsilon(epsilon);
  std::vector<double> mass(loops - 1, 0.0);
  double tail = 0.0;
  if (q == 1.0) {
    mass.push_back(1.0);
  } else {
    // P(Y = k) = C(k-1, L-1) q^L (1-q)^(k-L), advanced by the ratio
    // (k / (k - L + 1)) (1 - q).
    double term = std::pow(q, loops);
    for (int k = loops;; ++k) {
      mass.push_back(term);
      const double survive = binomial_lower_tail(k, loops, q);
      if (survive <= epsilon) {
        tail = survive;
        mass.back() += survive;
        break;
      }
      term *= static_cast<double>(k) / static_cast<double>(k - loops + 1) * (1.0 - q);
      if (k >= kMaxSupport) {
        throw Error(ErrorCode::invalid_parameter, "negative binomial support too long");
      }
    }
  }
  DistParams params{DistKind::negative_binomial, loops, q, epsilon, {}};
  return LoopDistribution(std::move(mass), tail, std::move(params),
                          format_label("negbin", {{"L", loops}, {"q", q}}));
}

LoopDistribution LoopDistribution::consecutive_success(int loops, double q, double epsilon) {
  require_loops(loops);
  require_probability(q, "consecutive-success probability");
  require_epsilon(epsilon);
  std::vector<double> mass(loops - 1, 0.0);
  double tail = 0.0;
  if (q == 1.0) {
    mass.push_back(1.0);
  } else {
    // progress[s] = P(current run of successes has length s, not yet absorbed)
    std::vector<double> progress(loops, 0.0);
    progress[0] = 1.0;
    std::vector<double> next(loops, 0.0);
    for (int k = 1;; ++k) {
      double absorbed = progress[loops - 1] * q;
      double failed = 0.0;
      for (int s = 0; s < loops; ++s) failed += progress[s];
      failed *= 1.0 - q;
      next[0] = failed;
      for (int s = 1; s < loops; ++s) next[s] = progress[s - 1] * q;
      progress.swap(next);
      if (k < loops) continue;
      double survive = 0.0;
      for (double p : progress) survive += p;
      mass.push_back(absorbed);
      if (survive <= epsilon) {
        tail = survive;
        mass.back() += survive;
        break;
      }
      if (k >= kMaxSupport) {
        throw Error(ErrorCode::invalid_parameter, "consecutive-success support too long");
      }
    }
  }
  DistParams params{DistKind::consecutive_success, loops, q, epsilon, {}};
  return LoopDistribution(std::move(mass), tail, std::move(params),
                          format_label("consecutive", {{"L", loops}, {"q", q}}));
}

LoopDistribution LoopDistribution::empirical(std::span<const std::pair<int, double>> table) {
  if (table.empty()) throw Error(ErrorCode::invalid_parameter, "empirical table is empty");
  std::vector<std::pair<int, double>> sorted(table.begin(), table.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto [k, p] = sorted[i];
    if (k < 1 || k > kMaxSupport) {
      throw Error(ErrorCode::invalid_parameter,
                  "empirical support point " + std::to_string(k) + " outside {1, 2, ...}");
    }
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::invalid_parameter,
                  "empirical probability at " + std::to_string(k) + " must be positive");
    }
    if (i > 0 && sorted[i - 1].first == k) {
      throw Error(ErrorCode::invalid_parameter,
                  "duplicate support point " + std::to_string(k) + " in empirical table");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "empirical probabilities sum to " << total << ", expected 1";
    throw Error(ErrorCode::invalid_parameter, os.str());
  }
  std::vector<double> mass(sorted.back().first, 0.0);
  for (auto& [k, p] : sorted) {
    p /= total;
    mass[k - 1] = p;
  }
  std::ostringstream label;
  label << "empirical{";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) label << ',';
    label << sorted[i].first << ':' << sorted[i].second;
  }
  label << '}';
  DistParams params{DistKind::empirical, 1, 1.0, kDefaultTruncation, sorted};
  return LoopDistribution(std::move(mass), 0.0, std::move(params), label.str());
}

LoopDistribution LoopDistribution::from_params(const DistParams& params) {
  switch (params.kind) {
    case DistKind::geometric: return geometric(params.success_prob, params.epsilon);
    case DistKind::deterministic: return deterministic(params.required_loops);
    case DistKind::negative_binomial:
      return negative_binomial(params.required_loops, params.success_prob, params.epsilon);
    case DistKind::consecutive_success:
      return consecutive_success(params.required_loops, params.success_prob, params.epsilon);
    case DistKind::empirical: return empirical(params.table);
  }
  throw Error(ErrorCode::invalid_parameter, "unknown distribution kind");
}

double LoopDistribution::pmf(int k) const {
  if (k < 1 || k > max_support()) return 0.0;
  return mass_[k - 1];
}

double LoopDistribution::survival(int k) const {
  if (k < 0) return 1.0;
  if (k >= max_support()) return 0.0;
  return survival_[k];
}

std::vector<std::pair<int, double>> LoopDistribution::support() const {
  std::vector<std::pair<int, double>> out;
  for (int k = 1; k <= max_support(); ++k) {
    if (mass_[k - 1] > 0.0) out.emplace_back(k, mass_[k - 1]);
  }
  return out;
}

double LoopDistribution::hazard(int k) const {
  if (k < 0 || survival(k) <= 0.0) {
    throw Error(ErrorCode::undefined_hazard,
                "P(Y > " + std::to_string(k) + ") is zero for " + label_);
  }
  return pmf(k + 1) / survival_[k];
}

double LoopDistribution::cond_remaining_mean(int k) const {
  if (k < 0 || survival(k) <= 0.0) {
    throw Error(ErrorCode::undefined_hazard,
                "P(Y > " + std::to_string(k) + ") is zero for " + label_);
  }
  return remaining_[k] / survival_[k];
}

bool LoopDistribution::is_nbue() const {
  // For integer-valued Y the remaining mean only decreases between integers,
  // so checking integer x is sufficient.
  for (int x = 0; x < max_support(); ++x) {
    if (survival_[x] <= 0.0) continue;
    if (cond_remaining_mean(x) > mean_ + 1e-9) return false;
  }
  return true;
}

LoopDistribution LoopDistribution::truncate(double epsilon) const {
  require_epsilon(epsilon);
  int cut = max_support();
  for (int k = 1; k <= max_support(); ++k) {
    if (survival_[k] <= epsilon) {
      cut = k;
      break;
    }
  }
  std::vector<std::pair<int, double>> table;
  double moved = survival(cut);
  for (int k = 1; k <= cut; ++k) {
    double p = mass_[k - 1];
    if (k == cut) p += moved;
    if (p > 0.0) table.emplace_back(k, p);
  }
  std::vector<double> mass(cut, 0.0);
  for (auto [k, p] : table) mass[k - 1] = p;
  DistParams params{DistKind::empirical, 1, 1.0, kDefaultTruncation, table};
  return LoopDistribution(std::move(mass), truncation_tail_ + moved, std::move(params),
                          label_ + "|trunc");
}

int LoopDistribution::sample(Rng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  int k = static_cast<int>(it - cdf_.begin()) + 1;
  if (k > max_support()) k = max_support();
  while (mass_[k - 1] <= 0.0) --k;  // only reachable through rounding at the top
  return k;
}

bool check_mhr_family(std::span<const LoopDistribution> dists, const MhrFamilySpec& spec) {
  constexpr double kTol = 1e-9;
  if (spec.function_index.size() != dists.size() || spec.offsets.size() != dists.size()) {
    throw Error(ErrorCode::invalid_parameter, "MHR spec must assign a table and offset to every job");
  }
  const auto& fs = spec.base_functions;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t k = 1; k < fs[i].size(); ++k) {
      const double step = fs[i][k] - fs[i][k - 1];
      if (spec.direction == Monotonicity::non_increasing ? step > kTol : step < -kTol) return false;
    }
  }
  auto range_over_positive = [](const std::vector<double>& f) {
    double lo = 1.0, hi = 0.0;
    for (std::size_t k = 1; k < f.size(); ++k) {
      lo = std::min(lo, f[k]);
      hi = std::max(hi, f[k]);
    }
    return std::pair{lo, hi};
  };
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
    if (fs[i].size() < 2 || fs[i + 1].size() < 2) continue;
    if (!(range_over_positive(fs[i]).second < range_over_positive(fs[i + 1]).first)) return false;
  }
  for (std::size_t j = 0; j < dists.size(); ++j) {
    const std::size_t fi = spec.function_index[j];
    const int x = spec.offsets[j];
    if (fi >= fs.size() || x < 0) {
      throw Error(ErrorCode::invalid_parameter,
                  "job " + std::to_string(j + 1) + " has an invalid table index or offset");
    }
    const auto& d = dists[j];
    for (int k = 0; k < d.max_support(); ++k) {
      if (d.survival(k) <= 0.0) continue;
      // the fold point of a truncated tail has hazard 1 by construction
      if (d.truncation_tail() > 0.0 && k == d.max_support() - 1) continue;
      const auto at = static_cast<std::size_t>(x + k);
      if (at >= fs[fi].size()) {
        throw Error(ErrorCode::insufficient_table,
                    "table " + std::to_string(fi) + " has " + std::to_string(fs[fi].size()) +
                        " entries; job " + std::to_string(j + 1) + " needs index " +
                        std::to_string(at));
      }
      if (std::abs(d.hazard(k) - fs[fi][at]) > kTol) return false;
    }
  }
  return true;
}

}  // namespace reentry
