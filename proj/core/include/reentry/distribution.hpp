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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reentry/rng.hpp"

namespace reentry {

inline constexpr double kDefaultTruncation = 1e-9;

enum class DistKind { geometric, deterministic, negative_binomial, consecutive_success, empirical };

// Constructor arguments, kept so an instance file can be written back out
// with the same parametric description it was read from.
struct DistParams {
  DistKind kind = DistKind::empirical;
  int required_loops = 1;     // L for deterministic / negbin / consecutive
  double success_prob = 1.0;  // q for geometric / negbin / consecutive
  double epsilon = kDefaultTruncation;
  std::vector<std::pair<int, double>> table;  // empirical only

  bool operator==(const DistParams&) const = default;
};

/// Distribution of the number of loops a job needs, on {1, 2, ...}.
///
/// Every instance has finite support: parametric constructors stop at the
/// smallest K with P(Y > K) <= epsilon and fold that tail into P(Y = K), so
/// P(Y >= k) is exact for k <= K. Values are immutable after construction.
class LoopDistribution {
 public:
  static LoopDistribution geometric(double q, double epsilon = kDefaultTruncation);
  static LoopDistribution deterministic(int loops);
  static LoopDistribution negative_binomial(int loops, double q,
                                            double epsilon = kDefaultTruncation);
  /// First time of `loops` consecutive successes; a failure restarts progress.
  static LoopDistribution consecutive_success(int loops, double q,
                                              double epsilon = kDefaultTruncation);
  /// Entries (k, p) with k >= 1, p > 0, no duplicate k, summing to 1 within
  /// 1e-9. The stored table is renormalized.
  static LoopDistribution empirical(std::span<const std::pair<int, double>> table);
  static LoopDistribution from_params(const DistParams& params);

  double pmf(int k) const;
  /// P(Y > k).
  double survival(int k) const;
  int min_support() const { return min_support_; }
  int max_support() const { return static_cast<int>(mass_.size()); }
  /// (k, P(Y = k)) for every k with positive mass, ascending.
  std::vector<std::pair<int, double>> support() const;

  double mean() const { return mean_; }
  double variance() const { return variance_; }
  /// Squared coefficient of variation Var[Y] / E[Y]^2.
  double scv() const { return variance_ / (mean_ * mean_); }

  /// P(Y = k + 1 | Y > k). Throws undefined_hazard when P(Y > k) = 0.
  double hazard(int k) const;
  /// E[Y - k | Y > k]. Throws undefined_hazard when P(Y > k) = 0.
  double cond_remaining_mean(int k) const;
  bool is_nbue() const;

  /// Returns a copy whose tail beyond the smallest K with P(Y > K) <= epsilon
  /// is folded into K. The result is described as an empirical table.
  LoopDistribution truncate(double epsilon) const;

  /// Inverse-CDF draw; consumes exactly one uniform from `rng`.
  int sample(Rng& rng) const;

  double truncation_tail() const { return truncation_tail_; }
  const std::string& label() const { return label_; }
  const DistParams& params() const { return params_; }

  bool operator==(const LoopDistribution& other) const { return mass_ == other.mass_; }

 private:
  LoopDistribution(std::vector<double> mass, double truncation_tail, DistParams params,
                   std::string label);

  std::vector<double> mass_;       // mass_[k - 1] = P(Y = k)
  std::vector<double> survival_;   // survival_[k] = P(Y > k), k = 0..K
  std::vector<double> remaining_;  // remaining_[k] = sum_{i >= k} P(Y > i)
  std::vector<double> cdf_;
  int min_support_ = 1;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double truncation_tail_ = 0.0;
  DistParams params_;
  std::string label_;
};

enum class Monotonicity { non_increasing, non_decreasing };

/// A monotone-hazard-rate family: base tables f_i over {0, ..., K_i} and, for
/// every job, the table it follows and its shift x_j, so that the job's
/// hazard satisfies h_j(k) = f_{i(j)}(x_j + k).
struct MhrFamilySpec {
  std::vector<std::vector<double>> base_functions;
  Monotonicity direction = Monotonicity::non_increasing;
  std::vector<std::size_t> function_index;  // per job, 0-based
  std::vector<int> offsets;                 // per job, x_j >= 0
};

/// True iff every base table is monotone in `spec.direction`, consecutive
/// tables are range-separated over k >= 1, and each job's hazard matches its
/// shifted table within 1e-9 wherever the hazard is defined (the fold point
/// of a truncated tail is skipped).
/// Throws insufficient_table when a table is too short to cover a job's
/// support, invalid_parameter when the spec shape does not match `dists`.
bool check_mhr_family(std::span<const LoopDistribution> dists, const MhrFamilySpec& spec);

}  // namespace reentry
