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
#include <map>
#include <vector>

#include "doctest.h"
#include "reentry/distribution.hpp"
#include "reentry/error.hpp"

using namespace reentry;

namespace {

// P(Y = k) for "first run of L consecutive successes" by enumerating every
// success/failure string of length k.
double consecutive_pmf_bruteforce(int L, double q, int k) {
  double total = 0.0;
  for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
    int run = 0;
    int first_hit = -1;
    double p = 1.0;
    for (int t = 0; t < k; ++t) {
      const bool ok = (mask >> t) & 1ul;
      p *= ok ? q : 1.0 - q;
      run = ok ? run + 1 : 0;
      if (run == L && first_hit < 0) first_hit = t + 1;
    }
    if (first_hit == k) total += p;
  }
  return total;
}

double binomial(int n, int r) {
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

double mass_sum(const LoopDistribution& d) {
  double s = 0.0;
  for (const auto& [k, p] : d.support()) s += p;
  return s;
}

}  // namespace

TEST_CASE("geometric basics") {
  const auto one = LoopDistribution::geometric(1.0);
  CHECK(one.max_support() == 1);
  CHECK(one.pmf(1) == 1.0);
  const auto g = LoopDistribution::geometric(0.5);
  CHECK(g.mean() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(g.pmf(3) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(g.scv() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(g.pmf(0) == 0.0);
  CHECK_THROWS_AS(LoopDistribution::geometric(0.0), Error);
  CHECK_THROWS_AS(LoopDistribution::geometric(1.5), Error);
}

TEST_CASE("geometric truncation point matches (1-q)^K <= eps") {
  for (double q : {0.3, 0.5, 0.8}) {
    for (double eps : {1e-3, 1e-6, 1e-9}) {
      int expected = 1;
      while (std::pow(1.0 - q, expected) > eps) ++expected;
      const auto g = LoopDistribution::geometric(q, eps);
      CHECK(g.max_support() == expected);
      CHECK(g.truncation_tail() == doctest::Approx(std::pow(1.0 - q, expected)).epsilon(1e-9));
      CHECK(mass_sum(g) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(LoopDistribution::geometric(0.5).max_support() == 30);
}

TEST_CASE("deterministic basics") {
  const auto d = LoopDistribution::deterministic(3);
  CHECK(d.pmf(3) == 1.0);
  CHECK(d.hazard(2) == 1.0);
  CHECK(d.hazard(0) == 0.0);
  CHECK(d.scv() == 0.0);
  CHECK(LoopDistribution::deterministic(7).scv() == 0.0);
  CHECK(LoopDistribution::deterministic(5).cond_remaining_mean(2) == 3.0);
  CHECK_THROWS_AS(LoopDistribution::deterministic(0), Error);
  try {
    (void)d.hazard(3);
    FAIL("hazard beyond support should throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::undefined_hazard);
  }
}

TEST_CASE("negative binomial against the closed-form pmf") {
  CHECK(LoopDistribution::negative_binomial(2, 0.5).pmf(2) == doctest::Approx(0.25));
  for (int L : {1, 2, 3}) {
    for (double q : {0.2, 0.5, 0.9}) {
      const auto d = LoopDistribution::negative_binomial(L, q, 1e-12);
      for (int k = L; k < std::min(d.max_support(), 40); ++k) {
        const double oracle = binomial(k - 1, L - 1) * std::pow(q, L) * std::pow(1.0 - q, k - L);
        CHECK(d.pmf(k) == doctest::Approx(oracle).epsilon(1e-9));
      }
      CHECK(d.mean() == doctest::Approx(L / q).epsilon(1e-6));
    }
  }
  CHECK(LoopDistribution::negative_binomial(2, 0.5).mean() == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(LoopDistribution::negative_binomial(2, 0.5).scv() == doctest::Approx(0.25).epsilon(1e-3));
  CHECK_THROWS_AS(LoopDistribution::negative_binomial(0, 0.5), Error);
  CHECK_THROWS_AS(LoopDistribution::negative_binomial(2, 0.0), Error);
}

TEST_CASE("consecutive success against string enumeration") {
  CHECK(LoopDistribution::consecutive_success(2, 0.5).pmf(2) == doctest::Approx(0.25));
  CHECK(LoopDistribution::consecutive_success(2, 0.5).pmf(3) == doctest::Approx(0.125));
  for (int L : {1, 2, 3}) {
    for (double q : {0.3, 0.6, 0.9}) {
      const auto d = LoopDistribution::consecutive_success(L, q, 1e-12);
      for (int k = 1; k <= 14; ++k) {
        CHECK(d.pmf(k) == doctest::Approx(consecutive_pmf_bruteforce(L, q, k)).epsilon(1e-9));
      }
      // E[Y] = (1 - q^L) / ((1 - q) q^L)
      CHECK(d.mean() == doctest::Approx((1.0 - std::pow(q, L)) / ((1.0 - q) * std::pow(q, L))).epsilon(1e-6));
    }
  }
  CHECK(LoopDistribution::consecutive_success(3, 1.0).pmf(3) == 1.0);
}

TEST_CASE("L = 1 families coincide with geometric") {
  for (double q = 0.2; q < 0.95; q += 0.1) {
    const auto g = LoopDistribution::geometric(q);
    const auto nb = LoopDistribution::negative_binomial(1, q);
    const auto cs = LoopDistribution::consecutive_success(1, q);
    REQUIRE(nb.max_support() == g.max_support());
    REQUIRE(cs.max_support() == g.max_support());
    for (int k = 1; k <= g.max_support(); ++k) {
      CHECK(std::abs(nb.pmf(k) - g.pmf(k)) <= 1e-12);
      CHECK(std::abs(cs.pmf(k) - g.pmf(k)) <= 1e-12);
    }
  }
}

TEST_CASE("empirical tables") {
  const std::vector<std::pair<int, double>> point{{1, 1.0}};
  CHECK(LoopDistribution::empirical(point).max_support() == 1);
  const std::vector<std::pair<int, double>> two{{1, 0.5}, {3, 0.5}};
  const auto d = LoopDistribution::empirical(two);
  CHECK(d.mean() == 2.0);
  CHECK(d.cond_remaining_mean(1) == 2.0);
  CHECK(d.pmf(2) == 0.0);
  const std::vector<std::pair<int, double>> dup{{2, 0.3}, {2, 0.7}};
  CHECK_THROWS_AS(LoopDistribution::empirical(dup), Error);
  const std::vector<std::pair<int, double>> zero_k{{0, 1.0}};
  CHECK_THROWS_AS(LoopDistribution::empirical(zero_k), Error);
  const std::vector<std::pair<int, double>> short_sum{{1, 0.5}, {2, 0.4}};
  CHECK_THROWS_AS(LoopDistribution::empirical(short_sum), Error);
  const std::vector<std::pair<int, double>> halves{{1, 0.5}, {2, 0.5}};
  CHECK(LoopDistribution::empirical(halves).hazard(1) == 1.0);
}

TEST_CASE("hazards and remaining means") {
  const auto g = LoopDistribution::geometric(0.3);
  for (int k = 0; k < g.max_support() - 1; ++k) CHECK(g.hazard(k) == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(g.hazard(g.max_support() - 1) == doctest::Approx(1.0));
  CHECK(LoopDistribution::geometric(0.5).cond_remaining_mean(4) == doctest::Approx(2.0).epsilon(1e-6));
  const auto det = LoopDistribution::deterministic(2);
  CHECK(det.hazard(0) == 0.0);
  CHECK(det.hazard(1) == 1.0);
}

TEST_CASE("NBUE classification") {
  CHECK(LoopDistribution::geometric(0.4).is_nbue());
  CHECK(LoopDistribution::deterministic(5).is_nbue());
  const std::vector<std::pair<int, double>> heavy{{1, 0.9}, {100, 0.1}};
  const auto d = LoopDistribution::empirical(heavy);
  // oracle: at x = 1 only 100 survives, remaining mean 99 against E[Y] = 10.9
  CHECK(d.mean() == doctest::Approx(10.9));
  CHECK(d.cond_remaining_mean(1) == doctest::Approx(99.0));
  CHECK_FALSE(d.is_nbue());
}

TEST_CASE("NBUE families have scv at most one") {
  for (int L : {1, 2, 3}) {
    for (int step = 2; step <= 9; ++step) {
      const double q = step / 10.0;
      for (const auto& d : {LoopDistribution::negative_binomial(L, q), LoopDistribution::consecutive_success(L, q)}) {
        CHECK(d.is_nbue());
        CHECK(d.scv() <= 1.0 + 1e-6);
        CHECK(mass_sum(d) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("truncate") {
  const auto det = LoopDistribution::deterministic(3).truncate(1e-9);
  CHECK(det.max_support() == 3);
  CHECK(det.truncation_tail() == 0.0);
  const auto g = LoopDistribution::geometric(0.5, 1e-15).truncate(0.25);
  CHECK(g.max_support() == 2);
  CHECK(g.pmf(1) == doctest::Approx(0.5));
  CHECK(g.pmf(2) == doctest::Approx(0.5));
  CHECK(g.truncation_tail() >= 0.25 - 1e-12);
  const auto g30 = LoopDistribution::geometric(0.5, 1e-15).truncate(1e-9);
  CHECK(g30.max_support() == 30);
  CHECK(mass_sum(g30) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampling") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) CHECK(LoopDistribution::deterministic(4).sample(rng) == 4);
  for (int i = 0; i < 100; ++i) CHECK(LoopDistribution::geometric(1.0).sample(rng) == 1);
  Rng a(99), b(99);
  const auto g = LoopDistribution::geometric(0.5);
  for (int i = 0; i < 100; ++i) CHECK(g.sample(a) == g.sample(b));
}

TEST_CASE("sample histogram within 3 sigma of the pmf") {
  const auto g = LoopDistribution::geometric(0.5);
  constexpr int n = 1'000'000;
  Rng rng(2024);
  std::map<int, int> counts;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int y = g.sample(rng);
    ++counts[y];
    sum += y;
  }
  CHECK(std::abs(sum / n - g.mean()) < 0.01);
  for (const auto& [k, p] : g.support()) {
    const double expected = n * p;
    const double sigma = std::sqrt(n * p * (1.0 - p));
    if (expected < 5.0) continue;  // normal band meaningless for tiny cells
    CHECK(std::abs(counts[k] - expected) <= 3.0 * sigma + 1.0);
  }
}

TEST_CASE("MHR family: geometric jobs with constant tables") {
  std::vector<LoopDistribution> dists{LoopDistribution::geometric(0.3), LoopDistribution::geometric(0.6)};
  MhrFamilySpec spec;
  spec.base_functions = {std::vector<double>(80, 0.3), std::vector<double>(80, 0.6)};
  spec.direction = Monotonicity::non_increasing;
  spec.function_index = {0, 1};
  spec.offsets = {0, 0};
  CHECK(check_mhr_family(dists, spec));

  // swapped assignment: the tables no longer match the hazards
  spec.function_index = {1, 0};
  CHECK_FALSE(check_mhr_family(dists, spec));

  // tables in the wrong order violate range separation
  spec.base_functions = {std::vector<double>(80, 0.6), std::vector<double>(80, 0.3)};
  spec.function_index = {1, 0};
  CHECK_FALSE(check_mhr_family(dists, spec));

  spec.base_functions = {std::vector<double>(5, 0.3), std::vector<double>(5, 0.6)};
  spec.function_index = {0, 1};
  CHECK_THROWS_AS(check_mhr_family(dists, spec), Error);
}

TEST_CASE("MHR family: deterministic jobs share one step table") {
  const std::vector<int> loops{1, 2, 4};
  const int ymax = 4;
  std::vector<LoopDistribution> dists;
  for (int l : loops) dists.push_back(LoopDistribution::deterministic(l));
  MhrFamilySpec spec;
  // hazard of a job needing L loops is 1 exactly at k = L - 1, which lands on
  // index Y_max - 1 after the shift x_j = Y_max - L
  std::vector<double> f(ymax, 0.0);
  f[ymax - 1] = 1.0;
  spec.base_functions = {f};
  spec.direction = Monotonicity::non_decreasing;
  spec.function_index = {0, 0, 0};
  for (int l : loops) spec.offsets.push_back(ymax - l);
  CHECK(check_mhr_family(dists, spec));
  spec.direction = Monotonicity::non_increasing;
  CHECK_FALSE(check_mhr_family(dists, spec));
}
