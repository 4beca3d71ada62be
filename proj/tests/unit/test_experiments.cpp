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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "reentry/error.hpp"
#include "reentry/experiments.hpp"

using namespace reentry;

namespace {

const Check& find_check(const ExperimentResult& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  FAIL("missing check " << name);
  return r.checks.front();
}

std::string checks_csv(const ExperimentResult& r) {
  std::ostringstream out;
  write_checks_csv(out, r);
  write_data_csv(out, r.data);
  return out.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("check relations") {
  CHECK(evaluate(make_check("a", 1.0, 1.0, 0.0, Relation::within, "s")));
  CHECK_FALSE(evaluate(make_check("a", 1.1, 1.0, 0.05, Relation::within, "s")));
  CHECK(evaluate(make_check("a", 1.1, 1.0, 0.2, Relation::at_most, "s")));
  CHECK_FALSE(evaluate(make_check("a", 1.0, 1.0, 0.0, Relation::less_than, "s")));
  CHECK(evaluate(make_check("a", 2.0, 1.0, 0.0, Relation::greater_than, "s")));
  CHECK(make_check("a", 2.0, 1.0, 0.0, Relation::greater_than, "s").pass);
}

TEST_CASE("golden ratio experiment") {
  ExperimentConfig cfg;
  cfg.golden_ks = {1, 2, 10, 100, 1000};
  const auto r = run_golden_ratio(cfg);
  CHECK(r.id == "golden");
  for (int k : {1, 2, 10, 100, 1000}) CHECK(find_check(r, "closed_form_ratio_k" + std::to_string(k)).pass);
  CHECK(find_check(r, "limit_k1000").pass);
  CHECK(find_check(r, "limit_k1000").computed == doctest::Approx((3 + std::sqrt(5.0)) / 4).epsilon(1e-3));
  CHECK(find_check(r, "limit_exceeds_kawaguchi_kyan").pass);
  CHECK(find_check(r, "monotone_in_k").pass);
  // the closed form at k = 1 sits below (1 + sqrt 2) / 2; only the limit exceeds it
  const auto& k1 = find_check(r, "exceeds_kawaguchi_kyan_k1");
  CHECK_FALSE(k1.anchored);
  CHECK(k1.computed < (1 + std::sqrt(2.0)) / 2);
  CHECK(r.passed());
}

TEST_CASE("golden closed form from first principles at k = 1") {
  // worst WSPT: unit job first on the time-0 machine, then the large job
  // behind it; optimum: large job alone on the time-0 machine.
  const double phi = std::numbers::phi;
  ExperimentConfig cfg;
  cfg.golden_ks = {1};
  const auto r = run_golden_ratio(cfg);
  CHECK(find_check(r, "closed_form_ratio_k1").computed ==
        doctest::Approx((phi * (1 + phi) + 1) / (phi * phi + 2)).epsilon(1e-12));
}

TEST_CASE("alpha-half experiment") {
  const auto r = run_alpha_half({});
  CHECK(find_check(r, "worst_wspt").computed == 35.5);
  CHECK(find_check(r, "optimum").computed == 26.5);
  CHECK(find_check(r, "ratio_above_4_3").pass);
  CHECK(r.passed());
}

TEST_CASE("LVF vs MERL experiment") {
  ExperimentConfig cfg;
  cfg.mc_samples = 20'000;
  const auto r = run_lvf_vs_merl(cfg);
  const int lvf[] = {6, 7, 8, 9};
  const int merl[] = {6, 7, 8, 10};
  for (int y = 1; y <= 4; ++y) {
    CHECK(find_check(r, "lvf_makespan_y3_" + std::to_string(y)).computed == lvf[y - 1]);
    CHECK(find_check(r, "merl_makespan_y3_" + std::to_string(y)).computed == merl[y - 1]);
  }
  CHECK(find_check(r, "exact_lvf_below_merl").pass);
  CHECK(r.passed());
  CHECK_THROWS_AS(lvf_merl_instance(0.6), Error);
}

TEST_CASE("optimality sweep on a reduced grid") {
  OptimalityGrid grid;
  grid.jobs = {1, 2};
  grid.machines = {1, 2};
  grid.geometric_q = {0.3, 0.8};
  grid.det_jobs = {1, 2, 3};
  grid.det_loops = {1, 2};
  const auto results = run_optimality_sweep({}, grid);
  REQUIRE(results.size() == 2);
  CHECK(results[0].id == "optimality-geometric");
  CHECK(results[1].id == "optimality-deterministic");
  for (const auto& r : results) CHECK(r.passed());
  for (const auto& c : results[1].checks) {
    if (c.name.rfind("max_gap", 0) == 0) CHECK(c.computed == 0.0);
  }
}

TEST_CASE("ratio bounds on a reduced scan") {
  ExperimentConfig cfg;
  cfg.wspt_trials = 40;
  cfg.wlel_trials = 10;
  cfg.point_mass_trials = 10;
  const auto results = run_ratio_bounds(cfg);
  REQUIRE(results.size() == 3);
  for (const auto& r : results) CHECK(r.passed());
}

TEST_CASE("random generators respect their ranges") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_binary_arrival_instance(rng);
    CHECK(p.job_count() <= 8);
    CHECK(p.machine_count() <= 4);
    for (double a : p.arrivals) CHECK((a == 0.0 || a == 1.0));
    for (const auto& j : p.jobs) {
      CHECK(j.duration() <= 10.0);
      CHECK(j.duration() == std::floor(j.duration()));
    }
    const auto f = random_stochastic_flow_shop(rng);
    CHECK(validate(f).empty());
    CHECK(f.machines <= 3);
    const auto d = random_point_mass_flow_shop(rng);
    CHECK(validate(d).empty());
    for (const auto& j : d.jobs) CHECK(j.dist.scv() == 0.0);
  }
}

TEST_CASE("tolerance override applies to within checks") {
  ExperimentConfig cfg;
  cfg.golden_ks = {1};
  cfg.tolerance = 0.5;
  const auto r = run_golden_ratio(cfg);
  CHECK(find_check(r, "closed_form_ratio_k1").tolerance == 0.5);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  ExperimentConfig one;
  one.wspt_trials = 30;
  one.wlel_trials = 6;
  one.point_mass_trials = 6;
  one.threads = 1;
  ExperimentConfig many = one;
  many.threads = 4;
  const auto a = run_ratio_bounds(one);
  const auto b = run_ratio_bounds(many);
  const auto c = run_ratio_bounds(one);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(checks_csv(a[i]) == checks_csv(b[i]));
    CHECK(checks_csv(a[i]) == checks_csv(c[i]));
    CHECK(to_json(a[i]) == to_json(b[i]));
  }
}

TEST_CASE("files and json") {
  const auto dir = std::filesystem::temp_directory_path() / "reentry_experiment_out";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto r = run_alpha_half({});
  save_csv(dir, r);
  save_json(dir, r);
  const auto checks = slurp(dir / "alpha-half.csv");
  CHECK(checks.rfind("experiment,check,computed,reference,tolerance,relation,anchored,pass,source,note\n", 0) == 0);
  CHECK(std::filesystem::exists(dir / "alpha-half_data.csv"));
  const auto doc = nlohmann::json::parse(slurp(dir / "alpha-half.json"));
  CHECK(doc.at("id") == "alpha-half");
  CHECK(doc.at("checks").size() == r.checks.size());
  std::ostringstream summary;
  print_summary(summary, r);
  CHECK(summary.str().find("worst_wspt") != std::string::npos);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(run_experiments("nope", {}), Error);
}
