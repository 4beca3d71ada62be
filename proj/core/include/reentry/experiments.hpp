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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reentry/model.hpp"
#include "reentry/rng.hpp"

namespace reentry {

enum class Relation {
  within,      // |computed - reference| <= tolerance
  at_most,     // computed <= reference + tolerance
  less_than,   // computed < reference
  greater_than // computed > reference
};

std::string to_string(Relation relation);

struct Check {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::within;
  std::string source;  // where the reference number comes from
  std::string note;
  bool anchored = true;  // false for internal sanity checks; they never affect the exit code
  bool pass = false;
};

Check make_check(std::string name, double computed, double reference, double tolerance, Relation relation,
                 std::string source, std::string note = {});
bool evaluate(const Check& check);

/// One plot-ready table per experiment; every cell is already formatted.
struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct ExperimentResult {
  std::string id;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<Check> checks;
  DataTable data;
  std::vector<std::string> notes;

  /// True when every anchored check passes.
  bool passed() const;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  unsigned threads = 1;  // results do not depend on it
  // Replaces the tolerance of every `within` check when set.
  std::optional<double> tolerance;
  double lvf_epsilon = 0.01;
  std::size_t mc_samples = 100'000;
  std::vector<int> golden_ks{1, 2, 3, 5, 10, 100, 1000};
  std::size_t wspt_trials = 1000;
  std::size_t wlel_trials = 200;
  std::size_t point_mass_trials = 100;
};

ExperimentResult run_golden_ratio(const ExperimentConfig& config);
/// Golden-ratio instance: one job with w = p = k * phi, k unit jobs, one
/// machine at time 0 and k machines at time k.
ParallelInstance golden_ratio_instance(int k);

ExperimentResult run_alpha_half(const ExperimentConfig& config);
/// Machines at (0, 0, 1); one job with w = p = 6 and five unit jobs.
ParallelInstance alpha_half_instance();

ExperimentResult run_lvf_vs_merl(const ExperimentConfig& config);
/// m = 2; jobs 1 and 2 need exactly 2 loops; job 3 is geometric(1/2 + epsilon).
FlowShopInstance lvf_merl_instance(double epsilon);

struct OptimalityGrid {
  std::vector<int> jobs{1, 2, 3};
  std::vector<int> machines{1, 2, 3};
  std::vector<double> geometric_q{0.3, 0.5, 0.8};
  double epsilon = 1e-9;
  std::vector<int> det_jobs{1, 2, 3, 4};
  std::vector<int> det_loops{1, 2, 3};
};

/// Returns two results: the geometric grid and the deterministic grid.
std::vector<ExperimentResult> run_optimality_sweep(const ExperimentConfig& config, const OptimalityGrid& grid = {});

/// Returns three results: WSPT under binary arrivals, WLEL on stochastic
/// flow shops, WLEL on point-mass flow shops.
std::vector<ExperimentResult> run_ratio_bounds(const ExperimentConfig& config);

/// Random deterministic instance with arrivals in {0, 1}, integer p <= 10,
/// integer w <= 10, n <= 8 jobs and at most 4 machines.
ParallelInstance random_binary_arrival_instance(Rng& rng);
/// Random flow shop with geometric, negative-binomial and consecutive-success
/// jobs sized for the exact oracles.
FlowShopInstance random_stochastic_flow_shop(Rng& rng);
FlowShopInstance random_point_mass_flow_shop(Rng& rng);

/// Names accepted by run_experiments: all, golden, alpha-half, lvf-merl,
/// optimality, ratios.
std::vector<ExperimentResult> run_experiments(const std::string& which, const ExperimentConfig& config);

void write_checks_csv(std::ostream& out, const ExperimentResult& result);
void write_data_csv(std::ostream& out, const DataTable& table);
std::string to_json(const ExperimentResult& result);
void print_summary(std::ostream& out, const ExperimentResult& result);

/// Writes <id>.csv (checks) and <id>_data.csv into `dir`.
void save_csv(const std::filesystem::path& dir, const ExperimentResult& result);
/// Writes <id>.json into `dir`.
void save_json(const std::filesystem::path& dir, const ExperimentResult& result);

}  // namespace reentry
