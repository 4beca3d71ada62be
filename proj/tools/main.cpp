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

// reentry: command-line front end for the reentrant flow shop library.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reentry/error.hpp"
#include "reentry/evaluation.hpp"
#include "reentry/exact.hpp"
#include "reentry/experiments.hpp"
#include "reentry/instance_io.hpp"
#include "reentry/policy.hpp"
#include "reentry/reduction.hpp"
#include "reentry/rng.hpp"
#include "reentry/simulator.hpp"

namespace {

using namespace reentry;

std::vector<int> parse_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error, "bad integer '" + item + "' in list '" + text + "'");
    }
  }
  return out;
}

ParallelRule parse_parallel_rule(const std::string& text) {
  for (auto r : {ParallelRule::lept, ParallelRule::sept, ParallelRule::wsept, ParallelRule::preemptive_lept,
                 ParallelRule::preemptive_sept}) {
    if (to_string(r) == text) return r;
  }
  throw Error(ErrorCode::parse_error, "unknown parallel rule '" + text + "'");
}

// Writes to `path`, or to stdout when the path is "-".
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  if (path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_parameter, "cannot open " + path + " for writing");
  write(out);
}

void print_objectives(const ScheduleTrace& trace, std::span<const double> weights) {
  std::cout << "job,completion\n";
  for (const auto& j : trace.jobs) std::cout << j.id << ',' << format_real(j.completion) << '\n';
  std::cout << "cmax " << format_real(objective_value(trace, weights, Objective::makespan())) << '\n';
  std::cout << "sumc " << format_real(objective_value(trace, weights, Objective::total_completion())) << '\n';
  std::cout << "sumwc " << format_real(objective_value(trace, weights, Objective::total_weighted_completion()))
            << '\n';
}

int cmd_simulate(const std::string& instance, const std::string& policy_name, std::uint64_t seed,
                 const std::string& realization, const std::string& trace_path) {
  const auto any = load_instance(instance);
  ScheduleTrace trace;
  std::vector<double> weights;
  if (const auto* fs = std::get_if<FlowShopInstance>(&any)) {
    Realization y;
    if (!realization.empty()) {
      y.loops = parse_list(realization);
    } else {
      Rng rng(seed);
      y = sample_realization(*fs, rng);
    }
    const PriorityPolicy policy(PriorityRule::parse(policy_name), *fs);
    trace = simulate_flow_shop(*fs, policy, y);
    weights = fs->weights();
  } else {
    const auto& par = std::get<ParallelInstance>(any);
    Realization y;
    if (!realization.empty()) {
      y.loops = parse_list(realization);
    } else {
      Rng rng(seed);
      for (const auto& j : par.jobs) {
        y.loops.push_back(j.is_deterministic() ? 0 : std::get<LoopDistribution>(j.processing).sample(rng));
      }
      y.seed = seed;
    }
    trace = simulate_parallel_arrivals(par, parse_parallel_rule(policy_name), y);
    weights = par.weights();
  }
  print_objectives(trace, weights);
  if (!trace_path.empty()) emit(trace_path, [&](std::ostream& out) { write_trace_csv(out, trace); });
  return 0;
}

int cmd_reduce(const std::string& instance, int k, const std::string& out_path) {
  const auto aux = build_auxiliary(load_flow_shop(instance), k);
  const auto text = dump_instance(aux);
  emit(out_path, [&](std::ostream& out) { out << text; });
  return 0;
}

int cmd_verify_identity(const std::string& instance, const std::string& policy_name, int trials,
                        std::uint64_t seed) {
  const auto inst = load_flow_shop(instance);
  const PriorityPolicy policy(PriorityRule::parse(policy_name), inst);
  int failures = 0;
  std::cout << "trial,realization,flow_makespan,induced_makespans,identity,formula,makespan\n";
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const auto y = sample_realization(inst, rng);
    std::string status_identity = "pass";
    std::string status_formula = "pass";
    std::string status_makespan = "pass";
    std::string induced;
    long long flow_makespan = 0;
    try {
      const auto report = verify_identity(inst, policy, y);
      flow_makespan = report.flow_makespan;
      for (std::size_t k = 0; k < report.induced_makespans.size(); ++k) {
        induced += (k ? ";" : "") + std::to_string(report.induced_makespans[k]);
      }
      for (const auto& j : report.jobs) {
        if (!j.identity_holds) status_identity = "FAIL";
        if (!j.formula_holds) status_formula = "FAIL";
      }
      if (!report.makespan_holds) status_makespan = "FAIL";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::induced_infeasibility) throw;
      status_identity = status_formula = status_makespan = "FAIL";
      induced = e.detail();
    }
    std::string loops;
    for (std::size_t j = 0; j < y.loops.size(); ++j) loops += (j ? ";" : "") + std::to_string(y.loops[j]);
    const bool ok = status_identity == "pass" && status_formula == "pass" && status_makespan == "pass";
    failures += ok ? 0 : 1;
    std::cout << t << ',' << loops << ',' << flow_makespan << ',' << induced << ',' << status_identity << ','
              << status_formula << ',' << status_makespan << '\n';
  }
  std::cout << (failures == 0 ? "PASS" : "FAIL") << ": " << trials - failures << "/" << trials
            << " realizations satisfy the completion-time identity\n";
  return failures == 0 ? 0 : 1;
}

const char* status_name(JobStatus::Kind kind) {
  switch (kind) {
    case JobStatus::Kind::done: return "done";
    case JobStatus::Kind::waiting: return "waiting";
    case JobStatus::Kind::in_pipeline: return "in_pipeline";
  }
  return "?";
}

int cmd_optimal(const std::string& instance, const std::string& objective, const std::string& decisions_path,
                bool no_collapse, const std::string& policy_class) {
  const auto inst = load_flow_shop(instance);
  MdpOptions options;
  options.collapse_memoryless = !no_collapse;
  if (policy_class == "non-interruptive") {
    options.policy_class = PolicyClass::non_interruptive;
  } else if (policy_class != "all") {
    throw Error(ErrorCode::invalid_parameter, "unknown policy class '" + policy_class + "'");
  }
  options.record_decisions = !decisions_path.empty();
  const auto sol = optimal_expected(inst, Objective::parse(objective), options);
  std::cout << "optimal " << format_real(sol.value) << '\n'
            << "states " << sol.states << '\n'
            << "collapsed " << (sol.collapsed ? "yes" : "no") << '\n'
            << "truncated_mass " << format_real(sol.truncated_mass) << '\n';
  if (!decisions_path.empty()) {
    std::vector<std::pair<std::uint64_t, int>> sorted(sol.decisions.begin(), sol.decisions.end());
    std::sort(sorted.begin(), sorted.end());
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& [code, action] : sorted) {
      nlohmann::ordered_json state = nlohmann::ordered_json::array();
      for (const auto& js : sol.decode_state(code).jobs) {
        state.push_back({{"status", status_name(js.kind)}, {"loops_done", js.loops_done}, {"position", js.position}});
      }
      out.push_back({{"state", state}, {"job", action == 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(action)}});
    }
    emit(decisions_path, [&](std::ostream& os) { os << out.dump(2) << '\n'; });
  }
  return 0;
}

int cmd_exact_eval(const std::string& instance, const std::string& policy_name, const std::string& objective,
                   const std::string& method, unsigned threads) {
  const auto inst = load_flow_shop(instance);
  const PriorityPolicy policy(PriorityRule::parse(policy_name), inst);
  const auto obj = Objective::parse(objective);
  double value = 0.0;
  if (method == "enumerate") {
    EnumerationOptions options;
    options.threads = threads;
    value = evaluate_policy_exact(inst, policy, obj, options);
  } else if (method == "mdp") {
    MdpOptions options;
    options.record_decisions = false;
    value = evaluate_policy_mdp(inst, policy, obj, options);
  } else {
    throw Error(ErrorCode::invalid_parameter, "unknown method '" + method + "'");
  }
  std::cout << policy.name() << ' ' << obj.name() << ' ' << format_real(value) << '\n';
  return 0;
}

int cmd_mc(const std::string& instance, const std::string& policy_name, const std::string& objective,
           std::size_t n, std::uint64_t seed, const std::string& csv, unsigned threads) {
  const auto inst = load_flow_shop(instance);
  const PriorityPolicy policy(PriorityRule::parse(policy_name), inst);
  const auto report = mc_estimate(inst, policy, Objective::parse(objective), n, seed, threads);
  const std::vector<McReport> reports{report};
  write_mc_csv(std::cout, reports);
  if (report.approximate()) std::cout << "note: fewer than 1000 samples; the interval is approximate\n";
  if (!csv.empty()) emit(csv, [&](std::ostream& out) { write_mc_csv(out, reports); });
  return 0;
}

int cmd_experiments(const std::string& which, const ExperimentConfig& config, const std::string& csv_dir,
                    const std::string& json_dir) {
  const auto results = run_experiments(which, config);
  bool ok = true;
  for (const auto& r : results) {
    print_summary(std::cout, r);
    if (!csv_dir.empty()) save_csv(csv_dir, r);
    if (!json_dir.empty()) save_json(json_dir, r);
    ok = ok && r.passed();
  }
  std::cout << (ok ? "all anchored checks passed" : "some anchored checks FAILED") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reentrant flow shop scheduling with stochastic loop counts"};
  app.require_subcommand(1);

  std::string instance;
  std::string policy = "wlel";
  std::string objective = "sumwc";
  std::string realization;
  std::string trace;
  std::string out = "-";
  std::string decisions;
  std::string policy_class = "all";
  std::string method = "enumerate";
  std::string csv;
  std::string json;
  std::uint64_t seed = 1;
  int k = 1;
  int trials = 1000;
  std::size_t n = 100000;
  unsigned threads = 1;
  bool no_collapse = false;
  std::optional<double> tolerance;
  std::string which = "all";

  auto* sim = app.add_subcommand("simulate", "Simulate one realization and report completion times");
  sim->add_option("--instance", instance, "Instance JSON file")->required();
  sim->add_option("--policy", policy, "Flow-shop rule (mel, lel, wlel, merl, lerl, lvf, custom:<file>) or parallel rule");
  sim->add_option("--seed", seed, "Seed used when no realization is given");
  sim->add_option("--realization", realization, "Comma-separated loop counts, one per job");
  sim->add_option("--trace", trace, "Trace CSV output ('-' for stdout)");

  auto* red = app.add_subcommand("reduce", "Write auxiliary parallel instance I_k");
  red->add_option("--instance", instance, "Flow-shop instance JSON file")->required();
  red->add_option("--k", k, "Auxiliary index in [1, m]")->required();
  red->add_option("--out", out, "Output JSON ('-' for stdout)");

  auto* ver = app.add_subcommand("verify-identity", "Check the completion-time identity on sampled realizations");
  ver->add_option("--instance", instance, "Flow-shop instance JSON file")->required();
  ver->add_option("--policy", policy, "Priority rule");
  ver->add_option("--trials", trials, "Number of sampled realizations")->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed, "Master seed");

  auto* opt = app.add_subcommand("optimal", "Optimal expected objective by backward induction");
  opt->add_option("--instance", instance, "Flow-shop instance JSON file")->required();
  opt->add_option("--objective", objective, "cmax, sumc or sumwc");
  opt->add_option("--decisions", decisions, "Write the optimal decision table as JSON");
  opt->add_flag("--no-collapse", no_collapse, "Keep loop counts in the state of geometric jobs");
  opt->add_option("--class", policy_class, "all or non-interruptive");

  auto* ex = app.add_subcommand("exact-eval", "Exact expected objective of a priority rule");
  ex->add_option("--instance", instance, "Flow-shop instance JSON file")->required();
  ex->add_option("--policy", policy, "Priority rule");
  ex->add_option("--objective", objective, "cmax, sumc or sumwc");
  ex->add_option("--method", method, "enumerate or mdp");
  ex->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of a priority rule");
  mc->add_option("--instance", instance, "Flow-shop instance JSON file")->required();
  mc->add_option("--policy", policy, "Priority rule");
  mc->add_option("--objective", objective, "cmax, sumc or sumwc");
  mc->add_option("--n", n, "Number of replications")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  mc->add_option("--seed", seed, "Master seed");
  mc->add_option("--csv", csv, "CSV output file");
  mc->add_option("--threads", threads, "Worker threads (0 = all cores)");

  ExperimentConfig config;
  auto* exp = app.add_subcommand("experiments", "Run the scripted experiments");
  exp->add_option("which", which, "all, golden, alpha-half, lvf-merl, optimality or ratios")
      ->check(CLI::IsMember({"all", "golden", "alpha-half", "lvf-merl", "optimality", "ratios"}));
  exp->add_option("--seed", config.seed, "Master seed");
  exp->add_option("--csv", csv, "Directory for CSV output");
  exp->add_option("--json", json, "Directory for JSON output");
  exp->add_option("--tolerance", tolerance, "Override the tolerance of every equality check");
  exp->add_option("--threads", config.threads, "Worker threads (0 = all cores); output does not depend on it");
  exp->add_option("--epsilon", config.lvf_epsilon, "Success-probability offset of the LVF/MERL instance");
  exp->add_option("--mc-samples", config.mc_samples, "Replications of the paired Monte Carlo comparison");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(instance, policy, seed, realization, trace);
    if (red->parsed()) return cmd_reduce(instance, k, out);
    if (ver->parsed()) return cmd_verify_identity(instance, policy, trials, seed);
    if (opt->parsed()) return cmd_optimal(instance, objective, decisions, no_collapse, policy_class);
    if (ex->parsed()) return cmd_exact_eval(instance, policy, objective, method, threads);
    if (mc->parsed()) return cmd_mc(instance, policy, objective, n, seed, csv, threads);
    if (exp->parsed()) {
      config.tolerance = tolerance;
      return cmd_experiments(which, config, csv, json);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
