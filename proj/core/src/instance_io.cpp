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

#include "reentry/instance_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "reentry/error.hpp"

namespace reentry {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::parse_error, "field '" + path + "': " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

double get_number(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_number()) fail(path + "." + key, "expected a number, got " + std::string(v.type_name()));
  return v.get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer, got " + std::string(v.type_name()));
  return v.get<int>();
}

double get_epsilon(const json& obj, const std::string& path) {
  return obj.contains("epsilon") ? get_number(obj, "epsilon", path) : kDefaultTruncation;
}

LoopDistribution parse_dist(const json& d, const std::string& path) {
  const auto& kind_node = field(d, "kind", path);
  if (!kind_node.is_string()) fail(path + ".kind", "expected a string");
  const auto kind = kind_node.get<std::string>();
  try {
    if (kind == "geometric") return LoopDistribution::geometric(get_number(d, "q", path), get_epsilon(d, path));
    if (kind == "deterministic") return LoopDistribution::deterministic(get_int(d, "L", path));
    if (kind == "negbin") {
      return LoopDistribution::negative_binomial(get_int(d, "L", path), get_number(d, "q", path),
                                                 get_epsilon(d, path));
    }
    if (kind == "consecutive") {
      return LoopDistribution::consecutive_success(get_int(d, "L", path), get_number(d, "q", path),
                                                   get_epsilon(d, path));
    }
    if (kind == "empirical") {
      const auto& table = field(d, "pmf", path);
      if (!table.is_array()) fail(path + ".pmf", "expected an array of [k, p] pairs");
      std::vector<std::pair<int, double>> entries;
      for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& e = table[i];
        const std::string ep = path + ".pmf[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number()) {
          fail(ep, "expected [integer k, number p]");
        }
        entries.emplace_back(e[0].get<int>(), e[1].get<double>());
      }
      return LoopDistribution::empirical(entries);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse_error) throw;
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown kind '" + kind + "'");
}

json dump_dist(const LoopDistribution& dist) {
  const auto& p = dist.params();
  json d;
  switch (p.kind) {
    case DistKind::geometric:
      d = {{"kind", "geometric"}, {"q", p.success_prob}, {"epsilon", p.epsilon}};
      break;
    case DistKind::deterministic:
      d = {{"kind", "deterministic"}, {"L", p.required_loops}};
      break;
    case DistKind::negative_binomial:
      d = {{"kind", "negbin"}, {"L", p.required_loops}, {"q", p.success_prob}, {"epsilon", p.epsilon}};
      break;
    case DistKind::consecutive_success:
      d = {{"kind", "consecutive"}, {"L", p.required_loops}, {"q", p.success_prob}, {"epsilon", p.epsilon}};
      break;
    case DistKind::empirical: {
      json table = json::array();
      for (auto [k, prob] : p.table) table.push_back({k, prob});
      d = {{"kind", "empirical"}, {"pmf", table}};
      break;
    }
  }
  return d;
}

template <typename Job>
void parse_common(const json& j, Job& job, const std::string& path) {
  job.id = get_int(j, "id", path);
  job.weight = j.contains("weight") ? get_number(j, "weight", path) : 1.0;
}

void check_valid(const std::vector<std::string>& problems) {
  if (problems.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& p : problems) msg += " " + p + ";";
  throw Error(ErrorCode::parse_error, msg);
}

}  // namespace

AnyInstance parse_instance(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed JSON: ") + e.what());
  }
  const auto& type_node = field(root, "type", "$");
  if (!type_node.is_string()) fail("$.type", "expected a string");
  const auto type = type_node.get<std::string>();
  const auto& jobs = field(root, "jobs", "$");
  if (!jobs.is_array()) fail("$.jobs", "expected an array");

  if (type == "flowshop") {
    FlowShopInstance inst;
    inst.machines = get_int(root, "m", "$");
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const std::string path = "$.jobs[" + std::to_string(i) + "]";
      FlowShopJob job;
      parse_common(jobs[i], job, path);
      job.dist = parse_dist(field(jobs[i], "dist", path), path + ".dist");
      inst.jobs.push_back(std::move(job));
    }
    check_valid(validate(inst));
    return inst;
  }
  if (type == "parallel") {
    ParallelInstance inst;
    const auto& arrivals = field(root, "arrivals", "$");
    if (!arrivals.is_array()) fail("$.arrivals", "expected an array");
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
      if (!arrivals[i].is_number()) fail("$.arrivals[" + std::to_string(i) + "]", "expected a number");
      inst.arrivals.push_back(arrivals[i].get<double>());
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const std::string path = "$.jobs[" + std::to_string(i) + "]";
      ParallelJob job;
      parse_common(jobs[i], job, path);
      if (jobs[i].contains("p")) {
        job.processing = get_number(jobs[i], "p", path);
      } else if (jobs[i].contains("dist")) {
        job.processing = parse_dist(jobs[i]["dist"], path + ".dist");
      } else {
        fail(path, "needs either 'p' or 'dist'");
      }
      inst.jobs.push_back(std::move(job));
    }
    check_valid(validate(inst));
    return inst;
  }
  fail("$.type", "unknown instance type '" + type + "'");
}

std::string dump_instance(const AnyInstance& any) {
  json root;
  json jobs = json::array();
  if (const auto* fs = std::get_if<FlowShopInstance>(&any)) {
    root["type"] = "flowshop";
    root["m"] = fs->machines;
    for (const auto& j : fs->jobs) {
      jobs.push_back({{"id", j.id}, {"weight", j.weight}, {"dist", dump_dist(j.dist)}});
    }
  } else {
    const auto& par = std::get<ParallelInstance>(any);
    root["type"] = "parallel";
    root["arrivals"] = par.arrivals;
    for (const auto& j : par.jobs) {
      json entry = {{"id", j.id}, {"weight", j.weight}};
      if (j.is_deterministic()) {
        entry["p"] = j.duration();
      } else {
        entry["dist"] = dump_dist(std::get<LoopDistribution>(j.processing));
      }
      jobs.push_back(std::move(entry));
    }
  }
  root["jobs"] = std::move(jobs);
  return root.dump(2) + "\n";
}

AnyInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_instance(buffer.str());
  } catch (const Error& e) {
    throw Error(ErrorCode::parse_error, path.string() + ": " + e.what());
  }
}

void save_instance(const AnyInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::parse_error, "cannot write " + path.string());
  out << dump_instance(inst);
}

FlowShopInstance load_flow_shop(const std::filesystem::path& path) {
  auto any = load_instance(path);
  if (auto* fs = std::get_if<FlowShopInstance>(&any)) return std::move(*fs);
  throw Error(ErrorCode::type_error, path.string() + " is not a flow-shop instance");
}

void write_trace_csv(std::ostream& out, const ScheduleTrace& trace) {
  out << "job,loop,start,machine,finish\n";
  for (const auto& j : trace.jobs) {
    for (const auto& op : j.operations) {
      if (trace.kind == TraceKind::flow_shop) {
        for (int i = 1; i <= trace.machines; ++i) {
          out << j.id << ',' << op.loop << ',' << op.start + i - 1 << ',' << i << ',' << op.start + i << '\n';
        }
      } else {
        out << j.id << ',' << op.loop << ',' << op.start << ',' << op.machine << ',' << op.finish << '\n';
      }
    }
  }
}

}  // namespace reentry
