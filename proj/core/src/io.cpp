#include "smbp/io.hpp"

#include <fstream>
#include <stdexcept>

namespace smbp {

namespace {

using nlohmann::json;

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open " + path.string());
  }
  json j;
  in >> j;
  return j;
}

void store_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument(std::string("missing numeric field '") + key +
                                "'");
  }
  return j.at(key).get<double>();
}

std::vector<double> require_array(const json& j, const char* key, int n) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw std::invalid_argument(std::string("missing array field '") + key +
                                "'");
  }
  auto v = j.at(key).get<std::vector<double>>();
  if (static_cast<int>(v.size()) != n) {
    throw std::invalid_argument(std::string("field '") + key +
                                "' must have length n");
  }
  return v;
}

}  // namespace

json instance_to_json(const SmbpInstance& inst) {
  json j;
  j["n"] = inst.n;
  j["capacity"] = inst.capacity;
  j["sigma"] = inst.sigma;
  j["a"] = inst.a;
  j["b"] = inst.b;
  if (inst.meta) {
    j["meta"] = {{"case", inst.meta->case_tag},
                 {"alpha", inst.meta->alpha},
                 {"seed", inst.meta->seed}};
  }
  return j;
}

SmbpInstance instance_from_json(const json& j) {
  SmbpInstance inst;
  inst.n = static_cast<int>(require_number(j, "n"));
  inst.capacity = require_number(j, "capacity");
  inst.sigma = require_number(j, "sigma");
  inst.a = require_array(j, "a", inst.n);
  inst.b = require_array(j, "b", inst.n);
  if (j.contains("meta")) {
    const json& m = j.at("meta");
    InstanceMeta meta;
    meta.case_tag = m.value("case", std::string());
    meta.alpha = m.value("alpha", 0.0);
    meta.seed = m.value("seed", static_cast<std::uint64_t>(0));
    inst.meta = meta;
  }
  validate_instance(inst);
  return inst;
}

void write_instance(const std::filesystem::path& path,
                    const SmbpInstance& inst) {
  store_json(path, instance_to_json(inst));
}

SmbpInstance read_instance(const std::filesystem::path& path) {
  return instance_from_json(load_json(path));
}

json solution_to_json(const SolutionFile& sol) {
  json j;
  j["objective"] = sol.objective;
  j["dual_bound"] = sol.dual_bound;
  j["bins"] = sol.bins;
  j["stats"] = sol.stats;
  return j;
}

SolutionFile solution_from_json(const json& j) {
  SolutionFile sol;
  sol.objective = static_cast<long>(require_number(j, "objective"));
  sol.dual_bound = require_number(j, "dual_bound");
  if (!j.contains("bins") || !j.at("bins").is_array()) {
    throw std::invalid_argument("missing array field 'bins'");
  }
  sol.bins = j.at("bins").get<std::vector<std::vector<int>>>();
  if (j.contains("stats")) sol.stats = j.at("stats");
  return sol;
}

void write_solution(const std::filesystem::path& path,
                    const SolutionFile& sol) {
  store_json(path, solution_to_json(sol));
}

SolutionFile read_solution(const std::filesystem::path& path) {
  return solution_from_json(load_json(path));
}

json knapsack_to_json(const KnapsackFile& kp) {
  json j = instance_to_json(kp.instance);
  j["profits"] = kp.profits;
  json conf = json::array();
  for (const auto& [x, y] : kp.conflicts) conf.push_back({x, y});
  j["conflicts"] = conf;
  return j;
}

KnapsackFile knapsack_from_json(const json& j) {
  KnapsackFile kp;
  kp.instance = instance_from_json(j);
  kp.profits = require_array(j, "profits", kp.instance.n);
  if (j.contains("conflicts")) {
    for (const auto& pair : j.at("conflicts")) {
      if (!pair.is_array() || pair.size() != 2) {
        throw std::invalid_argument("conflicts must be [i, j] pairs");
      }
      int x = pair[0].get<int>();
      int y = pair[1].get<int>();
      if (x < 0 || y < 0 || x >= kp.instance.n || y >= kp.instance.n ||
          x == y) {
        throw std::invalid_argument("conflict pair out of range");
      }
      kp.conflicts.emplace_back(std::min(x, y), std::max(x, y));
    }
  }
  return kp;
}

void write_knapsack(const std::filesystem::path& path, const KnapsackFile& kp) {
  store_json(path, knapsack_to_json(kp));
}

KnapsackFile read_knapsack(const std::filesystem::path& path) {
  return knapsack_from_json(load_json(path));
}

}  // namespace smbp
