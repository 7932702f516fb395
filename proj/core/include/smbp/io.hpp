#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "smbp/instance.hpp"

namespace smbp {

// Instance file schema:
//   {"n": int, "capacity": float, "sigma": float,
//    "a": [float], "b": [float],
//    "meta": {"case": "G|H|D", "alpha": float, "seed": int}}   (meta optional)
// Doubles survive a write/read cycle bit exactly (shortest round trip
// serialization).  read_* throw std::invalid_argument / nlohmann parse
// errors with a description of the offending field.
nlohmann::json instance_to_json(const SmbpInstance& inst);
SmbpInstance instance_from_json(const nlohmann::json& j);
void write_instance(const std::filesystem::path& path, const SmbpInstance& inst);
SmbpInstance read_instance(const std::filesystem::path& path);

// Solution file schema:
//   {"objective": int, "dual_bound": float, "bins": [[int]], "stats": {...}}
struct SolutionFile {
  long objective = 0;
  double dual_bound = 0.0;
  std::vector<std::vector<int>> bins;
  nlohmann::json stats = nlohmann::json::object();
};

nlohmann::json solution_to_json(const SolutionFile& sol);
SolutionFile solution_from_json(const nlohmann::json& j);
void write_solution(const std::filesystem::path& path, const SolutionFile& sol);
SolutionFile read_solution(const std::filesystem::path& path);

// Knapsack file schema: instance fields plus
//   "profits": [float], "conflicts": [[int, int]]   (conflicts optional)
struct KnapsackFile {
  SmbpInstance instance;
  std::vector<double> profits;
  std::vector<std::pair<int, int>> conflicts;
};

nlohmann::json knapsack_to_json(const KnapsackFile& kp);
KnapsackFile knapsack_from_json(const nlohmann::json& j);
void write_knapsack(const std::filesystem::path& path, const KnapsackFile& kp);
KnapsackFile read_knapsack(const std::filesystem::path& path);

}  // namespace smbp
