#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smbp {

// absolute tolerance used for every capacity feasibility check
constexpr double kFeasTol = 1e-9;

struct InstanceMeta {
  std::string case_tag;  // "G", "H" or "D"
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

/**
 * A bin packing instance whose bin load is the submodular function
 *   f(S) = sum_{i in S} a_i + sigma * sqrt(sum_{i in S} b_i).
 * sigma = 0 recovers classical bin packing.
 */
struct SmbpInstance {
  int n = 0;
  double capacity = 0.0;
  double sigma = 0.0;
  std::vector<double> a;
  std::vector<double> b;
  std::optional<InstanceMeta> meta;
};

// f(S) for an item subset; items must be valid indices
double capacity_usage(const SmbpInstance& inst, const std::vector<int>& items);

// f(S + i) - f(S); nonnegative and nonincreasing in S (submodularity)
double incremental_usage(const SmbpInstance& inst, double a_sum, double b_sum,
                         int item);

bool is_feasible_column(const SmbpInstance& inst,
                        const std::vector<int>& items,
                        double feas_tol = kFeasTol);

/**
 * A packing pattern: a sorted set of item indices plus its cached load.
 * Columns are the master problem variables in the set cover formulation.
 */
struct Column {
  std::vector<int> items;  // strictly increasing
  double usage = 0.0;
};

Column make_column(const SmbpInstance& inst, std::vector<int> items);

// throws std::invalid_argument with a description when fields are
// inconsistent (sizes, negative data, singleton-infeasible item, ...)
void validate_instance(const SmbpInstance& inst);

}  // namespace smbp
