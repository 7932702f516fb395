#include "smbp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace smbp {

double capacity_usage(const SmbpInstance& inst, const std::vector<int>& items) {
  double a_sum = 0.0;
  double b_sum = 0.0;
  for (int i : items) {
    a_sum += inst.a[i];
    b_sum += inst.b[i];
  }
  return a_sum + inst.sigma * std::sqrt(b_sum);
}

double incremental_usage(const SmbpInstance& inst, double a_sum, double b_sum,
                         int item) {
  const double before = a_sum + inst.sigma * std::sqrt(b_sum);
  const double after =
      a_sum + inst.a[item] + inst.sigma * std::sqrt(b_sum + inst.b[item]);
  return after - before;
}

bool is_feasible_column(const SmbpInstance& inst, const std::vector<int>& items,
                        double feas_tol) {
  return capacity_usage(inst, items) <= inst.capacity + feas_tol;
}

Column make_column(const SmbpInstance& inst, std::vector<int> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  Column col;
  col.usage = capacity_usage(inst, items);
  col.items = std::move(items);
  return col;
}

void validate_instance(const SmbpInstance& inst) {
  if (inst.n <= 0) {
    throw std::invalid_argument("instance: n must be positive");
  }
  if (!(inst.capacity > 0.0)) {
    throw std::invalid_argument("instance: capacity must be positive");
  }
  if (inst.sigma < 0.0) {
    throw std::invalid_argument("instance: sigma must be nonnegative");
  }
  if (static_cast<int>(inst.a.size()) != inst.n ||
      static_cast<int>(inst.b.size()) != inst.n) {
    throw std::invalid_argument("instance: a and b must have length n");
  }
  for (int i = 0; i < inst.n; ++i) {
    if (!(inst.a[i] >= 0.0) || !std::isfinite(inst.a[i])) {
      throw std::invalid_argument("instance: a[" + std::to_string(i) +
                                  "] must be finite and nonnegative");
    }
    if (!(inst.b[i] >= 0.0) || !std::isfinite(inst.b[i])) {
      throw std::invalid_argument("instance: b[" + std::to_string(i) +
                                  "] must be finite and nonnegative");
    }
    const double usage = inst.a[i] + inst.sigma * std::sqrt(inst.b[i]);
    if (usage > inst.capacity + kFeasTol) {
      throw std::invalid_argument("instance: item " + std::to_string(i) +
                                  " does not fit into an empty bin");
    }
  }
}

}  // namespace smbp
