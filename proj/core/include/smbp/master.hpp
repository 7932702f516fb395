#pragma once

#include <map>
#include <vector>

#include "smbp/branching.hpp"
#include "smbp/instance.hpp"
#include "smbp/lp.hpp"

namespace smbp {

struct RmlpSolution {
  double objective = 0.0;
  std::vector<double> duals;   // one per item cover row, nonnegative at opt
  std::vector<double> lambda;  // activity per pooled column
  bool artificial_active = false;
  long iterations = 0;
};

/**
 * Restricted set cover master: min sum lambda_p subject to covering every
 * item at least once.  One LP instance lives across the whole search tree;
 * columns are never removed, only switched off by zeroing their upper bound
 * when they clash with the current branching state.  Artificial identity
 * columns with a large cost keep every restriction feasible, so a warm basis
 * always repairs cheaply after backtracking.
 */
class MasterState {
 public:
  explicit MasterState(const SmbpInstance& inst);

  // pools a feasible column; returns its pool index, or -1 when an identical
  // item set is already pooled.  Throws std::invalid_argument on an
  // infeasible or empty item set.
  int add_column(std::vector<int> items);

  // enables exactly the pooled columns compatible with the branch state
  void apply_branch(const BranchState& branch);

  // solves the current restriction; throws std::runtime_error when the
  // simplex gives up (the restriction itself is always feasible and bounded)
  RmlpSolution solve();

  int num_columns() const { return static_cast<int>(pool_.size()); }
  const Column& column(int pool_index) const { return pool_[pool_index]; }
  const std::vector<Column>& columns() const { return pool_; }
  bool is_active(int pool_index) const { return active_[pool_index] != 0; }
  const SmbpInstance& instance() const { return inst_; }
  double big_cost() const { return big_cost_; }

 private:
  SmbpInstance inst_;
  double big_cost_ = 0.0;
  LpProblem lp_;
  Basis basis_;
  std::vector<Column> pool_;
  std::vector<int> lp_col_;  // pool index -> lp column
  std::vector<char> active_;
  std::map<std::vector<int>, int> index_;
};

}  // namespace smbp
