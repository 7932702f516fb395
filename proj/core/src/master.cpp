#include "smbp/master.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

namespace smbp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MasterState::MasterState(const SmbpInstance& inst)
    : inst_(inst), big_cost_(10.0 * std::max(1, inst.n)) {
  lp_.sense = ObjSense::Minimize;
  for (int i = 0; i < inst_.n; ++i) lp_.add_row(RowSense::GE, 1.0);
  // artificial identity cover, never switched off
  for (int i = 0; i < inst_.n; ++i) {
    lp_.add_column(big_cost_, 0.0, kInf, {{i, 1.0}});
  }
}

int MasterState::add_column(std::vector<int> items) {
  Column col = make_column(inst_, std::move(items));
  if (col.items.empty()) {
    throw std::invalid_argument("master: empty column");
  }
  if (!is_feasible_column(inst_, col.items)) {
    throw std::invalid_argument("master: infeasible column");
  }
  auto [it, fresh] = index_.try_emplace(col.items, num_columns());
  if (!fresh) return -1;

  std::vector<std::pair<int, double>> entries;
  entries.reserve(col.items.size());
  for (int i : col.items) entries.emplace_back(i, 1.0);
  lp_col_.push_back(lp_.add_column(1.0, 0.0, kInf, entries));
  pool_.push_back(std::move(col));
  active_.push_back(1);
  return num_columns() - 1;
}

void MasterState::apply_branch(const BranchState& branch) {
  for (int p = 0; p < num_columns(); ++p) {
    bool ok = respects_branching(pool_[p].items, branch);
    active_[p] = ok ? 1 : 0;
    lp_.set_bounds(lp_col_[p], 0.0, ok ? kInf : 0.0);
  }
}

RmlpSolution MasterState::solve() {
  LpSolution sol = solve_lp(lp_, basis_.empty() ? nullptr : &basis_);
  if (sol.status != LpStatus::Optimal) {
    // the artificial columns make every restriction feasible and the
    // nonnegative costs keep it bounded, so this is a numerical failure
    throw std::runtime_error("master: rmlp solve failed");
  }
  basis_ = sol.basis;

  RmlpSolution out;
  out.objective = sol.objective;
  out.duals = sol.duals;
  out.iterations = sol.iterations;
  out.lambda.resize(pool_.size());
  for (std::size_t p = 0; p < pool_.size(); ++p) {
    out.lambda[p] = sol.x[lp_col_[p]];
  }
  for (int i = 0; i < inst_.n; ++i) {
    if (sol.x[i] > 1e-7) {
      out.artificial_active = true;
      break;
    }
  }
  return out;
}

}  // namespace smbp
