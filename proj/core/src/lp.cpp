#include "smbp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace smbp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;   // smallest acceptable pivot magnitude
constexpr double kDirTol = 1e-11;    // treat smaller rates as zero
constexpr double kDegenTol = 1e-10;  // step sizes below this count as degenerate

using NumericalFailure = LpNumericalError;

/**
 * The working state of one simplex run.  Variables are the structural
 * columns followed by one slack per row with coefficient +1, so the slack
 * basis is the identity:
 *   LE row:  slack in [0, +inf)
 *   GE row:  slack in (-inf, 0]
 *   EQ row:  slack fixed at 0
 */
class SimplexEngine {
 public:
  SimplexEngine(const LpProblem& p, const SimplexOptions& opt, bool bland)
      : p_(p),
        opt_(opt),
        bland_(bland),
        n_(p.num_cols()),
        m_(p.num_rows()),
        total_(n_ + m_) {
    cost_.assign(total_, 0.0);
    const double sign = p.sense == ObjSense::Maximize ? -1.0 : 1.0;
    for (int j = 0; j < n_; ++j) cost_[j] = sign * p.obj[j];
    lo_.assign(total_, 0.0);
    up_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = p.lb[j];
      up_[j] = p.ub[j];
      if (lo_[j] > up_[j] + 1e-12) {
        throw std::invalid_argument("lp: column with empty bound interval");
      }
    }
    for (int i = 0; i < m_; ++i) {
      switch (p.row_sense[i]) {
        case RowSense::LE:
          lo_[n_ + i] = 0.0;
          up_[n_ + i] = kInf;
          break;
        case RowSense::GE:
          lo_[n_ + i] = -kInf;
          up_[n_ + i] = 0.0;
          break;
        case RowSense::EQ:
          lo_[n_ + i] = 0.0;
          up_[n_ + i] = 0.0;
          break;
      }
    }
    max_iters_ = opt.max_iters >= 0 ? opt.max_iters
                                    : static_cast<long>(50) * (m_ + n_);
    bland_switch_ = static_cast<long>(3) * (m_ + n_);
  }

  LpSolution run(const Basis* warm) {
    if (!install_warm_basis(warm)) install_cold_basis();
    if (!factorize()) {
      install_cold_basis();
      if (!factorize()) throw NumericalFailure("slack basis singular");
    }
    compute_basic_values();

    LpSolution sol;
    // phase 1: drive the basic bound violations to zero
    const bool feasible = phase1();
    if (iterations_ >= max_iters_) {
      sol.status = LpStatus::IterLimit;
      extract(sol);
      return sol;
    }
    if (!feasible) {
      sol.status = LpStatus::Infeasible;
      extract(sol);
      return sol;
    }
    sol.status = phase2();
    extract(sol);
    return sol;
  }

 private:
  // ---- basis bookkeeping -------------------------------------------------

  bool install_warm_basis(const Basis* warm) {
    if (warm == nullptr || warm->empty()) return false;
    if (warm->n_cols > n_ || warm->n_rows > m_ ||
        static_cast<int>(warm->status.size()) != warm->n_cols + warm->n_rows) {
      return false;
    }
    status_.assign(total_, VarStatus::AtLower);
    for (int j = 0; j < n_; ++j) {
      status_[j] = j < warm->n_cols ? warm->status[j] : VarStatus::AtLower;
    }
    for (int i = 0; i < m_; ++i) {
      status_[n_ + i] = i < warm->n_rows ? warm->status[warm->n_cols + i]
                                         : VarStatus::Basic;
    }
    // repair statuses that stopped matching the current bounds
    int basics = 0;
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::Basic) {
        ++basics;
        continue;
      }
      if (status_[j] == VarStatus::AtLower && lo_[j] == -kInf) {
        status_[j] = VarStatus::AtUpper;
      }
      if (status_[j] == VarStatus::AtUpper && up_[j] == kInf) {
        status_[j] = VarStatus::AtLower;
      }
      if (lo_[j] == -kInf && up_[j] == kInf) return false;
    }
    if (basics != m_) return false;
    rebuild_basic_list();
    return true;
  }

  void install_cold_basis() {
    status_.assign(total_, VarStatus::AtLower);
    for (int j = 0; j < n_; ++j) {
      if (lo_[j] != -kInf) {
        status_[j] = VarStatus::AtLower;
      } else if (up_[j] != kInf) {
        status_[j] = VarStatus::AtUpper;
      } else {
        throw std::invalid_argument("lp: free column unsupported");
      }
    }
    for (int i = 0; i < m_; ++i) status_[n_ + i] = VarStatus::Basic;
    rebuild_basic_list();
  }

  void rebuild_basic_list() {
    basic_.clear();
    basic_.reserve(m_);
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::Basic) basic_.push_back(j);
    }
    pos_of_.assign(total_, -1);
    for (int r = 0; r < m_; ++r) pos_of_[basic_[r]] = r;
  }

  // entries of a column in the equality system
  const std::vector<std::pair<int, double>>& column(int j) {
    if (j < n_) return p_.cols[j];
    slack_col_[0] = {j - n_, 1.0};
    return slack_col_;
  }

  // dense Gauss-Jordan inverse of the basis matrix
  bool factorize() {
    if (m_ == 0) return true;
    std::vector<double> mat(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      for (const auto& [row, val] : column(basic_[r])) {
        mat[static_cast<std::size_t>(row) * m_ + r] = val;
      }
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    for (int k = 0; k < m_; ++k) {
      int piv = k;
      double best = std::fabs(mat[static_cast<std::size_t>(k) * m_ + k]);
      for (int i = k + 1; i < m_; ++i) {
        double v = std::fabs(mat[static_cast<std::size_t>(i) * m_ + k]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < kPivotTol) return false;
      if (piv != k) {
        for (int jj = 0; jj < m_; ++jj) {
          std::swap(mat[static_cast<std::size_t>(piv) * m_ + jj],
                    mat[static_cast<std::size_t>(k) * m_ + jj]);
          std::swap(binv_[static_cast<std::size_t>(piv) * m_ + jj],
                    binv_[static_cast<std::size_t>(k) * m_ + jj]);
        }
      }
      const double inv = 1.0 / mat[static_cast<std::size_t>(k) * m_ + k];
      for (int jj = 0; jj < m_; ++jj) {
        mat[static_cast<std::size_t>(k) * m_ + jj] *= inv;
        binv_[static_cast<std::size_t>(k) * m_ + jj] *= inv;
      }
      for (int i = 0; i < m_; ++i) {
        if (i == k) continue;
        const double f = mat[static_cast<std::size_t>(i) * m_ + k];
        if (f == 0.0) continue;
        for (int jj = 0; jj < m_; ++jj) {
          mat[static_cast<std::size_t>(i) * m_ + jj] -=
              f * mat[static_cast<std::size_t>(k) * m_ + jj];
          binv_[static_cast<std::size_t>(i) * m_ + jj] -=
              f * binv_[static_cast<std::size_t>(k) * m_ + jj];
        }
      }
    }
    pivots_since_refactor_ = 0;
    return true;
  }

  double bound_value(int j) const {
    return status_[j] == VarStatus::AtUpper ? up_[j] : lo_[j];
  }

  void compute_basic_values() {
    std::vector<double> residual(p_.rhs);
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::Basic) continue;
      const double v = bound_value(j);
      if (v == 0.0) continue;
      for (const auto& [row, val] : column(j)) residual[row] -= val * v;
    }
    xb_.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      double s = 0.0;
      const double* brow = binv_.data() + static_cast<std::size_t>(r) * m_;
      for (int i = 0; i < m_; ++i) s += brow[i] * residual[i];
      xb_[r] = s;
    }
  }

  // alpha = B^{-1} A_j
  void ftran(int j, std::vector<double>& alpha) {
    alpha.assign(m_, 0.0);
    for (const auto& [row, val] : column(j)) {
      const double v = val;
      for (int r = 0; r < m_; ++r) {
        alpha[r] += binv_[static_cast<std::size_t>(r) * m_ + row] * v;
      }
    }
  }

  // y^T = g^T B^{-1} with g indexed by basis position
  void btran(const std::vector<double>& g, std::vector<double>& y) {
    y.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const double gr = g[r];
      if (gr == 0.0) continue;
      const double* brow = binv_.data() + static_cast<std::size_t>(r) * m_;
      for (int i = 0; i < m_; ++i) y[i] += gr * brow[i];
    }
  }

  double dot_column(int j, const std::vector<double>& y) {
    double s = 0.0;
    for (const auto& [row, val] : column(j)) s += y[row] * val;
    return s;
  }

  void update_inverse(int leaving_pos, const std::vector<double>& alpha) {
    const double piv = alpha[leaving_pos];
    if (std::fabs(piv) < kPivotTol) {
      throw NumericalFailure("pivot element too small");
    }
    double* prow = binv_.data() + static_cast<std::size_t>(leaving_pos) * m_;
    const double inv = 1.0 / piv;
    for (int jj = 0; jj < m_; ++jj) prow[jj] *= inv;
    for (int r = 0; r < m_; ++r) {
      if (r == leaving_pos) continue;
      const double f = alpha[r];
      if (f == 0.0) continue;
      double* row = binv_.data() + static_cast<std::size_t>(r) * m_;
      for (int jj = 0; jj < m_; ++jj) row[jj] -= f * prow[jj];
    }
    ++pivots_since_refactor_;
  }

  void maybe_refactor() {
    if (pivots_since_refactor_ < opt_.refactor_every) return;
    if (!factorize()) throw NumericalFailure("basis became singular");
    compute_basic_values();
  }

  // ---- phases ------------------------------------------------------------

  double max_violation() const {
    double worst = 0.0;
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      worst = std::max(worst, lo_[j] - xb_[r]);
      worst = std::max(worst, xb_[r] - up_[j]);
    }
    return worst;
  }

  // returns true when a primal feasible basis was reached
  bool phase1() {
    std::vector<double> g(m_), y, alpha;
    while (iterations_ < max_iters_) {
      if (max_violation() <= opt_.feas_tol) return true;
      // subgradient of the total violation with respect to basic values
      for (int r = 0; r < m_; ++r) {
        const int j = basic_[r];
        if (xb_[r] > up_[j] + opt_.feas_tol) {
          g[r] = 1.0;
        } else if (xb_[r] < lo_[j] - opt_.feas_tol) {
          g[r] = -1.0;
        } else {
          g[r] = 0.0;
        }
      }
      btran(g, y);
      int enter = -1;
      double best = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (status_[j] == VarStatus::Basic || lo_[j] == up_[j]) continue;
        const double d = -dot_column(j, y);
        double score = 0.0;
        if (status_[j] == VarStatus::AtLower && d < -opt_.opt_tol) {
          score = -d;
        } else if (status_[j] == VarStatus::AtUpper && d > opt_.opt_tol) {
          score = d;
        } else {
          continue;
        }
        if (bland_) {
          enter = j;
          break;
        }
        if (score > best) {
          best = score;
          enter = j;
        }
      }
      if (enter < 0) return false;  // violation cannot be reduced: infeasible
      if (!pivot_step(enter, /*phase1=*/true, alpha)) return false;
    }
    return max_violation() <= opt_.feas_tol;
  }

  LpStatus phase2() {
    std::vector<double> cb(m_), y, alpha;
    while (iterations_ < max_iters_) {
      for (int r = 0; r < m_; ++r) cb[r] = cost_[basic_[r]];
      btran(cb, y);
      int enter = -1;
      double best = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (status_[j] == VarStatus::Basic || lo_[j] == up_[j]) continue;
        const double d = cost_[j] - dot_column(j, y);
        double score = 0.0;
        if (status_[j] == VarStatus::AtLower && d < -opt_.opt_tol) {
          score = -d;
        } else if (status_[j] == VarStatus::AtUpper && d > opt_.opt_tol) {
          score = d;
        } else {
          continue;
        }
        if (bland_) {
          enter = j;
          break;
        }
        if (score > best) {
          best = score;
          enter = j;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      if (!pivot_step(enter, /*phase1=*/false, alpha)) {
        throw std::runtime_error("lp: unbounded ray in phase 2");
      }
    }
    return LpStatus::IterLimit;
  }

  /**
   * One ratio test plus pivot for the entering variable.  In phase 1 a basic
   * variable that sits beyond a bound blocks at the bound it is moving
   * toward (where it turns feasible); a basic beyond the bound it moves away
   * from never blocks.  Returns false when no step limit exists.
   */
  bool pivot_step(int enter, bool phase1, std::vector<double>& alpha) {
    const double dir = status_[enter] == VarStatus::AtLower ? 1.0 : -1.0;
    ftran(enter, alpha);

    // step limit of a basic row, or +inf when the row never blocks.  In
    // phase 1 a basic beyond a bound blocks where it turns feasible and is
    // transparent when moving further away (the pricing already charged for
    // that), in phase 2 every basic blocks at the bound it approaches.
    auto row_limit = [&](int r, double& target) -> double {
      const double rate = -dir * alpha[r];
      if (std::fabs(rate) <= kDirTol) return kInf;
      const int j = basic_[r];
      if (rate > 0.0) {
        if (xb_[r] < lo_[j] - opt_.feas_tol) {
          target = lo_[j];
        } else if (xb_[r] <= up_[j] + opt_.feas_tol) {
          target = up_[j];
        } else {
          return kInf;  // above its upper bound and still rising
        }
      } else {
        if (xb_[r] > up_[j] + opt_.feas_tol) {
          target = up_[j];
        } else if (xb_[r] >= lo_[j] - opt_.feas_tol) {
          target = lo_[j];
        } else {
          return kInf;  // below its lower bound and still falling
        }
      }
      (void)phase1;
      if (!std::isfinite(target)) return kInf;
      const double t = (target - xb_[r]) / rate;
      return t < 0.0 ? 0.0 : t;  // clamp tiny drift past the bound
    };

    double flip_t = kInf;
    if (up_[enter] != kInf && lo_[enter] != -kInf) {
      flip_t = up_[enter] - lo_[enter];
    }
    double t_min = flip_t;
    for (int r = 0; r < m_; ++r) {
      double target;
      t_min = std::min(t_min, row_limit(r, target));
    }
    if (t_min == kInf) return false;

    // second pass: among rows within the tie band pick the numerically
    // safest pivot (Bland mode: the smallest basic index)
    const double band = t_min + 1e-9 * (1.0 + t_min);
    int leave_pos = -1;
    double leave_target = 0.0;
    for (int r = 0; r < m_; ++r) {
      double target;
      const double t = row_limit(r, target);
      if (t > band) continue;
      bool take;
      if (leave_pos < 0) {
        take = true;
      } else if (bland_) {
        // smallest basic index, but never trade an acceptable pivot for one
        // below the pivot tolerance (that trade buys cycling protection at
        // the price of certain numerical failure)
        const bool ok_r = std::fabs(alpha[r]) >= kPivotTol;
        const bool ok_cur = std::fabs(alpha[leave_pos]) >= kPivotTol;
        if (ok_r != ok_cur) {
          take = ok_r;
        } else if (ok_r) {
          take = basic_[r] < basic_[leave_pos];
        } else {
          take = std::fabs(alpha[r]) > std::fabs(alpha[leave_pos]);
        }
      } else {
        take = std::fabs(alpha[r]) > std::fabs(alpha[leave_pos]);
      }
      if (take) {
        leave_pos = r;
        leave_target = target;
      }
    }
    if (flip_t < t_min + 1e-12 && leave_pos < 0) {
      // nothing blocks earlier than the entering variable itself
    } else if (leave_pos < 0) {
      return false;
    }
    if (leave_pos >= 0 && std::fabs(alpha[leave_pos]) < kPivotTol &&
        pivots_since_refactor_ > 0) {
      // the product-form inverse has drifted; rebuild it and redo the step
      // with exact alphas before giving the pivot up as singular
      if (!factorize()) throw NumericalFailure("basis became singular");
      compute_basic_values();
      return pivot_step(enter, phase1, alpha);
    }
    const double t_best = t_min;

    ++iterations_;
    if (t_best <= kDegenTol) {
      ++degenerate_count_;
      if (!bland_ && degenerate_count_ > bland_switch_) bland_ = true;
    }

    if (leave_pos < 0) {
      // bound flip: the entering variable crosses to its other bound
      for (int r = 0; r < m_; ++r) xb_[r] += -dir * alpha[r] * t_best;
      status_[enter] = status_[enter] == VarStatus::AtLower
                           ? VarStatus::AtUpper
                           : VarStatus::AtLower;
      return true;
    }

    const int leaving = basic_[leave_pos];
    const double enter_value = bound_value(enter) + dir * t_best;
    for (int r = 0; r < m_; ++r) xb_[r] += -dir * alpha[r] * t_best;
    status_[leaving] =
        leave_target == up_[leaving] ? VarStatus::AtUpper : VarStatus::AtLower;
    status_[enter] = VarStatus::Basic;
    basic_[leave_pos] = enter;
    pos_of_[leaving] = -1;
    pos_of_[enter] = leave_pos;
    xb_[leave_pos] = enter_value;
    update_inverse(leave_pos, alpha);
    maybe_refactor();
    return true;
  }

  // ---- solution extraction ------------------------------------------------

  void extract(LpSolution& sol) {
    sol.iterations = iterations_;
    sol.x.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      sol.x[j] =
          status_[j] == VarStatus::Basic ? xb_[pos_of_[j]] : bound_value(j);
    }
    std::vector<double> cb(m_), y;
    for (int r = 0; r < m_; ++r) cb[r] = cost_[basic_[r]];
    btran(cb, y);
    const double sign = p_.sense == ObjSense::Maximize ? -1.0 : 1.0;
    sol.duals.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) sol.duals[i] = sign * y[i];
    sol.reduced_costs.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      sol.reduced_costs[j] = sign * (cost_[j] - dot_column(j, y));
    }
    sol.objective = 0.0;
    for (int j = 0; j < n_; ++j) sol.objective += p_.obj[j] * sol.x[j];
    sol.basis.status = status_;
    sol.basis.n_cols = n_;
    sol.basis.n_rows = m_;
  }

  const LpProblem& p_;
  SimplexOptions opt_;
  bool bland_;
  int n_, m_, total_;
  long max_iters_ = 0;
  long bland_switch_ = 0;
  long iterations_ = 0;
  long degenerate_count_ = 0;
  long pivots_since_refactor_ = 0;

  std::vector<double> cost_, lo_, up_;
  std::vector<VarStatus> status_;
  std::vector<int> basic_, pos_of_;
  std::vector<double> binv_, xb_;
  std::vector<std::pair<int, double>> slack_col_{{0, 1.0}};
};

}  // namespace

int LpProblem::add_column(double objective, double lower, double upper,
                          const std::vector<std::pair<int, double>>& entries) {
  obj.push_back(objective);
  lb.push_back(lower);
  ub.push_back(upper);
  cols.push_back(entries);
  for (const auto& [row, val] : entries) {
    (void)val;
    if (row < 0 || row >= num_rows()) {
      throw std::invalid_argument("lp: column entry references unknown row");
    }
  }
  return num_cols() - 1;
}

int LpProblem::add_row(RowSense sense_value, double rhs_value,
                       const std::vector<std::pair<int, double>>& entries) {
  const int row = num_rows();
  row_sense.push_back(sense_value);
  rhs.push_back(rhs_value);
  for (const auto& [col, val] : entries) {
    if (col < 0 || col >= num_cols()) {
      throw std::invalid_argument("lp: row entry references unknown column");
    }
    cols[col].emplace_back(row, val);
  }
  return row;
}

void LpProblem::set_bounds(int col, double lower, double upper) {
  lb[col] = lower;
  ub[col] = upper;
}

void LpProblem::set_objective(int col, double objective) {
  obj[col] = objective;
}

std::string LpProblem::dump() const {
  std::ostringstream os;
  os << (sense == ObjSense::Maximize ? "max" : "min");
  for (int j = 0; j < num_cols(); ++j) os << ' ' << obj[j] << "*x" << j;
  os << '\n';
  std::vector<std::vector<std::pair<int, double>>> rows(num_rows());
  for (int j = 0; j < num_cols(); ++j) {
    for (const auto& [row, val] : cols[j]) rows[row].emplace_back(j, val);
  }
  for (int i = 0; i < num_rows(); ++i) {
    os << "r" << i << ':';
    for (const auto& [j, val] : rows[i]) os << ' ' << val << "*x" << j;
    os << (row_sense[i] == RowSense::LE   ? " <= "
           : row_sense[i] == RowSense::GE ? " >= "
                                          : " == ")
       << rhs[i] << '\n';
  }
  for (int j = 0; j < num_cols(); ++j) {
    os << lb[j] << " <= x" << j << " <= " << ub[j] << '\n';
  }
  return os.str();
}

LpSolution solve_lp(const LpProblem& problem, const Basis* warm,
                    const SimplexOptions& options) {
  if (problem.num_rows() == 0) {
    // no constraints: every variable sits at its cheaper bound
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.x.assign(problem.num_cols(), 0.0);
    sol.reduced_costs = problem.obj;
    const double sign = problem.sense == ObjSense::Maximize ? -1.0 : 1.0;
    for (int j = 0; j < problem.num_cols(); ++j) {
      const double c = sign * problem.obj[j];
      double v = c >= 0.0 ? problem.lb[j] : problem.ub[j];
      if (!std::isfinite(v)) {
        if (c == 0.0 && std::isfinite(problem.lb[j])) {
          v = problem.lb[j];
        } else {
          throw std::runtime_error("lp: unbounded ray in phase 2");
        }
      }
      sol.x[j] = v;
      sol.objective += problem.obj[j] * v;
    }
    sol.basis.n_cols = problem.num_cols();
    sol.basis.n_rows = 0;
    sol.basis.status.assign(problem.num_cols(), VarStatus::AtLower);
    return sol;
  }
  try {
    SimplexEngine engine(problem, options, /*bland=*/false);
    return engine.run(warm);
  } catch (const NumericalFailure&) {
    // one cold restart under Bland's rule
    SimplexEngine engine(problem, options, /*bland=*/true);
    return engine.run(nullptr);
  }
}

}  // namespace smbp
