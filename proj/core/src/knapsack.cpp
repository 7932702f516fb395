#include "smbp/knapsack.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>

#include "smbp/lp.hpp"

namespace smbp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// absolute fathoming slack; keeps the search exact at the 1e-6 scale the
// rest of the solver works with
constexpr double kFathomTol = 1e-9;
constexpr double kIntTol = 1e-6;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

double KnapsackProblem::usage(double a_sum, double b_sum) const {
  return a_sum + sigma * std::sqrt(std::max(0.0, b_sum));
}

double KnapsackProblem::set_usage(const std::vector<int>& items) const {
  double a_sum = 0.0, b_sum = 0.0;
  for (int i : items) {
    a_sum += a[i];
    b_sum += b[i];
  }
  return usage(a_sum, b_sum);
}

double KnapsackProblem::set_profit(const std::vector<int>& items) const {
  double p = 0.0;
  for (int i : items) p += profits[i];
  return p;
}

bool KnapsackProblem::linear() const {
  if (sigma <= 0.0) return true;
  for (double bi : b) {
    if (bi > 0.0) return false;
  }
  return true;
}

KnapsackProblem KnapsackProblem::from_merged(
    const MergedPricingProblem& merged) {
  KnapsackProblem kp;
  kp.profits = merged.profits;
  kp.a = merged.a;
  kp.b = merged.b;
  kp.sigma = merged.sigma;
  kp.capacity = merged.capacity;
  kp.conflicts = merged.conflicts;
  return kp;
}

// ---- greedy heuristics ------------------------------------------------------

namespace {

// one ratio-greedy sweep; seed < 0 starts from the empty bin.  Items with a
// negative profit can never raise the objective and are skipped.
std::vector<int> greedy_from(const KnapsackProblem& kp, int seed) {
  const int m = kp.size();
  std::vector<char> taken(m, 0), banned(m, 0);
  std::vector<int> items;
  double a_sum = 0.0, b_sum = 0.0;

  auto ban_conflicts = [&](int i) {
    for (const auto& [u, v] : kp.conflicts) {
      if (u == i) banned[v] = 1;
      if (v == i) banned[u] = 1;
    }
  };

  if (seed >= 0) {
    if (kp.usage(kp.a[seed], kp.b[seed]) > kp.capacity + kFeasTol) return {};
    taken[seed] = 1;
    items.push_back(seed);
    a_sum = kp.a[seed];
    b_sum = kp.b[seed];
    ban_conflicts(seed);
  }

  for (;;) {
    double cur = kp.usage(a_sum, b_sum);
    int best = -1;
    bool best_free = false;  // incremental load below resolution
    double best_ratio = -kInf, best_profit = -kInf;
    for (int i = 0; i < m; ++i) {
      if (taken[i] || banned[i] || kp.profits[i] < 0.0) continue;
      double next = kp.usage(a_sum + kp.a[i], b_sum + kp.b[i]);
      if (next > kp.capacity + kFeasTol) continue;
      double gamma = next - cur;
      bool free_ride = gamma <= 1e-15;
      double ratio = free_ride ? kInf : kp.profits[i] / gamma;
      bool better;
      if (free_ride != best_free) {
        better = free_ride;
      } else if (free_ride) {
        better = kp.profits[i] > best_profit + 1e-12;
      } else if (std::abs(ratio - best_ratio) >
                 1e-12 * (1.0 + std::abs(best_ratio))) {
        better = ratio > best_ratio;
      } else {
        better = kp.profits[i] > best_profit + 1e-12;
      }
      if (best < 0 || better) {
        best = i;
        best_free = free_ride;
        best_ratio = ratio;
        best_profit = kp.profits[i];
      }
    }
    if (best < 0) break;
    taken[best] = 1;
    items.push_back(best);
    a_sum += kp.a[best];
    b_sum += kp.b[best];
    ban_conflicts(best);
  }
  std::sort(items.begin(), items.end());
  return items;
}

}  // namespace

std::vector<int> best_fit_greedy(const KnapsackProblem& kp) {
  return greedy_from(kp, -1);
}

std::vector<int> fixing_greedy(const KnapsackProblem& kp) {
  std::vector<int> best;
  double best_val = 0.0;
  for (int j = 0; j < kp.size(); ++j) {
    std::vector<int> cand = greedy_from(kp, j);
    if (cand.empty()) continue;
    double val = kp.set_profit(cand);
    if (val > best_val + 1e-12) {
      best_val = val;
      best = std::move(cand);
    }
  }
  return best;
}

int cardinality_greedy(const KnapsackProblem& kp) {
  const int m = kp.size();
  std::vector<char> taken(m, 0), banned(m, 0);
  double a_sum = 0.0, b_sum = 0.0;
  int count = 0;
  for (;;) {
    double cur = kp.usage(a_sum, b_sum);
    int best = -1;
    double best_gamma = kInf;
    for (int i = 0; i < m; ++i) {
      if (taken[i] || banned[i]) continue;
      double next = kp.usage(a_sum + kp.a[i], b_sum + kp.b[i]);
      if (next > kp.capacity + kFeasTol) continue;
      double gamma = next - cur;
      if (gamma < best_gamma - 1e-15) {
        best_gamma = gamma;
        best = i;
      }
    }
    if (best < 0) break;
    taken[best] = 1;
    a_sum += kp.a[best];
    b_sum += kp.b[best];
    for (const auto& [u, v] : kp.conflicts) {
      if (u == best) banned[v] = 1;
      if (v == best) banned[u] = 1;
    }
    ++count;
  }
  return count;
}

// ---- separation -------------------------------------------------------------

Cut separation_cut(const KnapsackProblem& kp, const std::vector<int>& xhat) {
  const int m = kp.size();
  double a_sum = 0.0, b_sum = 0.0;
  std::vector<char> in_set(m, 0);
  for (int i : xhat) {
    in_set[i] = 1;
    a_sum += kp.a[i];
    b_sum += kp.b[i];
  }
  if (kp.usage(a_sum, b_sum) <= kp.capacity + kFeasTol) {
    throw std::invalid_argument("separation_cut: point is capacity feasible");
  }
  Cut cut;
  cut.coeffs.assign(kp.a.begin(), kp.a.end());
  cut.rhs = kp.capacity;
  if (b_sum > 0.0) {
    double root = std::sqrt(b_sum);
    for (int i = 0; i < m; ++i) {
      if (in_set[i]) cut.coeffs[i] += kp.sigma * kp.b[i] / root;
    }
  }
  return cut;
}

bool CutPool::add(const Cut& cut) {
  std::vector<long long> key;
  key.reserve(cut.coeffs.size() + 1);
  for (double c : cut.coeffs) key.push_back(std::llround(c / 1e-12));
  key.push_back(std::llround(cut.rhs / 1e-12));
  if (!keys_.insert(std::move(key)).second) return false;
  cuts_.push_back(cut);
  return true;
}

void CutPool::clear() {
  cuts_.clear();
  keys_.clear();
}

// ---- piecewise linear model --------------------------------------------------

double PwlModel::overestimate(double w) const {
  double lo = breakpoints.front(), hi = breakpoints.back();
  w = std::min(std::max(w, lo), hi);
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), w);
  std::size_t k = static_cast<std::size_t>(it - breakpoints.begin());
  if (k == 0) k = 1;
  if (k >= breakpoints.size()) k = breakpoints.size() - 1;
  double wl = breakpoints[k - 1], wr = breakpoints[k];
  if (wr - wl <= 0.0) return q(wl);
  double t = (w - wl) / (wr - wl);
  return (1.0 - t) * q(wl) + t * q(wr);
}

double PwlModel::max_gap() const {
  double gap = 0.0;
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    double d = breakpoints[k] - breakpoints[k - 1];
    gap = std::max(gap, d * d / 4.0);
  }
  return gap;
}

PwlModel make_pwl_model(std::vector<double> points, double capacity) {
  for (double& p : points) p = std::max(0.0, p);
  std::sort(points.begin(), points.end());
  std::vector<double> clean;
  for (double p : points) {
    if (clean.empty() || p - clean.back() > 1e-12 * (1.0 + std::abs(p))) {
      clean.push_back(p);
    }
  }
  if (clean.empty()) clean.push_back(0.0);
  if (clean.size() < 2) clean.push_back(clean.back() + std::max(1.0, capacity));
  PwlModel model;
  model.capacity = capacity;
  model.breakpoints = std::move(clean);
  return model;
}

PwlModel build_breakpoints(const KnapsackProblem& kp, double w_lo,
                           double w_hi) {
  int h = std::max(2, cardinality_greedy(kp));
  std::vector<double> pts;
  pts.push_back(0.0);
  if (w_hi - w_lo <= 1e-12 * (1.0 + std::abs(w_hi))) {
    pts.push_back(w_hi);
  } else {
    for (int k = 0; k < h; ++k) {
      pts.push_back(w_lo + (w_hi - w_lo) * k / (h - 1));
    }
  }
  return make_pwl_model(std::move(pts), kp.capacity);
}

PwlModel adaptive_breakpoints(const KnapsackProblem& kp, double w_lo,
                              double w_hi, double w_center) {
  int h = std::max(2, cardinality_greedy(kp));
  double range = w_hi - w_lo;
  if (range <= 1e-12 * (1.0 + std::abs(w_hi))) {
    return build_breakpoints(kp, w_lo, w_hi);
  }
  double w_c = std::min(std::max(w_center, w_lo), w_hi);
  int i_c = static_cast<int>(std::ceil((w_c - w_lo) / range * h));
  i_c = std::min(std::max(i_c, 1), h);
  // arithmetic gap growth away from the center: the j-th gap outward has
  // length proportional to j, normalized so the ends land on w_lo and w_hi
  double s_lo = 0.5 * static_cast<double>(i_c - 1) * i_c;
  double s_hi = 0.5 * static_cast<double>(h - i_c) * (h - i_c + 1);
  std::vector<double> pts;
  pts.push_back(0.0);
  for (int i = 1; i <= h; ++i) {
    if (i < i_c) {
      int steps = i_c - i;
      double part = 0.5 * static_cast<double>(steps) * (steps + 1);
      pts.push_back(w_c - part / s_lo * (w_c - w_lo));
    } else if (i == i_c) {
      pts.push_back(w_c);
    } else {
      int steps = i - i_c;
      double part = 0.5 * static_cast<double>(steps) * (steps + 1);
      pts.push_back(w_c + part / s_hi * (w_hi - w_c));
    }
  }
  // a center at a clamped end produces no point beyond it; the model must
  // still cover the whole feasible range
  pts.push_back(w_lo);
  pts.push_back(w_hi);
  return make_pwl_model(std::move(pts), kp.capacity);
}

// ---- branch and cut -----------------------------------------------------------

namespace {

struct BncNode {
  double bound = kInf;
  long id = 0;
  std::vector<std::int8_t> xfix;  // 0 free, 1 fixed to 0, 2 fixed to 1
  std::vector<std::int8_t> zfix;
};

struct NodeOrder {
  bool operator()(const BncNode& lhs, const BncNode& rhs) const {
    if (lhs.bound != rhs.bound) return lhs.bound < rhs.bound;
    return lhs.id < rhs.id;  // newer node first on equal bounds
  }
};

class BncEngine {
 public:
  BncEngine(const KnapsackProblem& kp, const PwlModel& pwl,
            const PwlBncOptions& opts)
      : kp_(kp), opts_(opts), m_(kp.size()) {
    if (opts_.cut_pool == nullptr) {
      opts_.cut_pool = &local_pool_;
    }
    linear_ = kp_.linear();
    build_model(pwl);
  }

  KnapsackResult run() {
    start_ = std::chrono::steady_clock::now();
    seed_incumbent();

    std::priority_queue<BncNode, std::vector<BncNode>, NodeOrder> open;
    BncNode root;
    root.bound = kInf;
    root.id = next_id_++;
    root.xfix.assign(m_, 0);
    root.zfix.assign(num_z_, 0);
    open.push(std::move(root));

    KnapsackResult res;
    res.status = KnapsackStatus::Optimal;
    while (!open.empty()) {
      if (elapsed_seconds(start_) > opts_.time_limit) {
        res.status = KnapsackStatus::TimeLimit;
        res.dual_bound = std::max(incumbent_, open.top().bound);
        finish(res);
        return res;
      }
      BncNode node = open.top();
      open.pop();
      if (node.bound <= incumbent_ + gap_slack()) continue;

      apply_bounds(node);
      bool aborted = false;
      double node_val = node.bound;
      int action = process(node, node_val, aborted);
      if (aborted || action == kTimeout) {
        res.status =
            aborted ? KnapsackStatus::Aborted : KnapsackStatus::TimeLimit;
        // the popped node had the best bound; its last lp value caps its
        // own subtree and the remaining open nodes cap everything else
        double ub = std::min(node.bound, node_val);
        if (!open.empty()) ub = std::max(ub, open.top().bound);
        res.dual_bound = std::max(incumbent_, ub);
        finish(res);
        return res;
      }
      if (action == kFathom) continue;
      // action encodes a branching column
      double child_bound = std::min(node.bound, node_val);
      int col = action;
      for (int side = 0; side < 2; ++side) {
        BncNode child;
        child.bound = child_bound;
        child.xfix = node.xfix;
        child.zfix = node.zfix;
        std::int8_t fix = side == 0 ? 1 : 2;  // explore the 1-branch first
        if (col < m_) {
          child.xfix[col] = fix;
        } else {
          child.zfix[col - m_] = fix;
        }
        child.id = next_id_++;
        open.push(std::move(child));
      }
    }
    res.dual_bound = incumbent_;
    finish(res);
    return res;
  }

 private:
  static constexpr int kFathom = -1;
  static constexpr int kTimeout = -2;

  double gap_slack() const {
    return std::max(kFathomTol,
                    opts_.gap_tol * std::max(1.0, std::abs(incumbent_)));
  }

  void finish(KnapsackResult& res) {
    res.primal = incumbent_;
    res.best_items = best_items_;
    res.nodes = nodes_;
    res.cuts = cuts_;
    res.lp_iterations = lp_iters_;
    if (res.status == KnapsackStatus::Optimal) res.dual_bound = incumbent_;
  }

  void seed_incumbent() {
    incumbent_ = 0.0;
    best_items_.clear();
    if (opts_.warm_items != nullptr && !opts_.warm_items->empty()) {
      const std::vector<int>& warm = *opts_.warm_items;
      if (kp_.set_usage(warm) <= kp_.capacity + kFeasTol) {
        double val = kp_.set_profit(warm);
        if (val > incumbent_) {
          incumbent_ = val;
          best_items_ = warm;
          std::sort(best_items_.begin(), best_items_.end());
        }
      }
    }
  }

  void build_model(const PwlModel& pwl) {
    lp_.sense = ObjSense::Maximize;
    for (int j = 0; j < m_; ++j) lp_.add_column(kp_.profits[j], 0.0, 1.0);

    if (linear_) {
      std::vector<std::pair<int, double>> cap;
      for (int j = 0; j < m_; ++j) cap.emplace_back(j, kp_.a[j]);
      lp_.add_row(RowSense::LE, kp_.capacity, cap);
      num_z_ = 0;
    } else {
      bp_ = pwl.breakpoints;
      const std::vector<double>& bp = bp_;
      const int nb = static_cast<int>(bp.size());
      // no feasible load puts w past the capacity, and past it the parabola
      // (c - w)^2 rises again and would stop separating infeasible points
      w_col_ = lp_.add_column(0.0, 0.0, std::min(bp.back(), kp_.capacity));
      lam0_ = lp_.num_cols();
      for (int k = 0; k < nb; ++k) lp_.add_column(0.0, 0.0, 1.0);
      z0_ = lp_.num_cols();
      num_z_ = nb - 1;
      for (int k = 0; k < num_z_; ++k) lp_.add_column(0.0, 0.0, 1.0);

      // linear load balance: sum a_j x_j = w
      std::vector<std::pair<int, double>> row;
      for (int j = 0; j < m_; ++j) row.emplace_back(j, kp_.a[j]);
      row.emplace_back(w_col_, -1.0);
      lp_.add_row(RowSense::EQ, 0.0, row);

      // relaxed capacity: sigma^2 sum b_j x_j <= interpolant of (c - w)^2
      row.clear();
      double s2 = kp_.sigma * kp_.sigma;
      for (int j = 0; j < m_; ++j) {
        if (kp_.b[j] != 0.0) row.emplace_back(j, s2 * kp_.b[j]);
      }
      for (int k = 0; k < nb; ++k) row.emplace_back(lam0_ + k, -pwl.q(bp[k]));
      lp_.add_row(RowSense::LE, 0.0, row);

      // w is the convex combination of the breakpoints
      row.clear();
      row.emplace_back(w_col_, 1.0);
      for (int k = 0; k < nb; ++k) row.emplace_back(lam0_ + k, -bp[k]);
      lp_.add_row(RowSense::EQ, 0.0, row);

      row.clear();
      for (int k = 0; k < nb; ++k) row.emplace_back(lam0_ + k, 1.0);
      lp_.add_row(RowSense::EQ, 1.0, row);

      row.clear();
      for (int k = 0; k < num_z_; ++k) row.emplace_back(z0_ + k, 1.0);
      lp_.add_row(RowSense::EQ, 1.0, row);

      // adjacency: lambda_k can be positive only next to the active piece
      for (int k = 0; k < nb; ++k) {
        row.clear();
        row.emplace_back(lam0_ + k, 1.0);
        if (k - 1 >= 0) row.emplace_back(z0_ + k - 1, -1.0);
        if (k < num_z_) row.emplace_back(z0_ + k, -1.0);
        lp_.add_row(RowSense::LE, 0.0, row);
      }
    }

    for (const auto& [u, v] : kp_.conflicts) {
      lp_.add_row(RowSense::LE, 1.0, {{u, 1.0}, {v, 1.0}});
    }
    for (const Cut& cut : opts_.cut_pool->cuts()) add_cut_row(cut);
  }

  void add_cut_row(const Cut& cut) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < m_; ++j) {
      if (cut.coeffs[j] != 0.0) row.emplace_back(j, cut.coeffs[j]);
    }
    lp_.add_row(RowSense::LE, cut.rhs, row);
  }

  // selector of the segment holding the point's linear load if fractional,
  // otherwise the most fractional selector; -1 when all are integral
  int pick_z_branch(const LpSolution& sol, double w_val,
                    const BncNode& node) const {
    auto fractional = [&](int k) {
      if (node.zfix[k] != 0) return false;
      double v = sol.x[z0_ + k];
      return std::min(v, 1.0 - v) > kIntTol;
    };
    auto it = std::upper_bound(bp_.begin(), bp_.end(), w_val);
    int k_star = static_cast<int>(it - bp_.begin()) - 1;
    k_star = std::min(std::max(k_star, 0), num_z_ - 1);
    if (k_star >= 0 && fractional(k_star)) return k_star;
    int best = -1;
    double best_frac = kIntTol;
    for (int k = 0; k < num_z_; ++k) {
      if (node.zfix[k] != 0) continue;
      double v = sol.x[z0_ + k];
      double frac = std::min(v, 1.0 - v);
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        best = k;
      }
    }
    return best;
  }

  void apply_bounds(const BncNode& node) {
    for (int j = 0; j < m_; ++j) {
      double lo = node.xfix[j] == 2 ? 1.0 : 0.0;
      double hi = node.xfix[j] == 1 ? 0.0 : 1.0;
      lp_.set_bounds(j, lo, hi);
    }
    for (int k = 0; k < num_z_; ++k) {
      double lo = node.zfix[k] == 2 ? 1.0 : 0.0;
      double hi = node.zfix[k] == 1 ? 0.0 : 1.0;
      lp_.set_bounds(z0_ + k, lo, hi);
    }
  }

  // solves the node with cut reoptimization; returns kFathom, kTimeout or
  // the column to branch on (x columns as-is, z column k encoded as m + k)
  int process(const BncNode& node, double& node_val, bool& aborted) {
    ++nodes_;
    SimplexOptions lp_opts;
    lp_opts.feas_tol = 1e-8;
    lp_opts.opt_tol = 1e-8;
    lp_opts.max_iters =
        400L * (lp_.num_rows() + lp_.num_cols() + 16);
    for (;;) {
      if (elapsed_seconds(start_) > opts_.time_limit) return kTimeout;
      LpSolution sol =
          solve_lp(lp_, basis_.empty() ? nullptr : &basis_, lp_opts);
      lp_iters_ += sol.iterations;
      if (sol.status == LpStatus::IterLimit) {
        throw std::runtime_error("pwl bnc: node lp hit the iteration limit");
      }
      if (sol.status == LpStatus::Infeasible) return kFathom;
      basis_ = sol.basis;
      node_val = sol.objective;
      if (std::min(node.bound, node_val) <= incumbent_ + gap_slack()) {
        return kFathom;
      }

      bool x_binary = true;
      for (int j = 0; j < m_ && x_binary; ++j) {
        x_binary = std::abs(sol.x[j] - std::round(sol.x[j])) <= kIntTol;
      }
      if (x_binary) {
        std::vector<int> items;
        double a_sum = 0.0, b_sum = 0.0;
        for (int j = 0; j < m_; ++j) {
          if (sol.x[j] > 0.5) {
            items.push_back(j);
            a_sum += kp_.a[j];
            b_sum += kp_.b[j];
          }
        }
        double load = kp_.usage(a_sum, b_sum);
        if (load <= kp_.capacity + kFeasTol) {
          double profit = kp_.set_profit(items);
          if (profit > incumbent_ + 1e-12) {
            incumbent_ = profit;
            best_items_ = std::move(items);
          }
          return kFathom;
        }
        // cuts are only separated once the piece selectors are integral;
        // with fractional selectors the over-estimator spans segments and
        // even breakpoint-exact points can look violated
        if (!linear_) {
          int zbr = pick_z_branch(sol, a_sum, node);
          if (zbr >= 0) return m_ + zbr;
        }
        // violation near the lp tolerance cannot be separated reliably;
        // split the point off instead of cutting
        double decisive = 1e-5 * (1.0 + std::abs(kp_.capacity));
        bool twilight = load <= kp_.capacity + decisive;
        if (!twilight) {
          Cut cut = separation_cut(kp_, items);
          if (opts_.cut_pool->add(cut)) {
            add_cut_row(cut);
            ++cuts_;
            if (opts_.cut_observer && opts_.cut_observer(a_sum)) {
              aborted = true;
              return kFathom;
            }
            continue;  // reoptimize the same node
          }
          twilight = true;  // equal cut already active: numeric corner
        }
        // the load is monotone, so every binary point keeping this support
        // is infeasible too: move a free support item away, or drop the
        // node outright when the whole support is pinned
        for (int j = 0; j < m_; ++j) {
          if (node.xfix[j] == 0 && sol.x[j] > 0.5) return j;
        }
        return kFathom;
      }

      int best_x = -1;
      double best_frac = kIntTol, best_profit = -kInf;
      for (int j = 0; j < m_; ++j) {
        double frac = std::min(sol.x[j], 1.0 - sol.x[j]);
        if (frac <= kIntTol) continue;
        bool better = frac > best_frac + 1e-9 ||
                      (frac > best_frac - 1e-9 &&
                       std::abs(kp_.profits[j]) > best_profit + 1e-12);
        if (best_x < 0 || better) {
          best_x = j;
          best_frac = std::max(best_frac, frac);
          best_profit = std::abs(kp_.profits[j]);
        }
      }
      if (best_x >= 0) return best_x;
      // x integral within tolerance was handled above; getting here means
      // only continuous variables are fractional, which is a feasible leaf
      return kFathom;
    }
  }

  KnapsackProblem kp_;
  PwlBncOptions opts_;
  CutPool local_pool_;
  LpProblem lp_;
  Basis basis_;
  std::vector<double> bp_;
  bool linear_ = false;
  int m_ = 0;
  int w_col_ = -1, lam0_ = -1, z0_ = -1, num_z_ = 0;
  long next_id_ = 0, nodes_ = 0, cuts_ = 0, lp_iters_ = 0;
  double incumbent_ = 0.0;
  std::vector<int> best_items_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

KnapsackResult solve_pwl_bnc(const KnapsackProblem& kp, const PwlModel& pwl,
                             const PwlBncOptions& opts) {
  BncEngine engine(kp, pwl, opts);
  return engine.run();
}

// ---- bound tightening ---------------------------------------------------------

namespace {

// reverse-convex program: the largest linear load w = sum a_i x_i over
// conflict free binary points whose total load reaches the capacity.  Below
// the optimum every binary point of that family stays capacity feasible.
double exact_lower_bound(const KnapsackProblem& kp, double fallback) {
  const int m = kp.size();
  if (m > 25) return fallback;
  std::vector<std::uint32_t> conflict_mask(m, 0);
  for (const auto& [u, v] : kp.conflicts) {
    conflict_mask[u] |= 1u << v;
    conflict_mask[v] |= 1u << u;
  }
  std::vector<double> suffix_a(m + 1, 0.0);
  for (int i = m - 1; i >= 0; --i) {
    suffix_a[i] = suffix_a[i + 1] + std::max(0.0, kp.a[i]);
  }
  double best = -kInf;
  double s2 = kp.sigma * kp.sigma;
  // stack DFS over include/exclude decisions
  struct Frame {
    int i;
    double a_sum, b_sum;
    std::uint32_t banned;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0.0, 0.0, 0u});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.a_sum <= kp.capacity + kFeasTol) {
      double gap = kp.capacity - f.a_sum;
      if (s2 * f.b_sum >= gap * gap - 1e-12) best = std::max(best, f.a_sum);
    }
    if (f.i >= m || f.a_sum + suffix_a[f.i] <= best) continue;
    stack.push_back({f.i + 1, f.a_sum, f.b_sum, f.banned});
    if ((f.banned & (1u << f.i)) == 0 &&
        f.a_sum + kp.a[f.i] <= kp.capacity + kFeasTol) {
      stack.push_back({f.i + 1, f.a_sum + kp.a[f.i], f.b_sum + kp.b[f.i],
                       f.banned | conflict_mask[f.i]});
    }
  }
  if (best == -kInf) return kp.capacity;  // no point reaches the capacity
  return std::max(best, fallback);
}

}  // namespace

BoundInfo tighten_bounds(const KnapsackProblem& kp,
                         const TightenOptions& opts) {
  BoundInfo info;
  double b_total = 0.0, a_total = 0.0;
  for (double bi : kp.b) b_total += bi;
  for (double ai : kp.a) a_total += std::max(0.0, ai);

  double closed = std::max(
      0.0, kp.capacity - kp.sigma * std::sqrt(std::max(0.0, b_total)));
  info.w_lo = closed;
  if (opts.exact_lower && !kp.linear()) {
    info.w_lo = std::min(exact_lower_bound(kp, closed), kp.capacity);
  }
  if (kp.linear()) info.w_lo = kp.capacity;

  // exact maximum of the linear load, solved on a provably safe range
  double safe_hi = std::min(kp.capacity, a_total);
  if (safe_hi <= 1e-12) {
    info.w_hi = 0.0;
    info.w_lo = 0.0;
    return info;
  }
  KnapsackProblem probe = kp;
  probe.profits = kp.a;
  PwlModel bootstrap =
      build_breakpoints(probe, std::min(closed, safe_hi), safe_hi);
  PwlBncOptions probe_opts;
  probe_opts.time_limit = opts.time_limit;
  probe_opts.gap_tol = 1e-9;
  KnapsackResult res = solve_pwl_bnc(probe, bootstrap, probe_opts);
  // the dual bound is valid even on a timeout
  info.w_hi = std::min(std::max(res.dual_bound, 0.0), safe_hi);
  info.w_lo = std::min(info.w_lo, info.w_hi);
  return info;
}

// ---- adaptive driver -----------------------------------------------------------

KnapsackResult solve_pwl_bnc_adaptive(const KnapsackProblem& kp, double w_lo,
                                      double w_hi,
                                      const PwlBncOptions& opts) {
  PwlModel equidistant = build_breakpoints(kp, w_lo, w_hi);
  double range = w_hi - w_lo;
  if (kp.linear() || range <= 1e-12 * (1.0 + std::abs(w_hi))) {
    return solve_pwl_bnc(kp, equidistant, opts);
  }

  auto start = std::chrono::steady_clock::now();
  double prev_w = std::numeric_limits<double>::quiet_NaN();
  double center = std::numeric_limits<double>::quiet_NaN();
  bool user_abort = false;

  PwlBncOptions warmup = opts;
  warmup.cut_observer = [&](double w) {
    if (opts.cut_observer && opts.cut_observer(w)) {
      user_abort = true;
      return true;
    }
    bool settled = !std::isnan(prev_w) && std::abs(w - prev_w) / range <= 0.1;
    prev_w = w;
    if (settled) center = w;
    return settled;
  };

  KnapsackResult first = solve_pwl_bnc(kp, equidistant, warmup);
  if (first.status != KnapsackStatus::Aborted || user_abort ||
      std::isnan(center)) {
    return first;
  }

  PwlModel focused = adaptive_breakpoints(kp, w_lo, w_hi, center);
  PwlBncOptions second_opts = opts;
  second_opts.time_limit = opts.time_limit - elapsed_seconds(start);
  if (!first.best_items.empty()) second_opts.warm_items = &first.best_items;
  KnapsackResult second = solve_pwl_bnc(kp, focused, second_opts);
  second.nodes += first.nodes;
  second.cuts += first.cuts;
  second.lp_iterations += first.lp_iterations;
  return second;
}

// ---- exhaustive reference -------------------------------------------------------

KnapsackResult enumerate_knapsack(const KnapsackProblem& kp) {
  const int m = kp.size();
  if (m > 25) {
    throw std::invalid_argument("enumerate_knapsack: more than 25 items");
  }
  std::vector<std::uint32_t> conflict_mask(m, 0);
  for (const auto& [u, v] : kp.conflicts) {
    conflict_mask[u] |= 1u << v;
    conflict_mask[v] |= 1u << u;
  }
  std::vector<double> suffix_profit(m + 1, 0.0);
  for (int i = m - 1; i >= 0; --i) {
    suffix_profit[i] = suffix_profit[i + 1] + std::max(0.0, kp.profits[i]);
  }

  KnapsackResult res;
  res.status = KnapsackStatus::Optimal;
  res.primal = 0.0;

  struct Frame {
    int i;
    double a_sum, b_sum, profit;
    std::uint32_t chosen, banned;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0.0, 0.0, 0.0, 0u, 0u});
  std::uint32_t best_mask = 0;
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.profit > res.primal + 1e-12) {
      res.primal = f.profit;
      best_mask = f.chosen;
    }
    if (f.i >= m || f.profit + suffix_profit[f.i] <= res.primal + 1e-12) {
      continue;
    }
    // exclude branch explored after the include branch
    stack.push_back({f.i + 1, f.a_sum, f.b_sum, f.profit, f.chosen, f.banned});
    if ((f.banned & (1u << f.i)) == 0) {
      double a_sum = f.a_sum + kp.a[f.i];
      double b_sum = f.b_sum + kp.b[f.i];
      if (kp.usage(a_sum, b_sum) <= kp.capacity + kFeasTol) {
        stack.push_back({f.i + 1, a_sum, b_sum, f.profit + kp.profits[f.i],
                         f.chosen | (1u << f.i), f.banned | conflict_mask[f.i]});
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    if (best_mask & (1u << i)) res.best_items.push_back(i);
  }
  res.dual_bound = res.primal;
  return res;
}

}  // namespace smbp
