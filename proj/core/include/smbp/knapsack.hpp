#pragma once

#include <functional>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "smbp/branching.hpp"
#include "smbp/instance.hpp"

namespace smbp {

/**
 * Submodular knapsack with pairwise conflicts:
 *   max profits^T x   s.t.   sum a_i x_i + sigma sqrt(sum b_i x_i) <= capacity,
 *                            x_i + x_j <= 1 for conflicting pairs, x binary.
 * Pricing solves this over the merged item space.
 */
struct KnapsackProblem {
  std::vector<double> profits;
  std::vector<double> a;
  std::vector<double> b;
  double sigma = 0.0;
  double capacity = 0.0;
  std::vector<std::pair<int, int>> conflicts;

  int size() const { return static_cast<int>(profits.size()); }
  double usage(double a_sum, double b_sum) const;
  double set_usage(const std::vector<int>& items) const;
  double set_profit(const std::vector<int>& items) const;
  // true when the sqrt term vanishes and the capacity row is linear
  bool linear() const;

  static KnapsackProblem from_merged(const MergedPricingProblem& merged);
};

// ---- greedy heuristics (ratio = profit per incremental load) --------------

// grows one bin, always taking the best profit/load ratio that still fits
std::vector<int> best_fit_greedy(const KnapsackProblem& kp);

// best_fit_greedy restarted with every item forced in first; the best of
// those runs.  Returns an empty set when nothing fits.
std::vector<int> fixing_greedy(const KnapsackProblem& kp);

// number of items packed when greedily maximizing cardinality (smallest
// incremental load first); used as the piece count of the PWL model
int cardinality_greedy(const KnapsackProblem& kp);

// ---- separation ------------------------------------------------------------

struct Cut {
  std::vector<double> coeffs;  // dense over the items
  double rhs = 0.0;
};

/**
 * Linearization of the load at an infeasible binary point:
 *   theta_i = a_i + sigma b_i xhat_i / sqrt(sum_j b_j xhat_j)
 * (theta = a when the sqrt term vanishes).  theta^T x <= capacity is valid
 * for every feasible point, continuous or binary, and tight at xhat.
 * Throws std::invalid_argument when xhat is capacity feasible.
 */
Cut separation_cut(const KnapsackProblem& kp, const std::vector<int>& xhat);

// dedup pool; coefficients are compared at 1e-12 resolution
class CutPool {
 public:
  bool add(const Cut& cut);  // false when an equal cut is already stored
  const std::vector<Cut>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }
  void clear();

 private:
  std::vector<Cut> cuts_;
  std::set<std::vector<long long>> keys_;
};

// ---- piecewise linear relaxation -------------------------------------------

/**
 * Over-estimator of q(w) = (capacity - w)^2 interpolating q at the
 * breakpoints.  Between breakpoints the chord lies above q (q is convex), so
 * replacing q by the interpolant relaxes the feasible set.
 */
struct PwlModel {
  double capacity = 0.0;
  std::vector<double> breakpoints;  // ascending, at least 2

  double q(double w) const { return (capacity - w) * (capacity - w); }
  double overestimate(double w) const;  // evaluates the interpolant
  // worst over-estimation over the covered range: max_k (w_k+1 - w_k)^2 / 4
  double max_gap() const;
};

PwlModel make_pwl_model(std::vector<double> points, double capacity);

struct BoundInfo {
  double w_lo = 0.0;
  double w_hi = 0.0;
};

struct TightenOptions {
  bool exact_lower = false;  // solve the reverse-convex program instead of
                             // the closed form (enumerative, small sizes)
  double time_limit = std::numeric_limits<double>::infinity();
};

/**
 * Valid breakpoint range for w = sum a_i x_i.  The upper value is the exact
 * maximum of the linear load over the feasible set (solved with the PWL
 * branch and cut itself, bootstrapped from the safe range); under a finite
 * time limit it relaxes to a valid upper bound on that maximum.  The lower
 * value defaults to max(0, capacity - sigma sqrt(sum b_i)), below which
 * every binary point is automatically feasible.
 */
BoundInfo tighten_bounds(const KnapsackProblem& kp,
                         const TightenOptions& opts = {});

// {0} plus h equidistant points on [w_lo, w_hi], h from cardinality_greedy
// (minimum 2); w_lo == w_hi degenerates to {0, w_hi}
PwlModel build_breakpoints(const KnapsackProblem& kp, double w_lo,
                           double w_hi);

// {0} plus h points concentrated around the observed separation center w_c:
// spacing grows arithmetically away from w_c on both sides
PwlModel adaptive_breakpoints(const KnapsackProblem& kp, double w_lo,
                              double w_hi, double w_center);

// ---- exact solvers ----------------------------------------------------------

enum class KnapsackStatus { Optimal, TimeLimit, Aborted };

struct KnapsackResult {
  KnapsackStatus status = KnapsackStatus::TimeLimit;
  std::vector<int> best_items;
  double primal = 0.0;
  double dual_bound = 0.0;
  long nodes = 0;
  long cuts = 0;
  long lp_iterations = 0;
};

struct PwlBncOptions {
  double time_limit = std::numeric_limits<double>::infinity();
  // relative early-stop gap; 0 keeps the search exact up to the 1e-9
  // fathoming slack
  double gap_tol = 0.0;
  CutPool* cut_pool = nullptr;  // shared pool, reused and extended
  const std::vector<int>* warm_items = nullptr;
  // called with w = sum a_i xhat_i whenever a cut is separated; returning
  // true aborts the run (status Aborted) so the caller can rebuild the model
  std::function<bool(double)> cut_observer;
};

/**
 * Branch and cut over the PWL relaxation.  Fractional piece selectors are
 * branched first, then fractional items (most fractional, ties by larger
 * profit); nodes are explored best bound first.  An integral point that
 * violates the true load constraint is separated and the node reoptimized.
 * The returned dual_bound is always a valid upper bound on the optimum.
 */
KnapsackResult solve_pwl_bnc(const KnapsackProblem& kp, const PwlModel& pwl,
                             const PwlBncOptions& opts = {});

/**
 * Warm-up on equidistant breakpoints until two consecutive separation
 * points land within 10% of the breakpoint range of each other, then
 * restart on breakpoints concentrated at that center.  Falls back to the
 * plain equidistant run when the warm-up already finishes.
 */
KnapsackResult solve_pwl_bnc_adaptive(const KnapsackProblem& kp, double w_lo,
                                      double w_hi,
                                      const PwlBncOptions& opts = {});

// exhaustive reference solver (depth first, feasibility pruning); sizes
// above 25 items are rejected
KnapsackResult enumerate_knapsack(const KnapsackProblem& kp);

}  // namespace smbp
