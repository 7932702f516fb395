#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "smbp/branching.hpp"
#include "smbp/instance.hpp"
#include "smbp/knapsack.hpp"
#include "smbp/master.hpp"

namespace smbp {

// ---- primal heuristics ------------------------------------------------------

/**
 * Greedy min-utilization packing: repeatedly place the (item, bin) pair with
 * the smallest incremental load among the open bins, opening a new bin only
 * when no open bin accommodates any unpacked item.  Returns a partition of
 * all items into feasible bins; 8/3-approximate on the bin count.  Throws
 * std::invalid_argument when an item does not fit a bin alone.
 */
std::vector<Column> greedy_min_utilization(const SmbpInstance& inst);

/**
 * Cover completion heuristic run whenever pricing produces a column: force
 * that column into the solution, then repeatedly add the pool column covering
 * the most still-uncovered items.  On full coverage the cover is converted
 * to a partition by stripping duplicated items from later bins (feasible
 * because the load is monotone) and dropping emptied bins.  Returns nothing
 * when some item appears in no pool column.
 */
std::optional<std::vector<Column>> column_selection_heuristic(
    const Column& forced, const std::vector<Column>& pool,
    const SmbpInstance& inst);

// ---- pricing orchestration --------------------------------------------------

struct PricingConfig {
  bool hybrid = true;    // false: every call uses the exact solver
  bool adaptive = false; // breakpoint placement of the exact solver
  double time_limit = std::numeric_limits<double>::infinity();  // per call
};

/**
 * Profit-independent state of one merged pricing problem, reused across the
 * column generation rounds of a node: the breakpoint range, the equidistant
 * model and the pool of separated load cuts all stay valid while only the
 * objective changes.
 */
struct PricingCache {
  bool ready = false;
  BoundInfo bounds;
  PwlModel model;  // built in equidistant mode only
  CutPool pool;
};

struct PricingOutcome {
  std::vector<int> merged_items;  // improving column, empty when none found
  double value = 0.0;             // profit of merged_items
  double v_ld = 0.0;              // updated local dual bound
  double v_price = 0.0;           // exact dual bound (meaningful iff used_exact)
  double exact_primal = 0.0;      // exact incumbent value (even if <= 1)
  bool used_exact = false;
  // exact pricing finished and proved that no column prices out
  bool proven_converged = false;
  KnapsackStatus status = KnapsackStatus::Optimal;
  long nodes = 0;  // exact solver tree size
  long cuts = 0;
};

/**
 * One pricing round.  Runs the fixing greedy first; its solution is returned
 * without exact pricing when it prices out and the Farley test shows the
 * exact solver could not improve the local dual bound (v_rmlp / v_heur <=
 * v_ld).  Otherwise the branch-and-cut solver runs, seeded with the greedy
 * solution, and the local dual bound is lifted to the Farley bound
 * v_rmlp / max(1, v_price).  A timed-out exact call still yields an honest
 * bound update; it just cannot prove convergence.
 */
PricingOutcome hybrid_pricing(const MergedPricingProblem& merged,
                              double v_rmlp, double v_ld,
                              const PricingConfig& config,
                              PricingCache* cache = nullptr);

// ---- branching ----------------------------------------------------------------

/**
 * Ryan-Foster pair selection: over the active columns, the co-occurrence
 * value rho(i, j) = sum of lambda over columns containing both items; picks
 * the pair with rho strictly between 0 and 1 maximizing min(rho, 1 - rho),
 * ties resolved lexicographically.  Throws std::logic_error when the
 * solution is fractional but no such pair exists.
 */
std::pair<int, int> select_branching_pair(const std::vector<double>& lambda,
                                          const std::vector<Column>& columns);

// ---- driver -------------------------------------------------------------------

struct CgEvent {
  long node = 0;
  int depth = 0;
  double v_rmlp = 0.0;
  double v_price = 0.0;   // exact pricing dual bound, NaN on heuristic rounds
  double v_farley = 0.0;  // v_rmlp / max(1, v_price), NaN on heuristic rounds
  double v_ld = 0.0;      // node bound after the update
  bool used_exact = false;
};

struct BnpConfig {
  double time_limit = std::numeric_limits<double>::infinity();
  // stop once (incumbent - rounded dual bound) / incumbent <= gap_tol
  double gap_tol = 0.0;
  bool hybrid_pricing = true;
  bool adaptive_breakpoints = false;
  bool column_selection = true;
  // column generation may stop once v_rmlp < ceil(v_ld): the rounded node
  // bound cannot move anymore.  Off by default; bounds stay valid either way.
  bool early_stop = false;
  double root_time_budget = std::numeric_limits<double>::infinity();
  // per exact pricing call; negative means the 0.015 * n seconds default
  double pricing_time_limit = -1.0;
  std::function<void(const CgEvent&)> observer;
};

struct SolveReport {
  int best_objective = 0;
  int initial_objective = 0;  // greedy warm start value
  double dual_bound = 0.0;    // fractional global bound
  int dual_bound_int = 0;     // ceil(dual_bound - 1e-6), capped at the primal
  double gap = 0.0;           // (best - dual_bound_int) / best
  bool solved = false;
  bool improved = false;  // beat the greedy warm start
  long nodes = 0;
  long columns = 0;  // columns added by pricing
  long exact_columns = 0;
  long cg_iterations = 0;
  long exact_calls = 0;
  long heuristic_calls = 0;      // pricing rounds settled by the greedy
  double exact_share_pct = 0.0;  // exact_columns / columns * 100
  double pricing_gap_pct = 0.0;  // mean exact-call gap (dual vs primal)
  double pricing_time = 0.0;
  double wall_time = 0.0;
};

struct BnpResult {
  SolveReport report;
  std::vector<Column> best_bins;  // partition of all items
};

/**
 * Branch and price over the set cover master: best-first tree search (local
 * bound, ties deeper first), Ryan-Foster branching, per-node column
 * generation with hybrid or exact pricing, incumbents from integral master
 * solutions, the column selection heuristic and the initial greedy packing.
 * Bounds in the report are valid on every exit path including timeouts.
 */
BnpResult solve_bnp(const SmbpInstance& inst, const BnpConfig& config = {});

}  // namespace smbp
