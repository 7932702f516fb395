#include "smbp/bnp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <utility>

namespace smbp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPriceTol = 1e-6;  // a column prices out above 1 + this
constexpr double kIntTol = 1e-6;    // lambda integrality detection

// bin counts are integral, so a fractional bound b rules out everything
// below ceil(b - 1e-6); the slack absorbs float noise in b
int ceil_bins(double bound) {
  return static_cast<int>(std::ceil(bound - 1e-6));
}

double seconds_since(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - from)
      .count();
}

}  // namespace

// ---- greedy min-utilization -------------------------------------------------

std::vector<Column> greedy_min_utilization(const SmbpInstance& inst) {
  for (int i = 0; i < inst.n; ++i) {
    double solo = inst.a[i] + inst.sigma * std::sqrt(inst.b[i]);
    if (solo > inst.capacity + kFeasTol) {
      throw std::invalid_argument("greedy: item " + std::to_string(i) +
                                  " does not fit a bin alone");
    }
  }

  std::vector<std::vector<int>> bins;
  std::vector<double> a_sum, b_sum;
  std::vector<char> packed(inst.n, 0);
  int remaining = inst.n;
  while (remaining > 0) {
    int best_item = -1;
    std::size_t best_bin = 0;
    double best_gamma = kInf;
    for (int i = 0; i < inst.n; ++i) {
      if (packed[i]) continue;
      for (std::size_t p = 0; p < bins.size(); ++p) {
        double load = a_sum[p] + inst.a[i] +
                      inst.sigma * std::sqrt(b_sum[p] + inst.b[i]);
        if (load > inst.capacity + kFeasTol) continue;
        double gamma = incremental_usage(inst, a_sum[p], b_sum[p], i);
        if (gamma < best_gamma) {
          best_gamma = gamma;
          best_item = i;
          best_bin = p;
        }
      }
    }
    if (best_item < 0) {
      // no open bin accommodates any unpacked item
      bins.emplace_back();
      a_sum.push_back(0.0);
      b_sum.push_back(0.0);
      continue;
    }
    bins[best_bin].push_back(best_item);
    a_sum[best_bin] += inst.a[best_item];
    b_sum[best_bin] += inst.b[best_item];
    packed[best_item] = 1;
    --remaining;
  }

  std::vector<Column> out;
  out.reserve(bins.size());
  for (auto& bin : bins) {
    if (!bin.empty()) out.push_back(make_column(inst, std::move(bin)));
  }
  return out;
}

// ---- column selection ---------------------------------------------------------

std::optional<std::vector<Column>> column_selection_heuristic(
    const Column& forced, const std::vector<Column>& pool,
    const SmbpInstance& inst) {
  std::vector<char> covered(inst.n, 0);
  int left = inst.n;
  auto mark = [&](const std::vector<int>& items) {
    for (int i : items) {
      if (!covered[i]) {
        covered[i] = 1;
        --left;
      }
    }
  };

  std::vector<const std::vector<int>*> chosen;
  chosen.push_back(&forced.items);
  mark(forced.items);

  while (left > 0) {
    int best = -1, best_new = 0;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      int fresh = 0;
      for (int i : pool[p].items) fresh += covered[i] ? 0 : 1;
      if (fresh > best_new) {
        best_new = fresh;
        best = static_cast<int>(p);
      }
    }
    if (best < 0) return std::nullopt;  // some item sits in no pool column
    chosen.push_back(&pool[best].items);
    mark(pool[best].items);
  }

  // the cover may assign an item twice; keep its first bin (dropping items
  // never breaks feasibility: the load is monotone)
  std::vector<char> kept(inst.n, 0);
  std::vector<Column> out;
  for (const auto* items : chosen) {
    std::vector<int> rest;
    for (int i : *items) {
      if (!kept[i]) {
        kept[i] = 1;
        rest.push_back(i);
      }
    }
    if (!rest.empty()) out.push_back(make_column(inst, std::move(rest)));
  }
  return out;
}

// ---- hybrid pricing -----------------------------------------------------------

PricingOutcome hybrid_pricing(const MergedPricingProblem& merged,
                              double v_rmlp, double v_ld,
                              const PricingConfig& config,
                              PricingCache* cache) {
  PricingOutcome out;
  out.v_ld = v_ld;

  KnapsackProblem kp = KnapsackProblem::from_merged(merged);
  std::vector<int> heur = fixing_greedy(kp);
  double v_heur = kp.set_profit(heur);

  // Farley test: when v_rmlp / v_heur already sits at or below the local
  // bound, exact pricing cannot lift it, so a priced-out heuristic column
  // suffices for this round
  if (config.hybrid && v_heur > 1.0 + kPriceTol && v_rmlp / v_heur <= v_ld) {
    out.merged_items = std::move(heur);
    out.value = v_heur;
    return out;
  }

  PricingCache local;
  PricingCache* ctx = cache ? cache : &local;
  if (!ctx->ready) {
    // cap the probe like the pricing solve itself: a timed-out probe still
    // returns a covering range, it is just wider
    TightenOptions tight;
    tight.time_limit = config.time_limit;
    ctx->bounds = tighten_bounds(kp, tight);
    if (!config.adaptive) {
      ctx->model = build_breakpoints(kp, ctx->bounds.w_lo, ctx->bounds.w_hi);
    }
    ctx->ready = true;
  }

  PwlBncOptions opts;
  opts.time_limit = config.time_limit;
  opts.cut_pool = &ctx->pool;
  if (!heur.empty()) opts.warm_items = &heur;

  KnapsackResult res =
      config.adaptive
          ? solve_pwl_bnc_adaptive(kp, ctx->bounds.w_lo, ctx->bounds.w_hi,
                                   opts)
          : solve_pwl_bnc(kp, ctx->model, opts);

  out.used_exact = true;
  out.status = res.status;
  out.nodes = res.nodes;
  out.cuts = res.cuts;
  out.exact_primal = res.primal;
  out.v_price = std::max(res.dual_bound, res.primal);
  // below a pricing value of 1 no column prices out and v_rmlp itself is the
  // master optimum, hence the clamp in the Farley ratio
  out.v_ld = std::max(v_ld, v_rmlp / std::max(1.0, out.v_price));
  out.proven_converged = res.status == KnapsackStatus::Optimal &&
                         out.v_price <= 1.0 + kPriceTol;
  if (res.primal > 1.0 + kPriceTol) {
    out.merged_items = res.best_items;
    out.value = res.primal;
  }
  return out;
}

// ---- branching pair -------------------------------------------------------------

std::pair<int, int> select_branching_pair(const std::vector<double>& lambda,
                                          const std::vector<Column>& columns) {
  std::map<std::pair<int, int>, double> rho;
  for (std::size_t p = 0; p < columns.size() && p < lambda.size(); ++p) {
    if (lambda[p] <= kIntTol) continue;
    const auto& items = columns[p].items;  // strictly increasing
    for (std::size_t u = 0; u < items.size(); ++u) {
      for (std::size_t v = u + 1; v < items.size(); ++v) {
        rho[{items[u], items[v]}] += lambda[p];
      }
    }
  }

  std::pair<int, int> best{-1, -1};
  double best_score = 0.0;
  for (const auto& [pair, r] : rho) {
    if (r <= kIntTol || r >= 1.0 - kIntTol) continue;
    double score = std::min(r, 1.0 - r);
    // strict improvement keeps the lexicographically first pair on ties
    // (map iteration is ordered)
    if (score > best_score) {
      best_score = score;
      best = pair;
    }
  }
  if (best.first < 0) {
    throw std::logic_error("branching: fractional solution without a "
                           "fractional item pair");
  }
  return best;
}

// ---- driver ---------------------------------------------------------------------

namespace {

struct TreeNode {
  BranchState branch;
  double v_ld = 0.0;
  int depth = 0;
  long id = 0;
  int boost = 0;  // doubles the pricing time limit after each stall
};

// min v_ld first, deeper first on ties, then older
struct NodeOrder {
  bool operator()(const TreeNode& x, const TreeNode& y) const {
    if (x.v_ld != y.v_ld) return x.v_ld > y.v_ld;
    if (x.depth != y.depth) return x.depth < y.depth;
    return x.id > y.id;
  }
};

bool lambda_integral(const std::vector<double>& lambda) {
  for (double v : lambda) {
    if (std::fabs(v - std::round(v)) > kIntTol) return false;
    if (std::round(v) > 1.5) return false;
  }
  return true;
}

// chosen cover -> partition, stripping repeated items (first bin keeps them)
std::vector<Column> decode_partition(const SmbpInstance& inst,
                                     const MasterState& master,
                                     const std::vector<double>& lambda) {
  std::vector<char> kept(inst.n, 0);
  std::vector<Column> out;
  for (int p = 0; p < master.num_columns(); ++p) {
    if (p >= static_cast<int>(lambda.size()) || lambda[p] < 0.5) continue;
    std::vector<int> rest;
    for (int i : master.column(p).items) {
      if (!kept[i]) {
        kept[i] = 1;
        rest.push_back(i);
      }
    }
    if (!rest.empty()) out.push_back(make_column(inst, std::move(rest)));
  }
  return out;
}

}  // namespace

BnpResult solve_bnp(const SmbpInstance& inst, const BnpConfig& config) {
  validate_instance(inst);
  const auto t0 = std::chrono::steady_clock::now();

  BnpResult result;
  SolveReport& rep = result.report;

  result.best_bins = greedy_min_utilization(inst);
  int incumbent = static_cast<int>(result.best_bins.size());
  rep.initial_objective = incumbent;

  MasterState master(inst);
  for (const Column& col : result.best_bins) master.add_column(col.items);

  const double pricing_base = config.pricing_time_limit >= 0.0
                                  ? config.pricing_time_limit
                                  : 0.015 * inst.n;

  // sum a_i / capacity bins are needed for the linear part of the load alone
  double root_lb = 0.0;
  for (double ai : inst.a) root_lb += ai;
  root_lb = std::max(1.0, root_lb / inst.capacity);

  std::priority_queue<TreeNode, std::vector<TreeNode>, NodeOrder> open;
  long next_id = 0;
  open.push(TreeNode{BranchState{}, root_lb, 0, next_id++, 0});

  double exact_gap_sum = 0.0;
  bool out_of_time = false;

  auto take_partition = [&](std::vector<Column> bins) {
    if (static_cast<int>(bins.size()) < incumbent) {
      incumbent = static_cast<int>(bins.size());
      result.best_bins = std::move(bins);
    }
  };

  while (!open.empty()) {
    if (ceil_bins(open.top().v_ld) >= incumbent) break;  // optimum proven
    if (incumbent > 0 && config.gap_tol > 0.0) {
      double g = static_cast<double>(incumbent - ceil_bins(open.top().v_ld)) /
                 incumbent;
      if (g <= config.gap_tol) break;
    }
    if (seconds_since(t0) >= config.time_limit) {
      out_of_time = true;
      break;
    }

    TreeNode node = open.top();
    open.pop();
    if (ceil_bins(node.v_ld) >= incumbent) continue;

    ++rep.nodes;
    const auto node_start = std::chrono::steady_clock::now();

    MergedPricingProblem merged;
    try {
      merged = merge_preprocess(inst, node.branch,
                                std::vector<double>(inst.n, 0.0));
    } catch (const InfeasibleBranchError&) {
      continue;
    }
    // a together-component that exceeds the capacity admits no column
    // containing it, so no cover exists in this subtree
    {
      bool impossible = false;
      for (int g = 0; g < merged.size() && !impossible; ++g) {
        double load = merged.a[g] + merged.sigma * std::sqrt(merged.b[g]);
        impossible = load > merged.capacity + kFeasTol;
      }
      if (impossible) continue;
    }

    master.apply_branch(node.branch);
    for (int g = 0; g < merged.size(); ++g) {
      master.add_column(merged.expand({g}));
    }

    PricingCache cache;
    PricingConfig pricing;
    pricing.hybrid = config.hybrid_pricing;
    pricing.adaptive = config.adaptive_breakpoints;

    RmlpSolution rmlp;
    bool fathomed = false;   // bound exceeded the incumbent mid-loop
    bool converged = false;  // pricing proved no column prices out
    bool stalled = false;    // pricing ran dry without an answer

    while (true) {
      if (seconds_since(t0) >= config.time_limit) {
        out_of_time = true;
        stalled = true;
        break;
      }
      rmlp = master.solve();
      ++rep.cg_iterations;

      if (!rmlp.artificial_active && lambda_integral(rmlp.lambda)) {
        take_partition(decode_partition(inst, master, rmlp.lambda));
        if (ceil_bins(node.v_ld) >= incumbent) {
          fathomed = true;
          break;
        }
      }

      merged.fold_profits(rmlp.duals);
      double budget = pricing_base * static_cast<double>(1L << std::min(
                                         node.boost, 20));
      budget = std::min(budget, config.time_limit - seconds_since(t0));
      if (budget <= 0.0) {
        out_of_time = true;
        stalled = true;
        break;
      }
      pricing.time_limit = budget;

      const auto p0 = std::chrono::steady_clock::now();
      PricingOutcome round =
          hybrid_pricing(merged, rmlp.objective, node.v_ld, pricing, &cache);
      rep.pricing_time += seconds_since(p0);
      if (round.used_exact) {
        ++rep.exact_calls;
        double denom = std::max(round.v_price, 1e-9);
        exact_gap_sum +=
            std::max(0.0, (round.v_price - round.exact_primal) / denom) *
            100.0;
      } else {
        ++rep.heuristic_calls;
      }
      node.v_ld = std::max(node.v_ld, round.v_ld);

      if (config.observer) {
        CgEvent ev;
        ev.node = node.id;
        ev.depth = node.depth;
        ev.v_rmlp = rmlp.objective;
        ev.used_exact = round.used_exact;
        ev.v_price = round.used_exact
                         ? round.v_price
                         : std::numeric_limits<double>::quiet_NaN();
        ev.v_farley = round.used_exact
                          ? rmlp.objective / std::max(1.0, round.v_price)
                          : std::numeric_limits<double>::quiet_NaN();
        ev.v_ld = node.v_ld;
        config.observer(ev);
      }

      if (ceil_bins(node.v_ld) >= incumbent) {
        fathomed = true;
        break;
      }

      if (round.merged_items.empty()) {
        if (round.proven_converged) {
          converged = true;
        } else {
          stalled = true;  // timed out before proving anything
        }
        break;
      }

      int added = master.add_column(merged.expand(round.merged_items));
      if (added < 0) {
        // the improving column is already pooled: the LP and the pricing
        // tolerances disagree below kPriceTol, so branching must finish the
        // job with the bound collected so far
        break;
      }
      ++rep.columns;
      if (round.used_exact) ++rep.exact_columns;

      if (config.column_selection) {
        auto packed = column_selection_heuristic(master.column(added),
                                                 master.columns(), inst);
        if (packed) take_partition(std::move(*packed));
      }

      if (config.early_stop && node.v_ld <= rmlp.objective + 1e-9 &&
          rmlp.objective < std::ceil(node.v_ld) - 1e-9) {
        break;  // the rounded node bound can no longer move
      }
      if (node.id == 0 &&
          seconds_since(node_start) > config.root_time_budget) {
        break;  // root budget exhausted: branch with the current state
      }
    }

    if (converged) {
      node.v_ld = std::max(node.v_ld, rmlp.objective);
      if (config.observer) {
        CgEvent ev;
        ev.node = node.id;
        ev.depth = node.depth;
        ev.v_rmlp = rmlp.objective;
        ev.v_price = std::numeric_limits<double>::quiet_NaN();
        ev.v_farley = std::numeric_limits<double>::quiet_NaN();
        ev.v_ld = node.v_ld;
        config.observer(ev);
      }
    }
    if (fathomed) continue;
    if (out_of_time) {
      node.id = next_id++;
      open.push(node);  // keep its bound in the report
      break;
    }
    if (ceil_bins(node.v_ld) >= incumbent) continue;

    bool integral_now =
        !rmlp.artificial_active && lambda_integral(rmlp.lambda);
    if (converged && integral_now) {
      continue;  // the node optimum is integral: the subtree is done
    }
    if (stalled || rmlp.artificial_active || integral_now) {
      // pricing ran dry, or the solution offers no fractional pair while
      // the node LP is not solved yet; requeue with a doubled budget
      node.boost = std::min(node.boost + 1, 20);
      node.id = next_id++;
      open.push(node);
      continue;
    }

    auto pair = select_branching_pair(rmlp.lambda, master.columns());
    TreeNode together{node.branch, node.v_ld, node.depth + 1, next_id++, 0};
    together.branch.add_together(pair.first, pair.second);
    TreeNode apart{node.branch, node.v_ld, node.depth + 1, next_id++, 0};
    apart.branch.add_apart(pair.first, pair.second);
    open.push(std::move(together));
    open.push(std::move(apart));
  }

  double raw = open.empty() ? static_cast<double>(incumbent)
                            : open.top().v_ld;
  rep.best_objective = incumbent;
  rep.dual_bound = std::min(raw, static_cast<double>(incumbent));
  rep.dual_bound_int = std::min(ceil_bins(raw), incumbent);
  rep.gap = incumbent > 0
                ? static_cast<double>(incumbent - rep.dual_bound_int) /
                      incumbent
                : 0.0;
  rep.solved = rep.gap <= config.gap_tol + 1e-12;
  rep.improved = incumbent < rep.initial_objective;
  rep.exact_share_pct =
      rep.columns > 0 ? 100.0 * rep.exact_columns / rep.columns : 0.0;
  rep.pricing_gap_pct =
      rep.exact_calls > 0 ? exact_gap_sum / rep.exact_calls : 0.0;
  rep.wall_time = seconds_since(t0);
  return result;
}

}  // namespace smbp
