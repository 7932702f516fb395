#include "smbp/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "smbp/branching.hpp"
#include "smbp/instance.hpp"
#include "smbp/rng.hpp"

using namespace smbp;

namespace {

KnapsackProblem random_problem(Xoshiro256& rng, int m, bool with_sigma,
                               bool with_conflicts) {
  KnapsackProblem kp;
  kp.capacity = 20.0 + 60.0 * rng.uniform01();
  kp.sigma = with_sigma ? 0.5 + 2.5 * rng.uniform01() : 0.0;
  for (int i = 0; i < m; ++i) {
    kp.a.push_back(1.0 + 15.0 * rng.uniform01());
    double u = rng.uniform01();
    kp.b.push_back(with_sigma && u > 0.15 ? 200.0 * rng.uniform01() : 0.0);
    kp.profits.push_back(2.2 * rng.uniform01() - 0.2);
  }
  if (with_conflicts) {
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        if (rng.uniform01() < 0.15) kp.conflicts.emplace_back(i, j);
      }
    }
  }
  return kp;
}

bool mask_conflict_free(const KnapsackProblem& kp, std::uint32_t mask) {
  for (const auto& [u, v] : kp.conflicts) {
    if ((mask >> u & 1u) && (mask >> v & 1u)) return false;
  }
  return true;
}

double mask_load(const KnapsackProblem& kp, std::uint32_t mask) {
  double a_sum = 0.0, b_sum = 0.0;
  for (int i = 0; i < kp.size(); ++i) {
    if (mask >> i & 1u) {
      a_sum += kp.a[i];
      b_sum += kp.b[i];
    }
  }
  return a_sum + kp.sigma * std::sqrt(b_sum);
}

double mask_profit(const KnapsackProblem& kp, std::uint32_t mask) {
  double p = 0.0;
  for (int i = 0; i < kp.size(); ++i) {
    if (mask >> i & 1u) p += kp.profits[i];
  }
  return p;
}

// independent oracle: literally every subset
double brute_force_best(const KnapsackProblem& kp,
                        std::uint32_t* best_mask = nullptr) {
  const int m = kp.size();
  double best = 0.0;
  std::uint32_t arg = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (!mask_conflict_free(kp, mask)) continue;
    if (mask_load(kp, mask) > kp.capacity + 1e-9) continue;
    double p = mask_profit(kp, mask);
    if (p > best) {
      best = p;
      arg = mask;
    }
  }
  if (best_mask != nullptr) *best_mask = arg;
  return best;
}

std::uint32_t items_to_mask(const std::vector<int>& items) {
  std::uint32_t mask = 0;
  for (int i : items) mask |= 1u << i;
  return mask;
}

}  // namespace

TEST_CASE("exhaustive solver agrees with the all-subsets oracle") {
  Xoshiro256 rng(20240901);
  for (int trial = 0; trial < 120; ++trial) {
    int m = 1 + static_cast<int>(rng.uniform01() * 10.0);
    KnapsackProblem kp = random_problem(rng, m, trial % 3 != 0, trial % 2 == 0);
    KnapsackResult res = enumerate_knapsack(kp);
    double best = brute_force_best(kp);
    CAPTURE(trial);
    CHECK(res.status == KnapsackStatus::Optimal);
    CHECK(res.primal == doctest::Approx(best).epsilon(1e-12));
    CHECK(res.dual_bound == doctest::Approx(best).epsilon(1e-12));
    // the reported set must deliver the reported value
    CHECK(kp.set_profit(res.best_items) == doctest::Approx(res.primal));
    CHECK(kp.set_usage(res.best_items) <= kp.capacity + 1e-9);
    CHECK(mask_conflict_free(kp, items_to_mask(res.best_items)));
  }
  KnapsackProblem big;
  big.profits.assign(26, 1.0);
  big.a.assign(26, 1.0);
  big.b.assign(26, 0.0);
  big.capacity = 5.0;
  CHECK_THROWS_AS(enumerate_knapsack(big), std::invalid_argument);
}

TEST_CASE("greedy heuristics stay feasible and below the optimum") {
  Xoshiro256 rng(77001);
  for (int trial = 0; trial < 150; ++trial) {
    int m = 1 + static_cast<int>(rng.uniform01() * 12.0);
    KnapsackProblem kp = random_problem(rng, m, trial % 4 != 1, true);
    std::vector<int> plain = best_fit_greedy(kp);
    std::vector<int> fixed = fixing_greedy(kp);
    double opt = m <= 10 ? brute_force_best(kp) : enumerate_knapsack(kp).primal;
    for (const std::vector<int>* sol : {&plain, &fixed}) {
      CHECK(kp.set_usage(*sol) <= kp.capacity + 1e-9);
      CHECK(mask_conflict_free(kp, items_to_mask(*sol)));
      CHECK(kp.set_profit(*sol) <= opt + 1e-9);
      CHECK(std::is_sorted(sol->begin(), sol->end()));
    }
    // the restarted family includes the plain run's first pick
    CHECK(kp.set_profit(fixed) >= kp.set_profit(plain) - 1e-9);
  }
}

TEST_CASE("cardinality greedy counts a maximal conflict free packing") {
  KnapsackProblem kp;
  kp.profits = {1.0, 1.0, 1.0};
  kp.a = {0.2, 0.2, 0.2};
  kp.b = {0.0, 0.0, 0.0};
  kp.capacity = 0.7;
  CHECK(cardinality_greedy(kp) == 3);
  kp.capacity = 0.5;
  CHECK(cardinality_greedy(kp) == 2);
  kp.conflicts = {{0, 1}, {0, 2}, {1, 2}};
  CHECK(cardinality_greedy(kp) == 1);
}

TEST_CASE("separation cut is tight at its point and valid everywhere") {
  Xoshiro256 rng(31337);
  int checked_cuts = 0;
  for (int trial = 0; trial < 80; ++trial) {
    int m = 2 + static_cast<int>(rng.uniform01() * 8.0);
    KnapsackProblem kp = random_problem(rng, m, true, trial % 2 == 0);
    for (int probe = 0; probe < 20; ++probe) {
      std::uint32_t mask =
          static_cast<std::uint32_t>(rng.next() & ((1u << m) - 1u));
      if (!mask_conflict_free(kp, mask)) continue;
      double load = mask_load(kp, mask);
      if (load <= kp.capacity + 1e-9) continue;
      std::vector<int> items;
      for (int i = 0; i < m; ++i) {
        if (mask >> i & 1u) items.push_back(i);
      }
      Cut cut = separation_cut(kp, items);
      double at_hat = 0.0;
      for (int i : items) at_hat += cut.coeffs[i];
      CHECK(at_hat == doctest::Approx(load).epsilon(1e-12));
      CHECK(at_hat > cut.rhs);  // violated by the generating point
      for (std::uint32_t other = 0; other < (1u << m); ++other) {
        if (!mask_conflict_free(kp, other)) continue;
        if (mask_load(kp, other) > kp.capacity + 1e-9) continue;
        double lhs = 0.0;
        for (int i = 0; i < m; ++i) {
          if (other >> i & 1u) lhs += cut.coeffs[i];
        }
        CHECK(lhs <= cut.rhs + 1e-9);
      }
      ++checked_cuts;
      break;
    }
  }
  CHECK(checked_cuts > 30);

  KnapsackProblem tiny;
  tiny.profits = {1.0};
  tiny.a = {1.0};
  tiny.b = {1.0};
  tiny.sigma = 1.0;
  tiny.capacity = 10.0;
  CHECK_THROWS_AS(separation_cut(tiny, {0}), std::invalid_argument);
}

TEST_CASE("cut pool deduplicates at fine resolution") {
  CutPool pool;
  Cut cut;
  cut.coeffs = {1.0, 2.0, 3.0};
  cut.rhs = 4.0;
  CHECK(pool.add(cut));
  CHECK_FALSE(pool.add(cut));
  Cut close = cut;
  close.coeffs[1] += 1e-13;  // below resolution: same key
  CHECK_FALSE(pool.add(close));
  Cut other = cut;
  other.coeffs[1] += 1e-9;
  CHECK(pool.add(other));
  CHECK(pool.size() == 2);
  pool.clear();
  CHECK(pool.size() == 0);
  CHECK(pool.add(cut));
}

TEST_CASE("pwl interpolant over-estimates the parabola") {
  Xoshiro256 rng(555);
  for (int trial = 0; trial < 60; ++trial) {
    double cap = 5.0 + 95.0 * rng.uniform01();
    int h = 2 + static_cast<int>(rng.uniform01() * 8.0);
    std::vector<double> pts;
    for (int k = 0; k < h; ++k) pts.push_back(cap * rng.uniform01());
    PwlModel model = make_pwl_model(pts, cap);
    REQUIRE(model.breakpoints.size() >= 2);
    CHECK(std::is_sorted(model.breakpoints.begin(), model.breakpoints.end()));
    for (double bp : model.breakpoints) {
      CHECK(model.overestimate(bp) == doctest::Approx(model.q(bp)));
    }
    double lo = model.breakpoints.front(), hi = model.breakpoints.back();
    for (int s = 0; s <= 400; ++s) {
      double w = lo + (hi - lo) * s / 400.0;
      CHECK(model.overestimate(w) >= model.q(w) - 1e-9);
    }
    // the analytic gap is attained at segment midpoints
    double measured = 0.0;
    for (std::size_t k = 1; k < model.breakpoints.size(); ++k) {
      double mid = 0.5 * (model.breakpoints[k - 1] + model.breakpoints[k]);
      measured = std::max(measured, model.overestimate(mid) - model.q(mid));
    }
    CHECK(measured == doctest::Approx(model.max_gap()).epsilon(1e-9));
  }
}

TEST_CASE("equidistant breakpoints minimize the worst over-estimation") {
  Xoshiro256 rng(8812);
  for (int trial = 0; trial < 40; ++trial) {
    double cap = 10.0 + 80.0 * rng.uniform01();
    double w_lo = cap * 0.8 * rng.uniform01();
    double w_hi = w_lo + (cap - w_lo) * (0.2 + 0.8 * rng.uniform01());
    int h = 2 + trial % 9;  // 2..10 points
    std::vector<double> pts;
    for (int k = 0; k < h; ++k) {
      pts.push_back(w_lo + (w_hi - w_lo) * k / (h - 1));
    }
    PwlModel equi = make_pwl_model(pts, cap);
    double formula =
        (w_hi - w_lo) * (w_hi - w_lo) / (4.0 * (h - 1) * (h - 1));
    CHECK(equi.max_gap() == doctest::Approx(formula).epsilon(1e-9));

    double grid_measured = 0.0;
    for (int s = 0; s <= 10000; ++s) {
      double w = w_lo + (w_hi - w_lo) * s / 10000.0;
      grid_measured = std::max(grid_measured, equi.overestimate(w) - equi.q(w));
    }
    CHECK(std::abs(grid_measured - formula) <= 1e-6 * (1.0 + formula));

    for (int alt = 0; alt < 15; ++alt) {
      std::vector<double> rand_pts = {w_lo, w_hi};
      for (int k = 0; k < h - 2; ++k) {
        rand_pts.push_back(w_lo + (w_hi - w_lo) * rng.uniform01());
      }
      PwlModel other = make_pwl_model(rand_pts, cap);
      CHECK(other.max_gap() >= formula - 1e-9);
    }
  }
}

TEST_CASE("breakpoint builders cover the range and start at zero") {
  KnapsackProblem kp;
  kp.profits = {1.0, 1.0, 1.0};
  kp.a = {0.2, 0.2, 0.2};
  kp.b = {0.0, 0.0, 0.0};
  kp.capacity = 0.7;  // cardinality greedy packs 3
  PwlModel model = build_breakpoints(kp, 0.1, 0.7);
  REQUIRE(model.breakpoints.size() == 4);
  CHECK(model.breakpoints[0] == doctest::Approx(0.0));
  CHECK(model.breakpoints[1] == doctest::Approx(0.1));
  CHECK(model.breakpoints[2] == doctest::Approx(0.4));
  CHECK(model.breakpoints[3] == doctest::Approx(0.7));

  PwlModel flat = build_breakpoints(kp, 0.4, 0.4);
  CHECK(flat.breakpoints.front() == doctest::Approx(0.0));
  CHECK(flat.breakpoints.back() == doctest::Approx(0.4));
}

TEST_CASE("adaptive breakpoints concentrate around the center") {
  KnapsackProblem kp;  // three unit items: piece count 3
  kp.profits = {1.0, 1.0, 1.0};
  kp.a = {1.0, 1.0, 1.0};
  kp.b = {0.0, 0.0, 0.0};
  kp.capacity = 3.0;

  PwlModel model = adaptive_breakpoints(kp, 0.0, 1.0, 1.0);
  REQUIRE(model.breakpoints.size() == 3);
  CHECK(model.breakpoints[0] == doctest::Approx(0.0));
  CHECK(model.breakpoints[1] == doctest::Approx(2.0 / 3.0));
  CHECK(model.breakpoints[2] == doctest::Approx(1.0));

  // independent recomputation of the spacing rule for several piece counts
  Xoshiro256 rng(9911);
  for (int h = 2; h <= 8; ++h) {
    KnapsackProblem unit;
    unit.profits.assign(h, 1.0);
    unit.a.assign(h, 1.0);
    unit.b.assign(h, 0.0);
    unit.capacity = h;
    for (int trial = 0; trial < 8; ++trial) {
      double w_lo = 10.0 * rng.uniform01();
      double w_hi = w_lo + 1.0 + 10.0 * rng.uniform01();
      double w_c = w_lo + (w_hi - w_lo) * rng.uniform01();
      PwlModel got = adaptive_breakpoints(unit, w_lo, w_hi, w_c);

      int i_c = static_cast<int>(std::ceil((w_c - w_lo) / (w_hi - w_lo) * h));
      i_c = std::min(std::max(i_c, 1), h);
      double s_lo = 0.5 * (i_c - 1.0) * i_c;
      double s_hi = 0.5 * (h - i_c) * (h - i_c + 1.0);
      std::vector<double> expect = {0.0};
      for (int i = 1; i <= h; ++i) {
        if (i < i_c) {
          double steps = i_c - i;
          expect.push_back(w_c -
                           0.5 * steps * (steps + 1) / s_lo * (w_c - w_lo));
        } else if (i == i_c) {
          expect.push_back(w_c);
        } else {
          double steps = i - i_c;
          expect.push_back(w_c +
                           0.5 * steps * (steps + 1) / s_hi * (w_hi - w_c));
        }
      }
      expect.push_back(w_lo);
      expect.push_back(w_hi);
      std::sort(expect.begin(), expect.end());
      std::vector<double> dedup;
      for (double p : expect) {
        if (dedup.empty() || p - dedup.back() > 1e-12 * (1.0 + std::abs(p))) {
          dedup.push_back(p);
        }
      }
      REQUIRE(got.breakpoints.size() == dedup.size());
      for (std::size_t k = 0; k < dedup.size(); ++k) {
        CHECK(got.breakpoints[k] == doctest::Approx(dedup[k]).epsilon(1e-12));
      }
      CHECK(got.breakpoints.back() == doctest::Approx(w_hi));
    }
  }
}

TEST_CASE("bound tightening matches hand computed values") {
  KnapsackProblem kp;
  kp.profits = {1.0, 1.0};
  kp.a = {1.0, 2.0};
  kp.b = {4.0, 4.0};
  kp.sigma = 1.0;
  kp.capacity = 3.0;

  BoundInfo info = tighten_bounds(kp);
  CHECK(info.w_lo == doctest::Approx(3.0 - 2.0 * std::sqrt(2.0)));
  // only {item 0} is feasible: 1 + sqrt(4) = 3
  CHECK(info.w_hi == doctest::Approx(1.0).epsilon(1e-6));

  TightenOptions exact;
  exact.exact_lower = true;
  BoundInfo tight = tighten_bounds(kp, exact);
  // the reverse-convex optimum (3.0) is clamped to the upper bound
  CHECK(tight.w_lo == doctest::Approx(tight.w_hi));
  CHECK(tight.w_hi == doctest::Approx(1.0).epsilon(1e-6));

  KnapsackProblem lin;
  lin.profits = {1.0, 1.0, 1.0};
  lin.a = {3.0, 4.0, 5.0};
  lin.b = {0.0, 0.0, 0.0};
  lin.capacity = 9.0;
  BoundInfo li = tighten_bounds(lin);
  CHECK(li.w_hi == doctest::Approx(9.0).epsilon(1e-6));  // 4 + 5
  CHECK(li.w_lo == doctest::Approx(li.w_hi));
}

TEST_CASE("bound tightening under a budget still covers the range") {
  Xoshiro256 rng(4242);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = 9;
    KnapsackProblem kp = random_problem(rng, m, true, trial % 2 == 0);
    double max_a = 0.0;  // the empty set is always feasible
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      if (!mask_conflict_free(kp, mask)) continue;
      if (mask_load(kp, mask) > kp.capacity + 1e-9) continue;
      double a_sum = 0.0;
      for (int i = 0; i < m; ++i) {
        if (mask >> i & 1u) a_sum += kp.a[i];
      }
      max_a = std::max(max_a, a_sum);
    }

    TightenOptions starved;
    starved.time_limit = 0.0;
    BoundInfo cheap = tighten_bounds(kp, starved);
    BoundInfo full = tighten_bounds(kp);
    // a starved probe may not close the maximum but must never cut it off
    CHECK(cheap.w_hi >= max_a - 1e-6);
    CHECK(cheap.w_hi <= kp.capacity + 1e-9);
    CHECK(cheap.w_lo <= cheap.w_hi + 1e-12);
    CHECK(full.w_hi == doctest::Approx(max_a).epsilon(1e-6));
    CHECK(full.w_hi <= cheap.w_hi + 1e-9);
  }
}

TEST_CASE("branch and cut matches the exhaustive optimum") {
  Xoshiro256 rng(123321);
  int solved = 0;
  for (int trial = 0; trial < 90; ++trial) {
    int m = 1 + static_cast<int>(rng.uniform01() * 12.0);
    KnapsackProblem kp =
        random_problem(rng, m, trial % 5 != 2, trial % 2 == 0);
    double opt = enumerate_knapsack(kp).primal;
    BoundInfo bounds = tighten_bounds(kp);
    PwlModel model = build_breakpoints(kp, bounds.w_lo, bounds.w_hi);
    KnapsackResult res = solve_pwl_bnc(kp, model);
    CAPTURE(trial);
    CAPTURE(m);
    REQUIRE(res.status == KnapsackStatus::Optimal);
    CHECK(std::abs(res.primal - opt) <= 1e-6 * (1.0 + std::abs(opt)));
    CHECK(res.dual_bound >= opt - 1e-9);
    CHECK(kp.set_profit(res.best_items) == doctest::Approx(res.primal));
    CHECK(kp.set_usage(res.best_items) <= kp.capacity + 1e-9);
    CHECK(mask_conflict_free(kp, items_to_mask(res.best_items)));
    ++solved;

    if (trial % 10 == 0) {  // determinism: bitwise identical reruns
      KnapsackResult again = solve_pwl_bnc(kp, model);
      CHECK(again.primal == res.primal);
      CHECK(again.nodes == res.nodes);
      CHECK(again.cuts == res.cuts);
      CHECK(again.best_items == res.best_items);
    }
  }
  CHECK(solved == 90);
}

TEST_CASE("adaptive driver reaches the same optima") {
  Xoshiro256 rng(456654);
  for (int trial = 0; trial < 40; ++trial) {
    int m = 3 + static_cast<int>(rng.uniform01() * 9.0);
    KnapsackProblem kp = random_problem(rng, m, true, trial % 2 == 0);
    double opt = enumerate_knapsack(kp).primal;
    BoundInfo bounds = tighten_bounds(kp);
    KnapsackResult res =
        solve_pwl_bnc_adaptive(kp, bounds.w_lo, bounds.w_hi);
    CAPTURE(trial);
    REQUIRE(res.status == KnapsackStatus::Optimal);
    CHECK(std::abs(res.primal - opt) <= 1e-6 * (1.0 + std::abs(opt)));
    CHECK(res.dual_bound >= opt - 1e-9);
    CHECK(kp.set_usage(res.best_items) <= kp.capacity + 1e-9);
  }
}

TEST_CASE("subset sum breakpoints solve without any separation") {
  Xoshiro256 rng(777888);
  for (int trial = 0; trial < 35; ++trial) {
    int m = 3 + static_cast<int>(rng.uniform01() * 6.0);
    KnapsackProblem kp = random_problem(rng, m, true, trial % 2 == 0);
    double opt = brute_force_best(kp);

    std::vector<double> sums = {0.0};
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      if (!mask_conflict_free(kp, mask)) continue;
      double a_sum = 0.0;
      for (int i = 0; i < m; ++i) {
        if (mask >> i & 1u) a_sum += kp.a[i];
      }
      if (a_sum <= kp.capacity + 1e-9) sums.push_back(a_sum);
    }
    PwlModel model = make_pwl_model(sums, kp.capacity);
    KnapsackResult res = solve_pwl_bnc(kp, model);
    CAPTURE(trial);
    CAPTURE(m);
    REQUIRE(res.status == KnapsackStatus::Optimal);
    CHECK(res.cuts == 0);
    CHECK(std::abs(res.primal - opt) <= 1e-6 * (1.0 + std::abs(opt)));
  }
}

TEST_CASE("observer abort keeps bounds honest") {
  Xoshiro256 rng(24680);
  int aborted_runs = 0;
  for (int trial = 0; trial < 40 && aborted_runs < 8; ++trial) {
    KnapsackProblem kp = random_problem(rng, 8, true, false);
    double opt = brute_force_best(kp);
    BoundInfo bounds = tighten_bounds(kp);
    PwlModel model = build_breakpoints(kp, bounds.w_lo, bounds.w_hi);
    PwlBncOptions opts;
    opts.cut_observer = [](double) { return true; };  // abort on first cut
    KnapsackResult res = solve_pwl_bnc(kp, model, opts);
    if (res.status != KnapsackStatus::Aborted) continue;
    ++aborted_runs;
    CHECK(res.cuts == 1);
    CHECK(res.dual_bound >= opt - 1e-9);
    CHECK(res.primal <= opt + 1e-9);
  }
  CHECK(aborted_runs > 0);
}

TEST_CASE("warm start seeds the incumbent") {
  Xoshiro256 rng(1357);
  KnapsackProblem kp = random_problem(rng, 10, true, true);
  KnapsackResult exact = enumerate_knapsack(kp);
  BoundInfo bounds = tighten_bounds(kp);
  PwlModel model = build_breakpoints(kp, bounds.w_lo, bounds.w_hi);
  PwlBncOptions opts;
  opts.warm_items = &exact.best_items;
  KnapsackResult res = solve_pwl_bnc(kp, model, opts);
  CHECK(res.status == KnapsackStatus::Optimal);
  CHECK(res.primal == doctest::Approx(exact.primal));

  // an exhausted time budget still reports a valid bound pair
  PwlBncOptions timed;
  timed.time_limit = 0.0;
  timed.warm_items = &exact.best_items;
  KnapsackResult cutoff = solve_pwl_bnc(kp, model, timed);
  CHECK(cutoff.status == KnapsackStatus::TimeLimit);
  CHECK(cutoff.dual_bound >= cutoff.primal - 1e-12);
  CHECK(cutoff.primal == doctest::Approx(exact.primal));  // from the seed
}

TEST_CASE("merged pricing problems convert losslessly") {
  SmbpInstance inst;
  inst.n = 4;
  inst.capacity = 10.0;
  inst.sigma = 1.5;
  inst.a = {1.0, 2.0, 3.0, 4.0};
  inst.b = {0.5, 1.5, 2.5, 3.5};

  BranchState branch;
  branch.add_together(0, 2);
  branch.add_apart(1, 3);
  std::vector<double> duals = {0.25, 0.5, 0.75, 1.0};
  MergedPricingProblem merged = merge_preprocess(inst, branch, duals);
  KnapsackProblem kp = KnapsackProblem::from_merged(merged);

  CHECK(kp.size() == merged.size());
  CHECK(kp.sigma == inst.sigma);
  CHECK(kp.capacity == inst.capacity);
  CHECK(kp.a == merged.a);
  CHECK(kp.b == merged.b);
  CHECK(kp.profits == merged.profits);
  CHECK(kp.conflicts == merged.conflicts);
}

TEST_CASE("degenerate problems stay well behaved") {
  KnapsackProblem empty;
  empty.capacity = 5.0;
  CHECK(enumerate_knapsack(empty).primal == 0.0);
  PwlModel model = build_breakpoints(empty, 0.0, 0.0);
  KnapsackResult res = solve_pwl_bnc(empty, model);
  CHECK(res.status == KnapsackStatus::Optimal);
  CHECK(res.primal == 0.0);
  CHECK(res.best_items.empty());

  KnapsackProblem negative;
  negative.profits = {-1.0, -0.5};
  negative.a = {1.0, 1.0};
  negative.b = {1.0, 1.0};
  negative.sigma = 1.0;
  negative.capacity = 10.0;
  BoundInfo bounds = tighten_bounds(negative);
  PwlModel neg_model = build_breakpoints(negative, bounds.w_lo, bounds.w_hi);
  KnapsackResult neg = solve_pwl_bnc(negative, neg_model);
  CHECK(neg.status == KnapsackStatus::Optimal);
  CHECK(neg.primal == 0.0);
  CHECK(neg.best_items.empty());
  CHECK(enumerate_knapsack(negative).primal == 0.0);

  KnapsackProblem oversize;  // the only item never fits
  oversize.profits = {5.0};
  oversize.a = {20.0};
  oversize.b = {1.0};
  oversize.sigma = 1.0;
  oversize.capacity = 10.0;
  BoundInfo ob = tighten_bounds(oversize);
  CHECK(ob.w_hi == doctest::Approx(0.0).epsilon(1e-9));
  PwlModel omodel = build_breakpoints(oversize, ob.w_lo, ob.w_hi);
  KnapsackResult ores = solve_pwl_bnc(oversize, omodel);
  CHECK(ores.status == KnapsackStatus::Optimal);
  CHECK(ores.primal == 0.0);
}
