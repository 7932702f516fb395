#include "smbp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>

#include "smbp/lp.hpp"

namespace smbp {

BinPackingResult exact_bin_packing(const SmbpInstance& inst) {
  const int n = inst.n;
  if (n > 14) {
    throw std::invalid_argument("exact_bin_packing: more than 14 items");
  }
  if (n == 0) return {};
  const std::uint32_t full = (1u << n) - 1u;

  std::vector<double> a_sum(full + 1, 0.0), b_sum(full + 1, 0.0);
  std::vector<char> feasible(full + 1, 0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    int low = std::countr_zero(mask);
    std::uint32_t rest = mask & (mask - 1);
    a_sum[mask] = a_sum[rest] + inst.a[low];
    b_sum[mask] = b_sum[rest] + inst.b[low];
    double load = a_sum[mask] + inst.sigma * std::sqrt(b_sum[mask]);
    feasible[mask] = load <= inst.capacity + kFeasTol ? 1 : 0;
  }

  constexpr int kUnreachable = 1 << 20;
  std::vector<int> dp(full + 1, kUnreachable);
  std::vector<std::uint32_t> parent(full + 1, 0);
  dp[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::uint32_t low_bit = mask & (0u - mask);
    // every column of an optimal packing of `mask` may be assumed to hold
    // its lowest item, so only submasks containing it are transitions
    for (std::uint32_t sub = mask; sub != 0; sub = (sub - 1) & mask) {
      if ((sub & low_bit) == 0 || !feasible[sub]) continue;
      int cand = dp[mask ^ sub] + 1;
      if (cand < dp[mask]) {
        dp[mask] = cand;
        parent[mask] = sub;
      }
    }
  }
  if (dp[full] >= kUnreachable) {
    throw std::runtime_error("exact_bin_packing: an item fits no bin");
  }

  BinPackingResult res;
  res.bins = dp[full];
  for (std::uint32_t mask = full; mask != 0; mask ^= parent[mask]) {
    std::vector<int> bin;
    for (int i = 0; i < n; ++i) {
      if (parent[mask] >> i & 1u) bin.push_back(i);
    }
    res.partition.push_back(std::move(bin));
  }
  return res;
}

KelleyResult kelley_compact_relaxation(const SmbpInstance& inst, double tol,
                                       int max_iters) {
  const int n = inst.n;
  KelleyResult out;
  if (n == 0) {
    out.converged = true;
    return out;
  }

  LpProblem lp;
  lp.sense = ObjSense::Minimize;
  auto v_col = [n](int item, int bin) { return item * n + bin; };
  const int y0 = n * n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) lp.add_column(0.0, 0.0, 1.0);
  }
  for (int j = 0; j < n; ++j) lp.add_column(1.0, 0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < n; ++j) row.emplace_back(v_col(i, j), 1.0);
    lp.add_row(RowSense::EQ, 1.0, row);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      lp.add_row(RowSense::LE, 0.0, {{v_col(i, j), 1.0}, {y0 + j, -1.0}});
    }
  }

  Basis basis;
  std::set<std::vector<long long>> cut_keys;
  for (int iter = 1; iter <= max_iters; ++iter) {
    LpSolution sol;
    try {
      sol = solve_lp(lp, basis.empty() ? nullptr : &basis);
    } catch (const LpNumericalError&) {
      // tailing-off cut matrices can defeat the simplex outright; every
      // earlier iterate already gave a valid bound, so stop on the last one
      break;
    }
    // the relaxation is feasible and bounded by construction, so anything
    // non optimal is the simplex iteration cap: same stall, same exit
    if (sol.status != LpStatus::Optimal) break;
    basis = sol.basis;
    out.value = sol.objective;
    out.iterations = iter;

    bool violated = false, added = false;
    for (int j = 0; j < n; ++j) {
      double a_dot = 0.0, b_dot = 0.0;
      for (int i = 0; i < n; ++i) {
        double v = sol.x[v_col(i, j)];
        a_dot += inst.a[i] * v;
        b_dot += inst.b[i] * v * v;
      }
      double load = a_dot + inst.sigma * std::sqrt(std::max(0.0, b_dot));
      if (load <= inst.capacity * sol.x[y0 + j] + tol) continue;
      violated = true;
      double root = std::max(std::sqrt(std::max(0.0, b_dot)), 1e-12);
      std::vector<double> coefs(n);
      double maxc = inst.capacity;
      for (int i = 0; i < n; ++i) {
        coefs[i] =
            inst.a[i] + inst.sigma * inst.b[i] * sol.x[v_col(i, j)] / root;
        maxc = std::max(maxc, std::fabs(coefs[i]));
      }
      // unit max-norm scaling keeps the cut matrix well conditioned, and a
      // relative dedup resolution keeps near-parallel linearizations out
      const double scale = 1.0 / std::max(maxc, 1e-12);
      std::vector<std::pair<int, double>> row;
      std::vector<long long> key = {j};
      for (int i = 0; i < n; ++i) {
        row.emplace_back(v_col(i, j), coefs[i] * scale);
        key.push_back(std::llround(coefs[i] * scale * 1e6));
      }
      row.emplace_back(y0 + j, -inst.capacity * scale);
      if (cut_keys.insert(std::move(key)).second) {
        lp.add_row(RowSense::LE, 0.0, row);
        added = true;
      }
    }
    if (!violated) {
      out.converged = true;
      break;
    }
    if (!added) break;  // every violated linearization is already present
  }
  return out;
}

double full_set_cover_lp(const SmbpInstance& inst) {
  const int n = inst.n;
  if (n > 10) {
    throw std::invalid_argument("full_set_cover_lp: more than 10 items");
  }
  if (n == 0) return 0.0;

  LpProblem lp;
  lp.sense = ObjSense::Minimize;
  for (int i = 0; i < n; ++i) lp.add_row(RowSense::GE, 1.0);

  const std::uint32_t full = (1u << n) - 1u;
  std::vector<double> a_sum(full + 1, 0.0), b_sum(full + 1, 0.0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    int low = std::countr_zero(mask);
    std::uint32_t rest = mask & (mask - 1);
    a_sum[mask] = a_sum[rest] + inst.a[low];
    b_sum[mask] = b_sum[rest] + inst.b[low];
    double load = a_sum[mask] + inst.sigma * std::sqrt(b_sum[mask]);
    if (load > inst.capacity + kFeasTol) continue;
    std::vector<std::pair<int, double>> entries;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1u) entries.emplace_back(i, 1.0);
    }
    lp.add_column(1.0, 0.0, std::numeric_limits<double>::infinity(), entries);
  }

  LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Infeasible) {
    throw std::runtime_error("full_set_cover_lp: an item fits no column");
  }
  if (sol.status != LpStatus::Optimal) {
    throw std::runtime_error("full_set_cover_lp: solve failed");
  }
  return sol.objective;
}

}  // namespace smbp
