#pragma once

#include <vector>

#include "smbp/instance.hpp"

namespace smbp {

struct BinPackingResult {
  int bins = 0;
  std::vector<std::vector<int>> partition;  // item indices per bin
};

/**
 * Exact minimum bin count by dynamic programming over item subsets: a state
 * is the set of packed items, a transition packs one feasible column
 * containing the lowest unpacked item.  Enumerating submasks costs 3^n, so
 * n is capped at 14 (std::invalid_argument beyond).
 */
BinPackingResult exact_bin_packing(const SmbpInstance& inst);

struct KelleyResult {
  double value = 0.0;  // lower bound on the compact assignment relaxation
  int iterations = 0;
  bool converged = false;
};

/**
 * Cutting plane bound for the compact assignment relaxation: assignment
 * variables v_ij and bin indicators y_j, the per-bin load written in the
 * convex norm form sum a_i v_ij + sigma sqrt(sum b_i v_ij^2) (equal to the
 * set-function load at binary points) and replaced by accumulating
 * linearizations a_i + sigma b_i v_ij / sqrt(sum b v^2) taken at the current
 * iterate.  The constraint is convex, so each linearization under-estimates
 * it on [0,1]^n and the value is a valid lower bound at every iteration,
 * growing monotonically.
 */
KelleyResult kelley_compact_relaxation(const SmbpInstance& inst,
                                       double tol = 1e-6,
                                       int max_iters = 400);

/**
 * Set cover LP over every feasible column, i.e. the fully generated master
 * relaxation.  Exponential column count: n is capped at 10.  Throws
 * std::runtime_error when some item fits no column.
 */
double full_set_cover_lp(const SmbpInstance& inst);

}  // namespace smbp
