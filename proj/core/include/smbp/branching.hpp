#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "smbp/instance.hpp"

namespace smbp {

/**
 * Ryan-Foster branching state.  "together" pairs force both items into the
 * same bin, "apart" pairs forbid it.  Pairs are stored normalized (first <
 * second); duplicates are ignored on insert.
 */
struct BranchState {
  std::vector<std::pair<int, int>> together;
  std::vector<std::pair<int, int>> apart;

  void add_together(int i, int j);
  void add_apart(int i, int j);
};

struct InfeasibleBranchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// true iff the column could appear in a master solution under the branch
// state: every together pair is either fully inside or fully outside, and no
// apart pair is fully inside
bool respects_branching(const std::vector<int>& items,
                        const BranchState& branch);

/**
 * The pricing problem after contracting together-pairs.  Merged item g
 * represents the original items in groups[g]; its coefficients and profit
 * are the sums over the group.  Apart pairs become pairwise conflicts
 * between merged items.
 */
struct MergedPricingProblem {
  std::vector<std::vector<int>> groups;  // merged item -> sorted originals
  std::vector<int> group_of;             // original item -> merged item
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> profits;
  std::vector<std::pair<int, int>> conflicts;  // normalized, deduped
  double sigma = 0.0;
  double capacity = 0.0;

  int size() const { return static_cast<int>(groups.size()); }

  // original item set represented by a merged item subset
  std::vector<int> expand(const std::vector<int>& merged_items) const;

  // recompute profits for new duals without redoing the contraction
  void fold_profits(const std::vector<double>& duals);
};

/**
 * Contract the together components via union-find and lift the apart pairs.
 * Throws InfeasibleBranchError when an apart pair ends up inside a single
 * component (the branch admits no column containing either item set).
 */
MergedPricingProblem merge_preprocess(const SmbpInstance& inst,
                                      const BranchState& branch,
                                      const std::vector<double>& duals);

}  // namespace smbp
