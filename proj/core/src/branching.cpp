#include "smbp/branching.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace smbp {

namespace {

std::pair<int, int> normalized(int i, int j) {
  return i < j ? std::make_pair(i, j) : std::make_pair(j, i);
}

void insert_pair(std::vector<std::pair<int, int>>& pairs, int i, int j) {
  if (i == j) {
    throw std::invalid_argument("branching pair needs two distinct items");
  }
  auto p = normalized(i, j);
  if (std::find(pairs.begin(), pairs.end(), p) == pairs.end()) {
    pairs.push_back(p);
  }
}

// plain union-find with path halving
struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace

void BranchState::add_together(int i, int j) { insert_pair(together, i, j); }

void BranchState::add_apart(int i, int j) { insert_pair(apart, i, j); }

bool respects_branching(const std::vector<int>& items,
                        const BranchState& branch) {
  auto contains = [&items](int v) {
    return std::binary_search(items.begin(), items.end(), v);
  };
  for (const auto& [i, j] : branch.together) {
    if (contains(i) != contains(j)) return false;
  }
  for (const auto& [i, j] : branch.apart) {
    if (contains(i) && contains(j)) return false;
  }
  return true;
}

std::vector<int> MergedPricingProblem::expand(
    const std::vector<int>& merged_items) const {
  std::vector<int> out;
  for (int g : merged_items) {
    out.insert(out.end(), groups[g].begin(), groups[g].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void MergedPricingProblem::fold_profits(const std::vector<double>& duals) {
  for (int g = 0; g < size(); ++g) {
    double sum = 0.0;
    for (int i : groups[g]) sum += duals[i];
    profits[g] = sum;
  }
}

MergedPricingProblem merge_preprocess(const SmbpInstance& inst,
                                      const BranchState& branch,
                                      const std::vector<double>& duals) {
  UnionFind uf(inst.n);
  for (const auto& [i, j] : branch.together) uf.unite(i, j);

  // groups ordered by their smallest member so the contraction is stable
  MergedPricingProblem merged;
  merged.sigma = inst.sigma;
  merged.capacity = inst.capacity;
  merged.group_of.assign(inst.n, -1);
  std::vector<int> root_group(inst.n, -1);
  for (int i = 0; i < inst.n; ++i) {
    int r = uf.find(i);
    if (root_group[r] < 0) {
      root_group[r] = merged.size();
      merged.groups.emplace_back();
    }
    merged.group_of[i] = root_group[r];
    merged.groups[merged.group_of[i]].push_back(i);
  }
  merged.a.assign(merged.size(), 0.0);
  merged.b.assign(merged.size(), 0.0);
  merged.profits.assign(merged.size(), 0.0);
  for (int g = 0; g < merged.size(); ++g) {
    for (int i : merged.groups[g]) {
      merged.a[g] += inst.a[i];
      merged.b[g] += inst.b[i];
    }
  }
  if (!duals.empty()) {
    merged.fold_profits(duals);
  }

  std::set<std::pair<int, int>> lifted;
  for (const auto& [i, j] : branch.apart) {
    int gi = merged.group_of[i];
    int gj = merged.group_of[j];
    if (gi == gj) {
      throw InfeasibleBranchError(
          "apart pair collapsed into one together component");
    }
    lifted.insert(gi < gj ? std::make_pair(gi, gj) : std::make_pair(gj, gi));
  }
  merged.conflicts.assign(lifted.begin(), lifted.end());
  return merged;
}

}  // namespace smbp
