#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "smbp/branching.hpp"
#include "smbp/instance.hpp"
#include "smbp/io.hpp"
#include "smbp/rng.hpp"

using namespace smbp;

namespace {

SmbpInstance small_instance() {
  SmbpInstance inst;
  inst.n = 3;
  inst.capacity = 10.0;
  inst.sigma = 2.0;
  inst.a = {2.0, 3.0, 1.0};
  inst.b = {1.0, 4.0, 0.25};
  return inst;
}

SmbpInstance random_instance(Xoshiro256& rng, int n) {
  SmbpInstance inst;
  inst.n = n;
  inst.capacity = 20.0;
  inst.sigma = rng.uniform(0.0, 3.0);
  for (int i = 0; i < n; ++i) {
    inst.a.push_back(rng.uniform(0.0, 5.0));
    inst.b.push_back(rng.uniform(0.0, 4.0));
  }
  return inst;
}

}  // namespace

TEST_CASE("capacity usage formula") {
  const auto inst = small_instance();
  CHECK(capacity_usage(inst, {}) == 0.0);
  CHECK(capacity_usage(inst, {0}) == doctest::Approx(2.0 + 2.0 * 1.0));
  CHECK(capacity_usage(inst, {0, 1}) ==
        doctest::Approx(5.0 + 2.0 * std::sqrt(5.0)));
  CHECK(capacity_usage(inst, {0, 1, 2}) ==
        doctest::Approx(6.0 + 2.0 * std::sqrt(5.25)));

  SUBCASE("sigma zero reduces to a plain sum") {
    auto linear = inst;
    linear.sigma = 0.0;
    CHECK(capacity_usage(linear, {0, 1, 2}) == 2.0 + 3.0 + 1.0);
  }
}

TEST_CASE("incremental usage is nonnegative and submodular") {
  Xoshiro256 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(rng, 8);
    // S subset of T, item outside T
    double a_s = 0.0, b_s = 0.0, a_t = 0.0, b_t = 0.0;
    for (int i = 0; i < 4; ++i) {
      const bool in_s = rng.uniform01() < 0.4;
      const bool in_t = in_s || rng.uniform01() < 0.5;
      if (in_s) {
        a_s += inst.a[i];
        b_s += inst.b[i];
      }
      if (in_t) {
        a_t += inst.a[i];
        b_t += inst.b[i];
      }
    }
    const int item = 5;
    const double inc_s = incremental_usage(inst, a_s, b_s, item);
    const double inc_t = incremental_usage(inst, a_t, b_t, item);
    CHECK(inc_s >= -1e-12);
    CHECK(inc_t >= -1e-12);
    CHECK(inc_s >= inc_t - 1e-9);  // diminishing marginal load
  }
}

TEST_CASE("feasibility respects the capacity tolerance") {
  auto inst = small_instance();
  inst.capacity = capacity_usage(inst, {0, 1});
  CHECK(is_feasible_column(inst, {0, 1}));
  inst.capacity -= 1e-7;
  CHECK_FALSE(is_feasible_column(inst, {0, 1}));
}

TEST_CASE("make_column sorts and dedups items") {
  const auto inst = small_instance();
  const auto col = make_column(inst, {2, 0, 2});
  CHECK(col.items == std::vector<int>{0, 2});
  CHECK(col.usage == doctest::Approx(capacity_usage(inst, {0, 2})));
}

TEST_CASE("instance validation rejects malformed data") {
  auto inst = small_instance();
  CHECK_NOTHROW(validate_instance(inst));

  auto bad = inst;
  bad.a.pop_back();
  CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);

  bad = inst;
  bad.b[1] = -0.5;
  CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);

  bad = inst;
  bad.capacity = 4.0;  // item 1 uses 3 + 2*2 = 7 alone
  CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);

  bad = inst;
  bad.sigma = -1.0;
  CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
}

TEST_CASE("branching state checks") {
  BranchState branch;
  branch.add_together(0, 1);
  branch.add_apart(1, 2);
  branch.add_together(1, 0);  // duplicate, ignored
  CHECK(branch.together.size() == 1);

  CHECK(respects_branching({0, 1}, branch));
  CHECK(respects_branching({0, 1, 3}, branch));
  CHECK(respects_branching({2, 3}, branch));
  CHECK_FALSE(respects_branching({0, 3}, branch));     // splits 0,1
  CHECK_FALSE(respects_branching({0, 1, 2}, branch));  // joins 1,2
  CHECK(respects_branching({}, branch));
}

TEST_CASE("merge preprocessing contracts together components") {
  SmbpInstance inst;
  inst.n = 3;
  inst.capacity = 100.0;
  inst.sigma = 1.0;
  inst.a = {1.0, 2.0, 4.0};
  inst.b = {0.5, 0.5, 1.0};

  BranchState branch;
  branch.add_together(0, 1);
  branch.add_apart(1, 2);

  const std::vector<double> duals = {0.25, 0.5, 1.0};
  const auto merged = merge_preprocess(inst, branch, duals);
  REQUIRE(merged.size() == 2);
  CHECK(merged.groups[0] == std::vector<int>{0, 1});
  CHECK(merged.groups[1] == std::vector<int>{2});
  CHECK(merged.a[0] == doctest::Approx(3.0));
  CHECK(merged.b[0] == doctest::Approx(1.0));
  CHECK(merged.a[1] == doctest::Approx(4.0));
  CHECK(merged.profits[0] == doctest::Approx(0.75));
  CHECK(merged.profits[1] == doctest::Approx(1.0));
  REQUIRE(merged.conflicts.size() == 1);
  CHECK(merged.conflicts[0] == std::pair<int, int>(0, 1));
  CHECK(merged.expand({0, 1}) == std::vector<int>{0, 1, 2});

  SUBCASE("transitive contraction and conflict dedup") {
    BranchState chain;
    chain.add_together(0, 1);
    chain.add_together(1, 2);
    const auto one = merge_preprocess(inst, chain, {});
    CHECK(one.size() == 1);
    CHECK(one.a[0] == doctest::Approx(7.0));
  }

  SUBCASE("contradicting pairs are infeasible") {
    BranchState bad;
    bad.add_together(0, 1);
    bad.add_together(1, 2);
    bad.add_apart(0, 2);
    CHECK_THROWS_AS(merge_preprocess(inst, bad, {}), InfeasibleBranchError);
  }
}

TEST_CASE("instance json roundtrip is bit exact") {
  Xoshiro256 rng(5);
  auto inst = random_instance(rng, 6);
  inst.capacity = 100.0;  // keep singletons feasible
  inst.meta = InstanceMeta{"G", 0.95, 17};
  const auto path = std::filesystem::temp_directory_path() / "smbp_io_test.json";
  write_instance(path, inst);
  const auto back = read_instance(path);
  CHECK(back.n == inst.n);
  CHECK(back.capacity == inst.capacity);
  CHECK(back.sigma == inst.sigma);
  for (int i = 0; i < inst.n; ++i) {
    CHECK(back.a[i] == inst.a[i]);
    CHECK(back.b[i] == inst.b[i]);
  }
  REQUIRE(back.meta.has_value());
  CHECK(back.meta->case_tag == "G");
  CHECK(back.meta->alpha == 0.95);
  CHECK(back.meta->seed == 17);
  std::filesystem::remove(path);
}

TEST_CASE("instance json validation errors") {
  using nlohmann::json;
  CHECK_THROWS_AS(instance_from_json(json::parse(R"({"n": 1})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      instance_from_json(json::parse(
          R"({"n": 2, "capacity": 5, "sigma": 0, "a": [1], "b": [1, 1]})")),
      std::invalid_argument);
  // singleton infeasible item must be rejected
  CHECK_THROWS_AS(
      instance_from_json(json::parse(
          R"({"n": 1, "capacity": 5, "sigma": 1, "a": [5], "b": [4]})")),
      std::invalid_argument);
}

TEST_CASE("solution json roundtrip") {
  SolutionFile sol;
  sol.objective = 3;
  sol.dual_bound = 2.5;
  sol.bins = {{0, 2}, {1}, {3, 4}};
  sol.stats["nodes"] = 7;
  const auto path =
      std::filesystem::temp_directory_path() / "smbp_sol_test.json";
  write_solution(path, sol);
  const auto back = read_solution(path);
  CHECK(back.objective == 3);
  CHECK(back.dual_bound == 2.5);
  CHECK(back.bins == sol.bins);
  CHECK(back.stats.at("nodes") == 7);
  std::filesystem::remove(path);
}

TEST_CASE("knapsack json roundtrip") {
  KnapsackFile kp;
  kp.instance = small_instance();
  kp.profits = {0.5, 1.25, 0.75};
  kp.conflicts = {{0, 2}};
  const auto path =
      std::filesystem::temp_directory_path() / "smbp_knap_test.json";
  write_knapsack(path, kp);
  const auto back = read_knapsack(path);
  CHECK(back.profits == kp.profits);
  CHECK(back.conflicts == kp.conflicts);
  CHECK(back.instance.a == kp.instance.a);
  std::filesystem::remove(path);
}
