#include <benchmark/benchmark.h>

#include <vector>

#include "smbp/bnp.hpp"
#include "smbp/branching.hpp"
#include "smbp/generator.hpp"
#include "smbp/knapsack.hpp"
#include "smbp/master.hpp"
#include "smbp/oracle.hpp"
#include "smbp/rng.hpp"

namespace {

smbp::SmbpInstance sized_instance(int n, std::uint64_t seed) {
  smbp::GeneratorConfig config;
  config.n = n;
  config.alpha = 0.9;
  config.gen_case = smbp::GenCase::Hoeffding;
  config.seed = seed;
  return smbp::generate_instance(config);
}

// a pricing problem with duals that keep several columns attractive
smbp::MergedPricingProblem pricing_problem(const smbp::SmbpInstance& inst) {
  std::vector<double> duals(inst.n);
  smbp::Xoshiro256 rng(7);
  for (double& d : duals) d = 0.2 + 0.8 * rng.uniform01();
  return smbp::merge_preprocess(inst, smbp::BranchState{}, duals);
}

void BM_generate_instance(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sized_instance(static_cast<int>(state.range(0)),
                                            seed++));
  }
}
BENCHMARK(BM_generate_instance)->Arg(40)->Arg(200);

void BM_greedy_packing(benchmark::State& state) {
  smbp::SmbpInstance inst =
      sized_instance(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smbp::greedy_min_utilization(inst));
  }
}
BENCHMARK(BM_greedy_packing)->Arg(40)->Arg(200);

void BM_master_resolve(benchmark::State& state) {
  smbp::SmbpInstance inst = sized_instance(40, 3);
  smbp::MasterState master(inst);
  for (int i = 0; i < inst.n; ++i) master.add_column({i});
  for (const smbp::Column& bin : smbp::greedy_min_utilization(inst)) {
    master.add_column(bin.items);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(master.solve());
  }
}
BENCHMARK(BM_master_resolve);

void BM_pricing_exact(benchmark::State& state) {
  smbp::SmbpInstance inst =
      sized_instance(static_cast<int>(state.range(0)), 5);
  smbp::MergedPricingProblem merged = pricing_problem(inst);
  smbp::KnapsackProblem kp = smbp::KnapsackProblem::from_merged(merged);
  smbp::BoundInfo bounds = smbp::tighten_bounds(kp);
  for (auto _ : state) {
    smbp::PwlModel model =
        smbp::build_breakpoints(kp, bounds.w_lo, bounds.w_hi);
    benchmark::DoNotOptimize(smbp::solve_pwl_bnc(kp, model));
  }
}
BENCHMARK(BM_pricing_exact)->Arg(12)->Arg(20);

void BM_pricing_greedy(benchmark::State& state) {
  smbp::SmbpInstance inst = sized_instance(40, 5);
  smbp::MergedPricingProblem merged = pricing_problem(inst);
  smbp::KnapsackProblem kp = smbp::KnapsackProblem::from_merged(merged);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smbp::fixing_greedy(kp));
  }
}
BENCHMARK(BM_pricing_greedy);

void BM_kelley_bound(benchmark::State& state) {
  smbp::SmbpInstance inst = sized_instance(10, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smbp::kelley_compact_relaxation(inst));
  }
}
BENCHMARK(BM_kelley_bound);

void BM_solve_bnp(benchmark::State& state) {
  smbp::SmbpInstance inst =
      sized_instance(static_cast<int>(state.range(0)), 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smbp::solve_bnp(inst));
  }
}
BENCHMARK(BM_solve_bnp)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
