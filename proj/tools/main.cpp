#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "smbp/bench.hpp"
#include "smbp/bnp.hpp"
#include "smbp/generator.hpp"
#include "smbp/io.hpp"
#include "smbp/knapsack.hpp"
#include "smbp/metrics.hpp"
#include "smbp/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace smbp;

namespace {

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

json report_to_json(const SolveReport& rep) {
  return json{{"best_objective", rep.best_objective},
              {"initial_objective", rep.initial_objective},
              {"dual_bound", rep.dual_bound},
              {"dual_bound_int", rep.dual_bound_int},
              {"gap", rep.gap},
              {"solved", rep.solved},
              {"improved", rep.improved},
              {"nodes", rep.nodes},
              {"columns", rep.columns},
              {"exact_columns", rep.exact_columns},
              {"cg_iterations", rep.cg_iterations},
              {"exact_calls", rep.exact_calls},
              {"heuristic_calls", rep.heuristic_calls},
              {"exact_share_pct", rep.exact_share_pct},
              {"pricing_gap_pct", rep.pricing_gap_pct},
              {"pricing_time", rep.pricing_time},
              {"wall_time", rep.wall_time}};
}

KnapsackProblem knapsack_from_file(const KnapsackFile& file) {
  KnapsackProblem kp;
  kp.profits = file.profits;
  kp.a = file.instance.a;
  kp.b = file.instance.b;
  kp.sigma = file.instance.sigma;
  kp.capacity = file.instance.capacity;
  kp.conflicts = file.conflicts;
  return kp;
}

const char* status_name(KnapsackStatus st) {
  switch (st) {
    case KnapsackStatus::Optimal:
      return "optimal";
    case KnapsackStatus::TimeLimit:
      return "time_limit";
    case KnapsackStatus::Aborted:
      return "aborted";
  }
  return "unknown";
}

int run_generate(int n, double alpha, const std::string& case_name,
                 std::uint64_t seed, const std::string& out) {
  GeneratorConfig config;
  config.n = n;
  config.alpha = alpha;
  config.gen_case = parse_case(case_name);
  config.seed = seed;
  SmbpInstance inst = generate_instance(config);
  write_instance(out, inst);
  std::cout << "wrote " << out << " (n=" << inst.n
            << ", capacity=" << inst.capacity << ", sigma=" << inst.sigma
            << ")\n";
  return 0;
}

int run_solve(const std::string& instance_path, double time_limit,
              const std::string& pricing, const std::string& breakpoints,
              const std::string& colsel, std::uint64_t seed,
              const std::string& out, const std::string& report_path) {
  SmbpInstance inst = read_instance(instance_path);

  BnpConfig config;
  config.time_limit = time_limit;
  config.hybrid_pricing = pricing == "hybrid";
  config.adaptive_breakpoints = breakpoints == "adaptive";
  config.column_selection = colsel == "on";

  BnpResult result = solve_bnp(inst, config);
  const SolveReport& rep = result.report;

  json stats = report_to_json(rep);
  stats["config"] = {{"pricing", pricing},
                     {"breakpoints", breakpoints},
                     {"colsel", colsel},
                     {"seed", seed},
                     {"time_limit", time_limit}};

  if (!out.empty()) {
    SolutionFile sol;
    sol.objective = rep.best_objective;
    sol.dual_bound = rep.dual_bound;
    for (const Column& bin : result.best_bins) sol.bins.push_back(bin.items);
    sol.stats = stats;
    write_solution(out, sol);
  }
  if (!report_path.empty()) {
    std::ofstream report(report_path);
    if (!report) {
      std::cerr << "cannot open report file " << report_path << "\n";
      return 1;
    }
    report << stats.dump(2) << "\n";
  }

  std::cout << "objective " << rep.best_objective << "  dual "
            << rep.dual_bound << "  gap " << rep.gap * 100.0 << "%  nodes "
            << rep.nodes << "  columns " << rep.columns << "  time "
            << rep.wall_time << "s" << (rep.solved ? "  [solved]" : "")
            << "\n";
  return rep.solved ? 0 : 2;
}

int run_knapsack(const std::string& instance_path, const std::string& method,
                 double time_limit) {
  KnapsackProblem kp = knapsack_from_file(read_knapsack(instance_path));
  auto t0 = std::chrono::steady_clock::now();

  KnapsackResult result;
  if (method == "enum") {
    result = enumerate_knapsack(kp);
  } else if (method == "greedy") {
    result.best_items = fixing_greedy(kp);
    result.primal = kp.set_profit(result.best_items);
    result.dual_bound = std::numeric_limits<double>::infinity();
    result.status = KnapsackStatus::Optimal;  // heuristic: no bound claim
  } else {
    PwlBncOptions opts;
    opts.time_limit = time_limit;
    BoundInfo bounds = tighten_bounds(kp);
    if (method == "pwl-adaptive") {
      result = solve_pwl_bnc_adaptive(kp, bounds.w_lo, bounds.w_hi, opts);
    } else {
      PwlModel model = build_breakpoints(kp, bounds.w_lo, bounds.w_hi);
      result = solve_pwl_bnc(kp, model, opts);
    }
  }

  json out{{"method", method},
           {"value", result.primal},
           {"items", result.best_items},
           {"status", status_name(result.status)},
           {"nodes", result.nodes},
           {"cuts", result.cuts},
           {"lp_iterations", result.lp_iterations},
           {"time", now_seconds(t0)}};
  if (method == "greedy") {
    out["status"] = "heuristic";
  } else {
    out["dual_bound"] = result.dual_bound;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_oracle(const std::string& instance_path, const std::string& what) {
  auto t0 = std::chrono::steady_clock::now();
  json out;
  if (what == "binpack") {
    BinPackingResult res = exact_bin_packing(read_instance(instance_path));
    out = {{"what", what}, {"bins", res.bins}, {"partition", res.partition}};
  } else if (what == "knapsack") {
    KnapsackResult res =
        enumerate_knapsack(knapsack_from_file(read_knapsack(instance_path)));
    out = {{"what", what}, {"value", res.primal}, {"items", res.best_items}};
  } else {  // compact-lp
    KelleyResult res = kelley_compact_relaxation(read_instance(instance_path));
    out = {{"what", what},
           {"value", res.value},
           {"iterations", res.iterations},
           {"converged", res.converged}};
  }
  out["time"] = now_seconds(t0);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_bench(const std::string& dir, double time_limit,
              const std::string& pricing, const std::string& colsel,
              const std::string& breakpoints, int jobs,
              const std::string& csv_path) {
  BenchConfig config;
  config.solver.time_limit = time_limit;
  config.solver.hybrid_pricing = pricing == "hybrid";
  config.solver.column_selection = colsel == "on";
  config.solver.adaptive_breakpoints = breakpoints == "adaptive";
  config.jobs = jobs;
  config.on_result = [](const MetricRow& row, const BnpResult&,
                        const SmbpInstance&) {
    std::fprintf(stderr, "%-28s t=%7.2fs gap=%6.2f%% nodes=%ld%s\n",
                 row.instance.c_str(), row.t, row.dual_gap, row.nodes,
                 row.solved ? "" : "  [unsolved]");
  };

  BenchOutput output = run_benchmark(dir, config);
  write_metrics_csv(csv_path, output.rows);

  // aggregates always come from the file just written, so recomputing them
  // from the csv reproduces these bytes exactly
  std::vector<MetricAggregate> groups =
      aggregate_metrics(read_metrics_csv(csv_path));
  std::string agg_csv = aggregates_to_csv(groups);
  fs::path agg_path = fs::path(csv_path);
  agg_path.replace_extension();
  agg_path += "_aggregates.csv";
  std::ofstream agg_out(agg_path);
  agg_out << agg_csv;
  agg_out.close();

  long solved = 0;
  for (const MetricRow& row : output.rows) solved += row.solved ? 1 : 0;
  std::cout << agg_csv;
  std::cout << "solved " << solved << "/" << output.rows.size() << ", rows in "
            << csv_path << ", aggregates in " << agg_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"submodular bin packing: generator, solver and benchmarks"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "sample a benchmark instance");
  int gen_n = 0;
  double gen_alpha = 0.0;
  std::string gen_case = "G";
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "number of items")->required();
  gen->add_option("--alpha", gen_alpha, "chance constraint level in (0,1)")
      ->required();
  gen->add_option("--case", gen_case, "generator case")
      ->check(CLI::IsMember({"G", "H", "D"}));
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output instance path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "run the branch and price solver");
  std::string solve_instance;
  double solve_time = std::numeric_limits<double>::infinity();
  std::string solve_pricing = "hybrid";
  std::string solve_breakpoints = "equidistant";
  std::string solve_colsel = "on";
  std::uint64_t solve_seed = 0;
  std::string solve_out;
  std::string solve_report;
  solve->add_option("--instance", solve_instance, "instance path")->required();
  solve->add_option("--time-limit", solve_time, "wall clock limit in seconds");
  solve->add_option("--pricing", solve_pricing, "pricing mode")
      ->check(CLI::IsMember({"exact", "hybrid"}));
  solve->add_option("--breakpoints", solve_breakpoints, "breakpoint layout")
      ->check(CLI::IsMember({"equidistant", "adaptive"}));
  solve->add_option("--colsel", solve_colsel, "column selection heuristic")
      ->check(CLI::IsMember({"on", "off"}));
  solve->add_option("--seed", solve_seed, "recorded in the report");
  solve->add_option("--out", solve_out, "solution json path");
  solve->add_option("--report", solve_report, "report json path");

  // knapsack
  auto* knap = app.add_subcommand("knapsack", "solve one pricing problem");
  std::string knap_instance;
  std::string knap_method = "pwl";
  double knap_time = std::numeric_limits<double>::infinity();
  knap->add_option("--instance", knap_instance, "knapsack json path")
      ->required();
  knap->add_option("--method", knap_method, "solution method")
      ->check(CLI::IsMember({"pwl", "pwl-adaptive", "enum", "greedy"}));
  knap->add_option("--time-limit", knap_time, "wall clock limit in seconds");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "run a brute force reference");
  std::string oracle_instance;
  std::string oracle_what;
  oracle->add_option("--instance", oracle_instance, "input path")->required();
  oracle->add_option("--what", oracle_what, "reference to compute")
      ->required()
      ->check(CLI::IsMember({"binpack", "knapsack", "compact-lp"}));

  // bench
  auto* bench = app.add_subcommand("bench", "sweep a directory of instances");
  std::string bench_dir;
  double bench_time = 120.0;
  std::string bench_pricing = "hybrid";
  std::string bench_colsel = "on";
  std::string bench_breakpoints = "equidistant";
  int bench_jobs = 1;
  std::string bench_csv;
  bench->add_option("--dir", bench_dir, "directory of instance json files")
      ->required();
  bench->add_option("--time-limit", bench_time, "per instance seconds");
  bench->add_option("--pricing", bench_pricing, "pricing mode")
      ->check(CLI::IsMember({"exact", "hybrid"}));
  bench->add_option("--colsel", bench_colsel, "column selection heuristic")
      ->check(CLI::IsMember({"on", "off"}));
  bench->add_option("--breakpoints", bench_breakpoints, "breakpoint layout")
      ->check(CLI::IsMember({"equidistant", "adaptive"}));
  bench->add_option("--jobs", bench_jobs, "parallel solver count");
  bench->add_option("--csv", bench_csv, "per instance csv path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return run_generate(gen_n, gen_alpha, gen_case, gen_seed, gen_out);
    }
    if (solve->parsed()) {
      return run_solve(solve_instance, solve_time, solve_pricing,
                       solve_breakpoints, solve_colsel, solve_seed, solve_out,
                       solve_report);
    }
    if (knap->parsed()) {
      return run_knapsack(knap_instance, knap_method, knap_time);
    }
    if (oracle->parsed()) {
      return run_oracle(oracle_instance, oracle_what);
    }
    if (bench->parsed()) {
      return run_bench(bench_dir, bench_time, bench_pricing, bench_colsel,
                       bench_breakpoints, bench_jobs, bench_csv);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
