#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "smbp/bnp.hpp"
#include "smbp/metrics.hpp"

namespace smbp {

struct BenchConfig {
  BnpConfig solver;  // applied to every instance (time limit, pricing, ...)
  int jobs = 1;
  // invoked under a lock for every successfully solved instance, in
  // completion order; useful for progress output and external verification
  std::function<void(const MetricRow&, const BnpResult&, const SmbpInstance&)>
      on_result;
};

struct BenchOutput {
  std::vector<MetricRow> rows;            // one per file, in file name order
  std::vector<MetricAggregate> groups;    // per (case, alpha) plus overall
};

/**
 * Solves every "*.json" instance in a directory, jobs at a time.  A file
 * that fails to parse, validate or solve becomes an unsolved row with a 100
 * percent dual gap instead of aborting the batch; a solved instance whose
 * returned bins are not a feasible partition is demoted the same way.  Rows
 * come back sorted by file name regardless of completion order, so a run is
 * reproducible at any job count.
 */
BenchOutput run_benchmark(const std::filesystem::path& dir,
                          const BenchConfig& config);

}  // namespace smbp
