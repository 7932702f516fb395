#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "smbp/bnp.hpp"
#include "smbp/instance.hpp"

namespace smbp {

// aggregate statistic of the summary tables: (prod (v_i + s))^(1/N) - s,
// evaluated in log space so long batches cannot overflow.
// Throws std::invalid_argument on an empty list, a negative value or a
// negative shift.
double shifted_geometric_mean(const std::vector<double>& values, double shift);

// relative dual gap in percent, (primal - dual) / primal * 100; runs that
// never produced a dual bound (dual <= 0) report the full 100
double dual_gap_pct(double primal, double dual);

// primal improvement over the warm start relative to the proven optimality
// gap, in percent: (v_approx - v_best) / max(v_best - best_dual, 1e-6) * 100
double closed_primal_pct(double v_approx, double v_best, double best_dual);

/**
 * One benchmark line: instance identification plus the per-run measurements.
 * Serialized as one CSV row; doubles use shortest round trip formatting so a
 * written file parses back bit exactly.
 */
struct MetricRow {
  std::string instance;  // file stem
  std::string case_tag;  // "G", "H", "D", or "?" when the file has no meta
  double alpha = 0.0;
  std::uint64_t seed = 0;
  double t = 0.0;              // wall clock seconds
  double dual_gap = 0.0;       // percent, from the integer rounded bound
  double closed_primal = 0.0;  // percent
  long nodes = 0;
  bool solved = false;
  bool improved = false;
  long columns = 0;           // columns added by pricing
  double exact_pct = 0.0;     // share of pricing columns from the exact solver
  double pricing_gap = 0.0;   // mean exact pricing gap, percent
  double pricing_time_pct = 0.0;  // pricing share of the wall time, percent

  bool operator==(const MetricRow&) const = default;
};

inline constexpr char kMetricsCsvHeader[] =
    "instance,case,alpha,seed,t,dual_gap,closed_primal,nodes,solved,improved,"
    "columns,exact_pct,pricing_gap,pricing_time_pct";

// builds the row for one finished run (identification from the instance meta)
MetricRow make_metric_row(std::string name, const SmbpInstance& inst,
                          const BnpResult& result);

std::string metric_row_to_csv(const MetricRow& row);
// throws std::invalid_argument on a malformed line
MetricRow metric_row_from_csv(const std::string& line);

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricRow>& rows);
std::vector<MetricRow> read_metrics_csv(const std::filesystem::path& path);

/**
 * Shifted geometric means over one (case, alpha) group, plus counters.  All
 * means use shift 1 (times, percentages and counts alike).  The overall line
 * pools every row and prints "*" for both keys.
 */
struct MetricAggregate {
  std::string case_tag;
  double alpha = 0.0;
  bool overall = false;
  long instances = 0;
  long solved = 0;
  long improved = 0;
  double t_sgm = 0.0;
  double dual_gap_sgm = 0.0;
  double closed_primal_sgm = 0.0;
  double nodes_sgm = 0.0;
  double columns_sgm = 0.0;
  double exact_pct_sgm = 0.0;
  double pricing_gap_sgm = 0.0;
  double pricing_time_pct_sgm = 0.0;

  bool operator==(const MetricAggregate&) const = default;
};

inline constexpr char kAggregateCsvHeader[] =
    "case,alpha,instances,solved,improved,t_sgm,dual_gap_sgm,"
    "closed_primal_sgm,nodes_sgm,columns_sgm,exact_pct_sgm,pricing_gap_sgm,"
    "pricing_time_pct_sgm";

// groups by (case, alpha), cases in G, H, D order then unknown tags, alphas
// ascending, followed by the pooled overall line
std::vector<MetricAggregate> aggregate_metrics(
    const std::vector<MetricRow>& rows);

std::string aggregates_to_csv(const std::vector<MetricAggregate>& groups);

}  // namespace smbp
