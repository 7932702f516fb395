#include "smbp/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace smbp {

double shifted_geometric_mean(const std::vector<double>& values,
                              double shift) {
  if (values.empty()) {
    throw std::invalid_argument("shifted_geometric_mean: empty input");
  }
  if (shift < 0.0) {
    throw std::invalid_argument("shifted_geometric_mean: negative shift");
  }
  double log_sum = 0.0;
  for (double v : values) {
    if (v < 0.0) {
      throw std::invalid_argument("shifted_geometric_mean: negative value");
    }
    log_sum += std::log(v + shift);
  }
  return std::exp(log_sum / static_cast<double>(values.size())) - shift;
}

double dual_gap_pct(double primal, double dual) {
  if (primal <= 0.0 || dual <= 0.0) return 100.0;
  return (primal - dual) / primal * 100.0;
}

double closed_primal_pct(double v_approx, double v_best, double best_dual) {
  if (v_approx == v_best) return 0.0;
  return (v_approx - v_best) / std::max(v_best - best_dual, 1e-6) * 100.0;
}

MetricRow make_metric_row(std::string name, const SmbpInstance& inst,
                          const BnpResult& result) {
  const SolveReport& rep = result.report;
  MetricRow row;
  row.instance = std::move(name);
  if (inst.meta) {
    row.case_tag = inst.meta->case_tag;
    row.alpha = inst.meta->alpha;
    row.seed = inst.meta->seed;
  } else {
    row.case_tag = "?";
  }
  row.t = rep.wall_time;
  row.dual_gap = dual_gap_pct(rep.best_objective, rep.dual_bound_int);
  row.closed_primal = closed_primal_pct(rep.initial_objective,
                                        rep.best_objective, rep.dual_bound_int);
  row.nodes = rep.nodes;
  row.solved = rep.solved;
  row.improved = rep.improved;
  row.columns = rep.columns;
  row.exact_pct = rep.exact_share_pct;
  row.pricing_gap = rep.pricing_gap_pct;
  row.pricing_time_pct =
      rep.wall_time > 0.0
          ? std::min(100.0, rep.pricing_time / rep.wall_time * 100.0)
          : 0.0;
  return row;
}

namespace {

// shortest representation that parses back to the identical double
void append_double(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

template <typename Int>
void append_int(std::string& out, Int v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

double parse_double(const std::string& s, const char* field) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("metrics csv: bad ") + field +
                                " value '" + s + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string& s, const char* field) {
  Int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("metrics csv: bad ") + field +
                                " value '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& s, const char* field) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw std::invalid_argument(std::string("metrics csv: bad ") + field +
                              " value '" + s + "'");
}

void check_bare(const std::string& s, const char* field) {
  if (s.find_first_of(",\n\r") != std::string::npos) {
    throw std::invalid_argument(std::string("metrics csv: ") + field +
                                " may not contain separators: '" + s + "'");
  }
}

// table order of the three generator cases; anything else sorts after
int case_rank(const std::string& tag) {
  if (tag == "G") return 0;
  if (tag == "H") return 1;
  if (tag == "D") return 2;
  return 3;
}

}  // namespace

std::string metric_row_to_csv(const MetricRow& row) {
  check_bare(row.instance, "instance");
  check_bare(row.case_tag, "case");
  std::string out;
  out += row.instance;
  out += ',';
  out += row.case_tag;
  out += ',';
  append_double(out, row.alpha);
  out += ',';
  append_int(out, row.seed);
  out += ',';
  append_double(out, row.t);
  out += ',';
  append_double(out, row.dual_gap);
  out += ',';
  append_double(out, row.closed_primal);
  out += ',';
  append_int(out, row.nodes);
  out += ',';
  out += row.solved ? '1' : '0';
  out += ',';
  out += row.improved ? '1' : '0';
  out += ',';
  append_int(out, row.columns);
  out += ',';
  append_double(out, row.exact_pct);
  out += ',';
  append_double(out, row.pricing_gap);
  out += ',';
  append_double(out, row.pricing_time_pct);
  return out;
}

MetricRow metric_row_from_csv(const std::string& line) {
  std::vector<std::string> f = split_fields(line);
  if (f.size() != 14) {
    throw std::invalid_argument("metrics csv: expected 14 fields, got " +
                                std::to_string(f.size()));
  }
  MetricRow row;
  row.instance = f[0];
  row.case_tag = f[1];
  row.alpha = parse_double(f[2], "alpha");
  row.seed = parse_int<std::uint64_t>(f[3], "seed");
  row.t = parse_double(f[4], "t");
  row.dual_gap = parse_double(f[5], "dual_gap");
  row.closed_primal = parse_double(f[6], "closed_primal");
  row.nodes = parse_int<long>(f[7], "nodes");
  row.solved = parse_bool(f[8], "solved");
  row.improved = parse_bool(f[9], "improved");
  row.columns = parse_int<long>(f[10], "columns");
  row.exact_pct = parse_double(f[11], "exact_pct");
  row.pricing_gap = parse_double(f[12], "pricing_gap");
  row.pricing_time_pct = parse_double(f[13], "pricing_time_pct");
  return row;
}

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("metrics csv: cannot open " + path.string());
  }
  out << kMetricsCsvHeader << '\n';
  for (const MetricRow& row : rows) out << metric_row_to_csv(row) << '\n';
  if (!out) {
    throw std::runtime_error("metrics csv: write failed for " + path.string());
  }
}

std::vector<MetricRow> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("metrics csv: cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("metrics csv: empty file " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMetricsCsvHeader) {
    throw std::invalid_argument("metrics csv: unexpected header '" + line +
                                "'");
  }
  std::vector<MetricRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(metric_row_from_csv(line));
  }
  return rows;
}

std::vector<MetricAggregate> aggregate_metrics(
    const std::vector<MetricRow>& rows) {
  if (rows.empty()) return {};

  std::map<std::tuple<int, std::string, double>, std::vector<const MetricRow*>>
      groups;
  for (const MetricRow& row : rows) {
    groups[{case_rank(row.case_tag), row.case_tag, row.alpha}].push_back(&row);
  }

  auto fold = [](const std::vector<const MetricRow*>& members, MetricAggregate agg) {
    std::vector<double> t, gap, closed, nodes, cols, exact, pgap, ptime;
    for (const MetricRow* r : members) {
      agg.instances += 1;
      agg.solved += r->solved ? 1 : 0;
      agg.improved += r->improved ? 1 : 0;
      t.push_back(r->t);
      gap.push_back(r->dual_gap);
      closed.push_back(r->closed_primal);
      nodes.push_back(static_cast<double>(r->nodes));
      cols.push_back(static_cast<double>(r->columns));
      exact.push_back(r->exact_pct);
      pgap.push_back(r->pricing_gap);
      ptime.push_back(r->pricing_time_pct);
    }
    agg.t_sgm = shifted_geometric_mean(t, 1.0);
    agg.dual_gap_sgm = shifted_geometric_mean(gap, 1.0);
    agg.closed_primal_sgm = shifted_geometric_mean(closed, 1.0);
    agg.nodes_sgm = shifted_geometric_mean(nodes, 1.0);
    agg.columns_sgm = shifted_geometric_mean(cols, 1.0);
    agg.exact_pct_sgm = shifted_geometric_mean(exact, 1.0);
    agg.pricing_gap_sgm = shifted_geometric_mean(pgap, 1.0);
    agg.pricing_time_pct_sgm = shifted_geometric_mean(ptime, 1.0);
    return agg;
  };

  std::vector<MetricAggregate> out;
  for (const auto& [key, members] : groups) {
    MetricAggregate agg;
    agg.case_tag = std::get<1>(key);
    agg.alpha = std::get<2>(key);
    out.push_back(fold(members, agg));
  }
  std::vector<const MetricRow*> all;
  for (const MetricRow& row : rows) all.push_back(&row);
  MetricAggregate overall;
  overall.case_tag = "*";
  overall.overall = true;
  out.push_back(fold(all, overall));
  return out;
}

std::string aggregates_to_csv(const std::vector<MetricAggregate>& groups) {
  std::string out = kAggregateCsvHeader;
  out += '\n';
  for (const MetricAggregate& g : groups) {
    check_bare(g.case_tag, "case");
    out += g.case_tag;
    out += ',';
    if (g.overall) {
      out += '*';
    } else {
      append_double(out, g.alpha);
    }
    out += ',';
    append_int(out, g.instances);
    out += ',';
    append_int(out, g.solved);
    out += ',';
    append_int(out, g.improved);
    out += ',';
    append_double(out, g.t_sgm);
    out += ',';
    append_double(out, g.dual_gap_sgm);
    out += ',';
    append_double(out, g.closed_primal_sgm);
    out += ',';
    append_double(out, g.nodes_sgm);
    out += ',';
    append_double(out, g.columns_sgm);
    out += ',';
    append_double(out, g.exact_pct_sgm);
    out += ',';
    append_double(out, g.pricing_gap_sgm);
    out += ',';
    append_double(out, g.pricing_time_pct_sgm);
    out += '\n';
  }
  return out;
}

}  // namespace smbp
