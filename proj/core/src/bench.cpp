#include "smbp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "smbp/io.hpp"

namespace smbp {

namespace {

bool is_partition(const SmbpInstance& inst, const std::vector<Column>& bins) {
  std::vector<char> seen(inst.n, 0);
  for (const Column& bin : bins) {
    if (bin.items.empty()) return false;
    if (!is_feasible_column(inst, bin.items, 1e-7)) return false;
    for (int i : bin.items) {
      if (i < 0 || i >= inst.n || seen[i]) return false;
      seen[i] = 1;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

MetricRow failure_row(std::string name, double elapsed) {
  MetricRow row;
  row.instance = std::move(name);
  row.case_tag = "?";
  row.t = elapsed;
  row.dual_gap = 100.0;
  return row;
}

}  // namespace

BenchOutput run_benchmark(const std::filesystem::path& dir,
                          const BenchConfig& config) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });

  BenchOutput out;
  out.rows.resize(files.size());
  std::atomic<std::size_t> next{0};
  std::mutex result_mutex;

  auto worker = [&]() {
    while (true) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= files.size()) return;
      const std::filesystem::path& path = files[idx];
      std::string name = path.stem().string();
      auto start = std::chrono::steady_clock::now();
      auto elapsed = [&] {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start)
            .count();
      };
      try {
        SmbpInstance inst = read_instance(path);
        BnpResult result = solve_bnp(inst, config.solver);
        if (!is_partition(inst, result.best_bins)) {
          out.rows[idx] = failure_row(std::move(name), elapsed());
          continue;
        }
        MetricRow row = make_metric_row(std::move(name), inst, result);
        out.rows[idx] = row;
        if (config.on_result) {
          std::lock_guard<std::mutex> lock(result_mutex);
          config.on_result(row, result, inst);
        }
      } catch (const std::exception&) {
        out.rows[idx] = failure_row(std::move(name), elapsed());
      }
    }
  };

  int jobs = std::max(1, config.jobs);
  jobs = static_cast<int>(
      std::min<std::size_t>(jobs, std::max<std::size_t>(files.size(), 1)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  out.groups = aggregate_metrics(out.rows);
  return out;
}

}  // namespace smbp
