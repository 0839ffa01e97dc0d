#include "supermarket/replication.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "supermarket/rng.h"

namespace supermarket {

ReplicationSummary summarize(std::vector<RunResult> runs,
                             std::vector<std::uint64_t> seeds,
                             bool keep_records) {
  ReplicationSummary summary;
  summary.replication_seeds = std::move(seeds);
  const auto count = static_cast<double>(runs.size());
  std::size_t levels = 0;
  for (const auto& run : runs) {
    summary.replication_means.push_back(run.mean_response());
    summary.measured_jobs += run.measured;
    levels = std::max(levels, run.tail_fractions.size());
  }
  double sum = 0.0;
  for (double m : summary.replication_means) sum += m;
  summary.mean_response = sum / count;
  if (runs.size() > 1) {
    double sq = 0.0;
    for (double m : summary.replication_means) {
      sq += (m - summary.mean_response) * (m - summary.mean_response);
    }
    summary.std_dev = std::sqrt(sq / (count - 1.0));
  }
  summary.tail_fractions.assign(levels, 0.0);
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.tail_fractions.size(); ++i) {
      summary.tail_fractions[i] += run.tail_fractions[i] / count;
    }
    summary.mean_jobs_per_queue += run.mean_jobs_per_queue / count;
  }
  if (keep_records) {
    for (auto& run : runs) summary.records.push_back(std::move(run.records));
  }
  return summary;
}

ReplicationSummary run_replications(const SimConfig& config,
                                    const ReplicationOptions& options) {
  config.validate();
  const std::uint32_t reps = config.replications;
  std::vector<RunResult> runs(reps);
  std::vector<std::uint64_t> seeds(reps);
  for (std::uint32_t r = 0; r < reps; ++r) {
    seeds[r] = replication_seed(config.seed, r);
  }
  std::vector<std::exception_ptr> errors(reps);

  RunOptions run_options;
  run_options.keep_records = options.keep_records;

  std::atomic<std::uint32_t> next{0};
  auto worker = [&] {
    for (auto r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
      try {
        runs[r] = simulate(config, seeds[r], run_options);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };

  unsigned threads = options.jobs != 0 ? options.jobs
                                       : std::thread::hardware_concurrency();
  threads = std::clamp(threads, 1u, reps);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (std::uint32_t r = 0; r < reps; ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const std::exception& e) {
      throw ReplicationError(r, e.what());
    }
  }
  return summarize(std::move(runs), std::move(seeds), options.keep_records);
}

}  // namespace supermarket
