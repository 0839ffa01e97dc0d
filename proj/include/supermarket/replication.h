#ifndef SUPERMARKET_REPLICATION_H_
#define SUPERMARKET_REPLICATION_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "supermarket/job.h"
#include "supermarket/simulator.h"

namespace supermarket {

struct ReplicationOptions {
  // Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned jobs = 0;
  bool keep_records = false;
};

struct ReplicationSummary {
  // Unweighted mean over replications of each run's mean response time.
  double mean_response = 0.0;
  // Sample standard deviation of the per-replication means (0 for one run).
  double std_dev = 0.0;
  std::vector<double> replication_means;
  std::vector<std::uint64_t> replication_seeds;
  // Per-level tail fractions and queue occupancy, averaged over replications.
  std::vector<double> tail_fractions;
  double mean_jobs_per_queue = 0.0;
  std::uint64_t measured_jobs = 0;
  // One entry per replication when keep_records is set.
  std::vector<std::vector<JobRecord>> records;
};

class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(std::uint32_t replication, const std::string& what)
      : std::runtime_error("replication " + std::to_string(replication) +
                           ": " + what),
        replication_(replication) {}

  std::uint32_t replication() const { return replication_; }

 private:
  std::uint32_t replication_;
};

// Runs config.replications independent simulations; replication r uses
// replication_seed(config.seed, r). Results do not depend on `jobs`.
ReplicationSummary run_replications(const SimConfig& config,
                                    const ReplicationOptions& options = {});

// Combines per-replication results in replication order.
ReplicationSummary summarize(std::vector<RunResult> runs,
                             std::vector<std::uint64_t> seeds,
                             bool keep_records);

}  // namespace supermarket

#endif  // SUPERMARKET_REPLICATION_H_
