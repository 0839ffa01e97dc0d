// Discrete-event simulation of the supermarket model: n single-server
// queues, each arrival samples d distinct queues uniformly and joins one by
// a choice policy; each queue orders its jobs by a scheduling policy.

#ifndef SUPERMARKET_SIMULATOR_H_
#define SUPERMARKET_SIMULATOR_H_

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "supermarket/choice_policy.h"
#include "supermarket/distributions.h"
#include "supermarket/job.h"
#include "supermarket/predictors.h"
#include "supermarket/queue_state.h"
#include "supermarket/sched_policy.h"

namespace supermarket {

struct SimConfig {
  std::uint32_t n_queues = 1000;
  std::uint32_t d_choices = 2;
  double arrival_rate = 0.5;  // per queue
  ServiceDist service_dist;
  Predictor predictor;
  ChoicePolicy choice_policy = ChoicePolicy::kShortestQueue;
  SchedPolicy sched_policy = SchedPolicy::kFifo;
  UpdatedLoadMode updated_load_mode = UpdatedLoadMode::kPredictedRemaining;
  double horizon = 10000.0;
  double warmup = 1000.0;
  std::uint32_t replications = 100;
  std::uint64_t seed = 1;
  // Arrival source. Null means Poisson arrivals at rate arrival_rate *
  // n_queues; otherwise jobs arrive at the (already scaled) submission times
  // of the trace, sorted, with the trace's sizes.
  std::shared_ptr<const std::vector<TraceJob>> trace;

  bool synthetic() const { return trace == nullptr; }

  // Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

struct RunOptions {
  bool keep_records = true;
  // Check every queue's cached state after each event (slow).
  bool audit = false;
};

struct QueueCounters {
  std::uint64_t arrivals = 0;
  std::uint64_t completions = 0;
  double busy_time = 0.0;    // time spent nonempty
  double served_work = 0.0;  // work delivered
};

struct RunResult {
  // Jobs completing in [warmup, horizon), in completion order. Empty when
  // records were not kept; the aggregates below are always filled.
  std::vector<JobRecord> records;
  std::uint64_t measured = 0;
  double response_sum = 0.0;

  // tail_fractions[i]: time-averaged fraction of queues holding at least i
  // jobs over the measurement window. tail_fractions[0] == 1.
  std::vector<double> tail_fractions;
  double mean_jobs_per_queue = 0.0;

  std::uint64_t arrivals = 0;
  std::uint64_t completions = 0;
  std::uint64_t resident = 0;  // still queued when the run stopped
  double end_time = 0.0;
  std::vector<QueueCounters> queues;
  std::vector<std::uint64_t> resident_per_queue;

  double mean_response() const;
};

// One simulation run from empty queues. Identical (config, seed) pairs give
// identical results. Throws std::runtime_error naming the sampler if a size
// or prediction is not finite.
RunResult simulate(const SimConfig& config, std::uint64_t seed,
                   const RunOptions& options = {});

// Records of every job completing inside the measurement window.
std::vector<JobRecord> run_simulation(const SimConfig& config,
                                      std::uint64_t seed);

}  // namespace supermarket

#endif  // SUPERMARKET_SIMULATOR_H_
