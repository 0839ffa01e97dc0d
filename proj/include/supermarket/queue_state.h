// State of one single-server, unit-rate queue.

#ifndef SUPERMARKET_QUEUE_STATE_H_
#define SUPERMARKET_QUEUE_STATE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "supermarket/job.h"

namespace supermarket {

// How the "updated" predicted load counts jobs that already received
// service.
enum class UpdatedLoadMode {
  kPredictedRemaining,  // sum of (y - t)^+
  kFullPrediction,      // sum of y
};

class QueueState {
 public:
  explicit QueueState(UpdatedLoadMode mode = UpdatedLoadMode::kPredictedRemaining)
      : mode_(mode) {}

  std::span<const Job> jobs() const { return jobs_; }
  std::size_t job_count() const { return jobs_.size(); }
  bool empty() const { return jobs_.empty(); }

  // Position of the job in service within jobs().
  std::optional<std::size_t> in_service() const { return in_service_; }
  const Job* serving_job() const {
    return in_service_ ? &jobs_[*in_service_] : nullptr;
  }

  double true_load() const { return true_load_; }
  double predicted_load_updated() const { return predicted_load_updated_; }
  double predicted_load_total() const { return predicted_load_total_; }
  void set_predicted_load_total(double value) { predicted_load_total_ = value; }

  // Bumped whenever the job in service changes; departures scheduled under
  // an older version are stale.
  std::uint64_t version() const { return version_; }

  // Unit-rate service for dt time units. The in-service job gains dt of
  // attained service, true load drops by dt, and the scalar total predicted
  // load decays by dt (floored at 0) while the queue is busy. Throws
  // std::invalid_argument for negative dt or dt beyond the in-service job's
  // remaining size (a relative slack of 1e-9 is clamped). Returns the work
  // actually delivered.
  double advance_service(double dt);

  // Appends a job (not yet in service); returns its position.
  std::size_t add_job(const Job& job);

  // Puts the job at `position` in service, preempting any current one.
  void start(std::size_t position);

  // Removes the in-service job, which must have received its full size.
  // Cached loads are recomputed from the remaining jobs, or zeroed when the
  // queue empties.
  Job complete_in_service();

  // Recomputes true and updated loads from the job list.
  double recompute_true_load() const;
  double recompute_predicted_load_updated() const;

  // Throws std::logic_error if a cached quantity disagrees with its
  // definition.
  void audit() const;

 private:
  double predicted_share(const Job& job) const;
  void recompute_loads();

  UpdatedLoadMode mode_;
  std::vector<Job> jobs_;
  std::optional<std::size_t> in_service_;
  double true_load_ = 0.0;
  double predicted_load_updated_ = 0.0;
  double predicted_load_total_ = 0.0;
  std::uint64_t version_ = 0;
};

}  // namespace supermarket

#endif  // SUPERMARKET_QUEUE_STATE_H_
