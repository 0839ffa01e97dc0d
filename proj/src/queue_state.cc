#include "supermarket/queue_state.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace supermarket {

double QueueState::predicted_share(const Job& job) const {
  if (mode_ == UpdatedLoadMode::kFullPrediction) return job.prediction;
  return std::max(job.prediction - job.attained, 0.0);
}

double QueueState::advance_service(double dt) {
  if (!(dt >= 0.0)) {
    throw std::invalid_argument("advance_service: negative dt " +
                                std::to_string(dt));
  }
  if (!in_service_ || dt == 0.0) return 0.0;
  Job& job = jobs_[*in_service_];
  const double remaining = job.remaining();
  if (dt > remaining) {
    if (dt > remaining + 1e-9 * (1.0 + job.size)) {
      throw std::invalid_argument(
          "advance_service: dt " + std::to_string(dt) +
          " overshoots remaining work " + std::to_string(remaining));
    }
    dt = remaining;
  }
  if (mode_ == UpdatedLoadMode::kPredictedRemaining) {
    predicted_load_updated_ -=
        std::min(dt, std::max(job.prediction - job.attained, 0.0));
  }
  job.attained += dt;
  true_load_ -= dt;
  predicted_load_total_ = std::max(predicted_load_total_ - dt, 0.0);
  return dt;
}

std::size_t QueueState::add_job(const Job& job) {
  jobs_.push_back(job);
  true_load_ += job.remaining();
  predicted_load_updated_ += predicted_share(job);
  return jobs_.size() - 1;
}

void QueueState::start(std::size_t position) {
  if (position >= jobs_.size()) {
    throw std::out_of_range("QueueState::start: no job at position " +
                            std::to_string(position));
  }
  in_service_ = position;
  ++version_;
}

Job QueueState::complete_in_service() {
  if (!in_service_) {
    throw std::logic_error("complete_in_service: queue is not serving");
  }
  const auto position = *in_service_;
  Job done = jobs_[position];
  done.attained = done.size;
  jobs_.erase(jobs_.begin() + static_cast<std::ptrdiff_t>(position));
  in_service_.reset();
  if (jobs_.empty()) {
    true_load_ = 0.0;
    predicted_load_updated_ = 0.0;
  } else {
    recompute_loads();
  }
  return done;
}

double QueueState::recompute_true_load() const {
  double sum = 0.0;
  for (const auto& job : jobs_) sum += job.remaining();
  return sum;
}

double QueueState::recompute_predicted_load_updated() const {
  double sum = 0.0;
  for (const auto& job : jobs_) sum += predicted_share(job);
  return sum;
}

void QueueState::recompute_loads() {
  true_load_ = recompute_true_load();
  predicted_load_updated_ = recompute_predicted_load_updated();
}

void QueueState::audit() const {
  auto fail = [](const std::string& what) {
    throw std::logic_error("QueueState audit: " + what);
  };
  if (jobs_.empty()) {
    if (in_service_) fail("empty queue has a job in service");
    if (true_load_ != 0.0 || predicted_load_updated_ != 0.0 ||
        predicted_load_total_ != 0.0) {
      fail("empty queue carries nonzero cached load");
    }
    return;
  }
  if (!in_service_) fail("nonempty queue is idle");
  if (*in_service_ >= jobs_.size()) fail("in-service position out of range");
  for (const auto& job : jobs_) {
    if (!(job.size > 0.0)) fail("job with nonpositive size");
    if (!(job.prediction >= 0.0)) fail("job with negative prediction");
    if (!(job.attained >= 0.0 && job.attained <= job.size)) {
      fail("attained service outside [0, size]");
    }
  }
  const double load = recompute_true_load();
  if (std::abs(load - true_load_) > 1e-9 * (1.0 + load)) {
    fail("true load " + std::to_string(true_load_) + " != recomputed " +
         std::to_string(load));
  }
  const double updated = recompute_predicted_load_updated();
  if (std::abs(updated - predicted_load_updated_) > 1e-9 * (1.0 + updated)) {
    fail("updated predicted load " + std::to_string(predicted_load_updated_) +
         " != recomputed " + std::to_string(updated));
  }
  if (predicted_load_total_ < 0.0) fail("negative total predicted load");
}

}  // namespace supermarket
