#include "supermarket/simulator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "supermarket/event_queue.h"
#include "supermarket/rng.h"

namespace supermarket {

void SimConfig::validate() const {
  auto reject = [](const std::string& what) {
    throw std::invalid_argument("invalid configuration: " + what);
  };
  if (n_queues < 1) reject("n_queues must be at least 1");
  if (d_choices < 1) reject("d_choices must be at least 1");
  if (d_choices > n_queues) {
    reject("d_choices (" + std::to_string(d_choices) +
           ") exceeds n_queues (" + std::to_string(n_queues) + ")");
  }
  if (synthetic()) {
    if (!(arrival_rate > 0.0 && arrival_rate < 1.0)) {
      reject("arrival_rate must lie in (0, 1), got " +
             std::to_string(arrival_rate));
    }
    if (!std::isfinite(horizon)) reject("synthetic runs need a finite horizon");
    if (predictor.kind == PredictorKind::kTraceGiven) {
      reject("the trace predictor requires a trace arrival source");
    }
  } else if (trace->empty()) {
    reject("trace arrival source is empty");
  }
  if (!(warmup >= 0.0)) reject("warmup must be nonnegative");
  if (!(warmup < horizon)) {
    reject("warmup (" + std::to_string(warmup) + ") must precede horizon (" +
           std::to_string(horizon) + ")");
  }
  if (replications < 1) reject("replications must be at least 1");
  predictor.validate();
}

double RunResult::mean_response() const {
  if (measured == 0) return std::numeric_limits<double>::quiet_NaN();
  return response_sum / static_cast<double>(measured);
}

namespace {

// Time integral of "number of queues with at least level jobs", for every
// level, restricted to the measurement window.
class LevelTracker {
 public:
  LevelTracker(double window_start, double window_end)
      : start_(window_start), end_(window_end) {}

  void raise(std::size_t new_length, double now) { bump(new_length, now, +1); }
  void lower(std::size_t old_length, double now) { bump(old_length, now, -1); }

  void finish(double end) {
    for (std::size_t level = 1; level < count_.size(); ++level) {
      integrate(level, end);
    }
  }

  const std::vector<double>& area() const { return area_; }

 private:
  void bump(std::size_t level, double now, int delta) {
    if (level >= count_.size()) {
      count_.resize(level + 1, 0);
      area_.resize(level + 1, 0.0);
      last_.resize(level + 1, now);
    }
    integrate(level, now);
    count_[level] += delta;
  }

  void integrate(std::size_t level, double now) {
    const double lo = std::max(last_[level], start_);
    const double hi = std::min(now, end_);
    if (hi > lo) area_[level] += static_cast<double>(count_[level]) * (hi - lo);
    last_[level] = now;
  }

  double start_;
  double end_;
  std::vector<std::int64_t> count_{0};
  std::vector<double> area_{0.0};
  std::vector<double> last_{0.0};
};

class Simulation {
 public:
  Simulation(const SimConfig& config, std::uint64_t seed,
             const RunOptions& options)
      : config_(config),
        options_(options),
        arrivals_rng_(stream_seed(seed, Stream::kArrivals)),
        sizes_rng_(stream_seed(seed, Stream::kSizes)),
        predictions_rng_(stream_seed(seed, Stream::kPredictions)),
        routing_rng_(stream_seed(seed, Stream::kRouting)),
        ties_rng_(stream_seed(seed, Stream::kTies)),
        queues_(config.n_queues, QueueState(config.updated_load_mode)),
        last_update_(config.n_queues, 0.0),
        busy_since_(config.n_queues, 0.0),
        levels_(config.warmup, config.horizon) {
    result_.queues.resize(config.n_queues);
    candidates_.reserve(config.d_choices);
    candidate_ptrs_.reserve(config.d_choices);
  }

  RunResult run() {
    schedule_next_arrival(0.0);
    double now = 0.0;
    while (!events_.empty() && events_.top().time < config_.horizon) {
      const Event event = events_.pop();
      now = event.time;
      if (event.kind == EventKind::kArrival) {
        handle_arrival(now);
      } else {
        handle_departure(event, now);
      }
    }
    const double end = std::isfinite(config_.horizon) ? config_.horizon : now;
    finish(end);
    return std::move(result_);
  }

 private:
  void schedule_next_arrival(double now) {
    if (config_.synthetic()) {
      const double rate =
          config_.arrival_rate * static_cast<double>(config_.n_queues);
      events_.push(now + arrivals_rng_.exponential(1.0 / rate),
                   EventKind::kArrival);
    } else if (next_trace_row_ < config_.trace->size()) {
      events_.push((*config_.trace)[next_trace_row_].submission,
                   EventKind::kArrival);
    }
  }

  Job make_job(double now) {
    Job job;
    job.id = next_id_++;
    job.arrival = now;
    double given = 0.0;
    if (config_.synthetic()) {
      job.size = config_.service_dist.sample(sizes_rng_);
    } else {
      const TraceJob& row = (*config_.trace)[next_trace_row_++];
      job.size = row.size;
      given = row.prediction;
    }
    if (!std::isfinite(job.size) || !(job.size > 0.0)) {
      throw std::runtime_error(
          "sampler 'size:" +
          std::string(config_.synthetic()
                          ? to_string(config_.service_dist.kind())
                          : "trace") +
          "' produced invalid size " + std::to_string(job.size));
    }
    job.prediction = predict(config_.predictor, job.size, predictions_rng_,
                             given);
    if (!std::isfinite(job.prediction) || job.prediction < 0.0) {
      throw std::runtime_error(
          "sampler 'prediction:" +
          std::string(to_string(config_.predictor.kind)) +
          "' produced invalid prediction " + std::to_string(job.prediction));
    }
    return job;
  }

  // d distinct queues, uniformly without replacement, in draw order.
  void sample_candidates() {
    candidates_.clear();
    sorted_.clear();
    const std::uint32_t n = config_.n_queues;
    for (std::uint32_t k = 0; k < config_.d_choices; ++k) {
      auto pick = static_cast<std::uint32_t>(routing_rng_.below(n - k));
      // Map into the indices not yet drawn, which sorted_ lists ascending.
      auto it = sorted_.begin();
      for (; it != sorted_.end() && *it <= pick; ++it) ++pick;
      sorted_.insert(it, pick);
      candidates_.push_back(pick);
    }
  }

  void advance(std::uint32_t q, double now) {
    const double dt = now - last_update_[q];
    result_.queues[q].served_work += queues_[q].advance_service(dt);
    last_update_[q] = now;
  }

  void start_service(std::uint32_t q, std::size_t position, double now) {
    QueueState& queue = queues_[q];
    queue.start(position);
    const Job& job = queue.jobs()[position];
    events_.push(now + job.remaining(), EventKind::kDeparture, q,
                 queue.version());
  }

  void handle_arrival(double now) {
    Job job = make_job(now);
    ++result_.arrivals;

    sample_candidates();
    candidate_ptrs_.clear();
    for (auto q : candidates_) {
      advance(q, now);
      candidate_ptrs_.push_back(&queues_[q]);
    }
    const auto q = candidates_[choose(config_.choice_policy, candidate_ptrs_,
                                      job, config_.sched_policy,
                                      routing_rng_)];
    QueueState& queue = queues_[q];
    ++result_.queues[q].arrivals;

    if (queue.empty()) busy_since_[q] = now;
    update_total_load_on_arrival(queue, job.prediction);
    const auto position = queue.add_job(job);
    levels_.raise(queue.job_count(), now);

    switch (on_arrival(config_.sched_policy, queue, position)) {
      case ArrivalAction::kStart:
      case ArrivalAction::kPreempt:
        start_service(q, position, now);
        break;
      case ArrivalAction::kContinue:
        break;
    }
    if (options_.audit) queue.audit();
    schedule_next_arrival(now);
  }

  void handle_departure(const Event& event, double now) {
    const std::uint32_t q = event.queue;
    QueueState& queue = queues_[q];
    if (event.version != queue.version() || !queue.in_service()) return;

    advance(q, now);
    auto& counters = result_.queues[q];
    counters.served_work += queue.serving_job()->remaining();
    levels_.lower(queue.job_count(), now);
    const Job done = queue.complete_in_service();
    ++counters.completions;
    ++result_.completions;

    if (now >= config_.warmup) {
      const double response = now - done.arrival;
      ++result_.measured;
      result_.response_sum += response;
      if (options_.keep_records) {
        result_.records.push_back(JobRecord{done.id, done.arrival, now,
                                            done.size, done.prediction,
                                            response, q});
      }
    }

    if (queue.empty()) {
      update_total_load_on_empty(queue);
      counters.busy_time += now - busy_since_[q];
    } else {
      start_service(q, *select_next(config_.sched_policy, queue, ties_rng_),
                    now);
    }
    if (options_.audit) queue.audit();
  }

  void finish(double end) {
    levels_.finish(end);
    result_.end_time = end;
    result_.resident_per_queue.assign(config_.n_queues, 0);
    for (std::uint32_t q = 0; q < config_.n_queues; ++q) {
      advance(q, end);
      QueueState& queue = queues_[q];
      if (!queue.empty()) {
        result_.queues[q].busy_time += end - busy_since_[q];
      }
      result_.resident_per_queue[q] = queue.job_count();
      result_.resident += queue.job_count();
      if (options_.audit) queue.audit();
    }

    const double window = std::min(end, config_.horizon) - config_.warmup;
    const auto& area = levels_.area();
    result_.tail_fractions.assign(area.size(), 0.0);
    result_.tail_fractions[0] = 1.0;
    result_.mean_jobs_per_queue = 0.0;
    if (window > 0.0) {
      const double norm = window * static_cast<double>(config_.n_queues);
      for (std::size_t i = 1; i < area.size(); ++i) {
        result_.tail_fractions[i] = area[i] / norm;
        result_.mean_jobs_per_queue += result_.tail_fractions[i];
      }
    }
    while (result_.tail_fractions.size() > 1 &&
           result_.tail_fractions.back() == 0.0) {
      result_.tail_fractions.pop_back();
    }
  }

  const SimConfig& config_;
  RunOptions options_;
  Rng arrivals_rng_;
  Rng sizes_rng_;
  Rng predictions_rng_;
  Rng routing_rng_;
  Rng ties_rng_;

  std::vector<QueueState> queues_;
  std::vector<double> last_update_;
  std::vector<double> busy_since_;
  EventQueue events_;
  LevelTracker levels_;
  RunResult result_;

  JobId next_id_ = 0;
  std::size_t next_trace_row_ = 0;
  std::vector<std::uint32_t> candidates_;
  std::vector<std::uint32_t> sorted_;
  std::vector<const QueueState*> candidate_ptrs_;
};

}  // namespace

RunResult simulate(const SimConfig& config, std::uint64_t seed,
                   const RunOptions& options) {
  config.validate();
  return Simulation(config, seed, options).run();
}

std::vector<JobRecord> run_simulation(const SimConfig& config,
                                      std::uint64_t seed) {
  return simulate(config, seed, RunOptions{}).records;
}

}  // namespace supermarket
