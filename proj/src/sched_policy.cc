#include "supermarket/sched_policy.h"

#include <stdexcept>
#include <string>

namespace supermarket {

bool is_preemptive(SchedPolicy policy) {
  switch (policy) {
    case SchedPolicy::kPsjf:
    case SchedPolicy::kSrpt:
    case SchedPolicy::kPspjf:
    case SchedPolicy::kSprpt:
      return true;
    default:
      return false;
  }
}

bool uses_predictions(SchedPolicy policy) {
  return policy == SchedPolicy::kSpjf || policy == SchedPolicy::kPspjf ||
         policy == SchedPolicy::kSprpt;
}

double priority_key(SchedPolicy policy, const Job& job) {
  switch (policy) {
    case SchedPolicy::kFifo:
      // Ids follow arrival order, so simultaneous arrivals keep their order.
      return static_cast<double>(job.id);
    case SchedPolicy::kSjf:
    case SchedPolicy::kPsjf:
      return job.size;
    case SchedPolicy::kSrpt:
      return job.remaining();
    case SchedPolicy::kSpjf:
    case SchedPolicy::kPspjf:
      return job.prediction;
    case SchedPolicy::kSprpt:
      return predicted_remaining(job.prediction, job.attained);
  }
  return 0.0;
}

std::optional<std::size_t> select_next(SchedPolicy policy,
                                       const QueueState& queue, Rng& ties) {
  const auto jobs = queue.jobs();
  if (jobs.empty()) return std::nullopt;
  const auto serving = queue.in_service();
  if (serving && !is_preemptive(policy)) return serving;

  std::size_t best = 0;
  double best_key = priority_key(policy, jobs[0]);
  std::uint64_t tied = 1;
  bool best_is_serving = serving && *serving == 0;
  for (std::size_t i = 1; i < jobs.size(); ++i) {
    const double key = priority_key(policy, jobs[i]);
    if (key < best_key) {
      best = i;
      best_key = key;
      tied = 1;
      best_is_serving = serving && *serving == i;
    } else if (key == best_key && !best_is_serving) {
      if (serving && *serving == i) {
        best = i;
        best_is_serving = true;
      } else if (ties.below(++tied) == 0) {
        // Reservoir sampling over the equal-key run.
        best = i;
      }
    }
  }
  return best;
}

ArrivalAction on_arrival(SchedPolicy policy, const QueueState& queue,
                         std::size_t position) {
  const auto serving = queue.in_service();
  if (!serving) return ArrivalAction::kStart;
  if (!is_preemptive(policy)) return ArrivalAction::kContinue;
  const auto jobs = queue.jobs();
  return priority_key(policy, jobs[position]) <
                 priority_key(policy, jobs[*serving])
             ? ArrivalAction::kPreempt
             : ArrivalAction::kContinue;
}

std::string_view to_string(SchedPolicy policy) {
  switch (policy) {
    case SchedPolicy::kFifo:
      return "FIFO";
    case SchedPolicy::kSjf:
      return "SJF";
    case SchedPolicy::kPsjf:
      return "PSJF";
    case SchedPolicy::kSrpt:
      return "SRPT";
    case SchedPolicy::kSpjf:
      return "SPJF";
    case SchedPolicy::kPspjf:
      return "PSPJF";
    case SchedPolicy::kSprpt:
      return "SPRPT";
  }
  return "?";
}

SchedPolicy parse_sched_policy(std::string_view tag) {
  for (auto p : {SchedPolicy::kFifo, SchedPolicy::kSjf, SchedPolicy::kPsjf,
                 SchedPolicy::kSrpt, SchedPolicy::kSpjf, SchedPolicy::kPspjf,
                 SchedPolicy::kSprpt}) {
    if (tag == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown scheduling policy '" +
                              std::string(tag) +
                              "' (valid: FIFO, SJF, PSJF, SRPT, SPJF, PSPJF, "
                              "SPRPT)");
}

}  // namespace supermarket
