// In-queue scheduling disciplines.
//
// Every discipline is a priority rule: smaller key is served first.
//   FIFO         arrival order
//   SJF, PSJF    x
//   SRPT         x - t
//   SPJF, PSPJF  y
//   SPRPT        (y - t)^+
// PSJF, SRPT, PSPJF and SPRPT preempt (preempt-resume); the others run the
// job in service to completion.

#ifndef SUPERMARKET_SCHED_POLICY_H_
#define SUPERMARKET_SCHED_POLICY_H_

#include <cstddef>
#include <optional>
#include <string_view>

#include "supermarket/job.h"
#include "supermarket/queue_state.h"
#include "supermarket/rng.h"

namespace supermarket {

enum class SchedPolicy { kFifo, kSjf, kPsjf, kSrpt, kSpjf, kPspjf, kSprpt };

bool is_preemptive(SchedPolicy policy);
bool uses_predictions(SchedPolicy policy);

// (y - t)^+
inline double predicted_remaining(double y, double t) {
  return y > t ? y - t : 0.0;
}

double priority_key(SchedPolicy policy, const Job& job);

// Picks the job that should be in service: for a nonpreemptive policy with
// a job running, that job; otherwise the minimum-key job. Among equal keys
// the running job wins, then a uniform choice drawn from `ties` (which is
// only consumed when there is more than one candidate). Returns a position
// in queue.jobs(), or nothing for an empty queue.
std::optional<std::size_t> select_next(SchedPolicy policy,
                                       const QueueState& queue, Rng& ties);

enum class ArrivalAction { kContinue, kStart, kPreempt };

// Decision after the job at `position` has been added to the queue: start it
// on an idle server, preempt the running job on a strict key improvement
// (preemptive policies only), or leave the running job alone.
ArrivalAction on_arrival(SchedPolicy policy, const QueueState& queue,
                         std::size_t position);

std::string_view to_string(SchedPolicy policy);
SchedPolicy parse_sched_policy(std::string_view tag);

}  // namespace supermarket

#endif  // SUPERMARKET_SCHED_POLICY_H_
