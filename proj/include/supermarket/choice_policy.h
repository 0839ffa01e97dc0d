// Choosing one of the d sampled queues for an arriving job.

#ifndef SUPERMARKET_CHOICE_POLICY_H_
#define SUPERMARKET_CHOICE_POLICY_H_

#include <cstddef>
#include <span>
#include <string_view>

#include "supermarket/job.h"
#include "supermarket/queue_state.h"
#include "supermarket/rng.h"
#include "supermarket/sched_policy.h"

namespace supermarket {

enum class ChoicePolicy {
  kRandom,
  kShortestQueue,       // fewest jobs
  kLeastLoaded,         // least true remaining work
  kLeastLoadedUpdated,  // least predicted remaining work, recomputed
  kLeastLoadedTotal,    // least decaying scalar of predicted work
  kMinAdd,              // least added system-wide waiting time
  kSelfish,             // least own waiting time
  kMinAddP,             // MinAdd on predictions
  kSelfishP,            // Selfish on predictions
};

bool uses_predictions(ChoicePolicy policy);

// Waiting-time terms of an arrival against one queue under `sched`, as if no
// further jobs arrive. `ahead_work` sums the remaining work of the jobs that
// will be served before the arrival; `jumped` counts the jobs it will be
// served before. With `predicted`, work is measured as (y - t)^+ and the
// arrival's own size as y.
struct WaitingTerms {
  double ahead_work = 0.0;
  std::size_t jumped = 0;
};
WaitingTerms waiting_terms(const QueueState& queue, const Job& arrival,
                           SchedPolicy sched, bool predicted);

// Score of a queue under `policy`; the chosen queue minimizes it.
double choice_score(ChoicePolicy policy, const QueueState& queue,
                    const Job& arrival, SchedPolicy sched);

// Index into `candidates` of the queue to join. Ties are broken uniformly
// with `rng`, which is consumed only when two or more candidates tie.
// Throws std::invalid_argument for an empty candidate set.
std::size_t choose(ChoicePolicy policy,
                   std::span<const QueueState* const> candidates,
                   const Job& arrival, SchedPolicy sched, Rng& rng);

// Least-Loaded-Total bookkeeping. The unit-rate decay while busy lives in
// QueueState::advance_service.
void update_total_load_on_arrival(QueueState& queue, double prediction);
void update_total_load_on_empty(QueueState& queue);

std::string_view to_string(ChoicePolicy policy);
ChoicePolicy parse_choice_policy(std::string_view tag);

}  // namespace supermarket

#endif  // SUPERMARKET_CHOICE_POLICY_H_
