#include "supermarket/choice_policy.h"

#include <stdexcept>
#include <string>

namespace supermarket {

bool uses_predictions(ChoicePolicy policy) {
  switch (policy) {
    case ChoicePolicy::kLeastLoadedUpdated:
    case ChoicePolicy::kLeastLoadedTotal:
    case ChoicePolicy::kMinAddP:
    case ChoicePolicy::kSelfishP:
      return true;
    default:
      return false;
  }
}

WaitingTerms waiting_terms(const QueueState& queue, const Job& arrival,
                           SchedPolicy sched, bool predicted) {
  WaitingTerms terms;
  const double arrival_key = priority_key(sched, arrival);
  const auto serving = queue.in_service();
  const bool preemptive = is_preemptive(sched);
  const auto jobs = queue.jobs();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    const bool running = serving && *serving == i;
    // Equal keys count as ahead: a running job is not preempted on a tie and
    // a waiting one is assumed to win the tie.
    const bool ahead = (running && !preemptive) ||
                       priority_key(sched, job) <= arrival_key;
    if (ahead) {
      terms.ahead_work += predicted
                              ? predicted_remaining(job.prediction, job.attained)
                              : job.remaining();
    } else {
      ++terms.jumped;
    }
  }
  return terms;
}

double choice_score(ChoicePolicy policy, const QueueState& queue,
                    const Job& arrival, SchedPolicy sched) {
  switch (policy) {
    case ChoicePolicy::kRandom:
      return 0.0;
    case ChoicePolicy::kShortestQueue:
      return static_cast<double>(queue.job_count());
    case ChoicePolicy::kLeastLoaded:
      return queue.true_load();
    case ChoicePolicy::kLeastLoadedUpdated:
      return queue.predicted_load_updated();
    case ChoicePolicy::kLeastLoadedTotal:
      return queue.predicted_load_total();
    case ChoicePolicy::kSelfish:
      return waiting_terms(queue, arrival, sched, false).ahead_work;
    case ChoicePolicy::kSelfishP:
      return waiting_terms(queue, arrival, sched, true).ahead_work;
    case ChoicePolicy::kMinAdd: {
      const auto t = waiting_terms(queue, arrival, sched, false);
      return t.ahead_work + arrival.size * static_cast<double>(t.jumped);
    }
    case ChoicePolicy::kMinAddP: {
      const auto t = waiting_terms(queue, arrival, sched, true);
      return t.ahead_work + arrival.prediction * static_cast<double>(t.jumped);
    }
  }
  return 0.0;
}

std::size_t choose(ChoicePolicy policy,
                   std::span<const QueueState* const> candidates,
                   const Job& arrival, SchedPolicy sched, Rng& rng) {
  if (candidates.empty()) {
    throw std::invalid_argument("choose: empty candidate set");
  }
  std::size_t best = 0;
  double best_score = choice_score(policy, *candidates[0], arrival, sched);
  std::uint64_t tied = 1;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double score = choice_score(policy, *candidates[i], arrival, sched);
    if (score < best_score) {
      best = i;
      best_score = score;
      tied = 1;
    } else if (score == best_score && rng.below(++tied) == 0) {
      best = i;
    }
  }
  return best;
}

void update_total_load_on_arrival(QueueState& queue, double prediction) {
  queue.set_predicted_load_total(queue.predicted_load_total() + prediction);
}

void update_total_load_on_empty(QueueState& queue) {
  queue.set_predicted_load_total(0.0);
}

std::string_view to_string(ChoicePolicy policy) {
  switch (policy) {
    case ChoicePolicy::kRandom:
      return "random";
    case ChoicePolicy::kShortestQueue:
      return "shortest-queue";
    case ChoicePolicy::kLeastLoaded:
      return "least-loaded";
    case ChoicePolicy::kLeastLoadedUpdated:
      return "least-loaded-updated";
    case ChoicePolicy::kLeastLoadedTotal:
      return "least-loaded-total";
    case ChoicePolicy::kMinAdd:
      return "min-add";
    case ChoicePolicy::kSelfish:
      return "selfish";
    case ChoicePolicy::kMinAddP:
      return "min-add-p";
    case ChoicePolicy::kSelfishP:
      return "selfish-p";
  }
  return "?";
}

ChoicePolicy parse_choice_policy(std::string_view tag) {
  for (auto p :
       {ChoicePolicy::kRandom, ChoicePolicy::kShortestQueue,
        ChoicePolicy::kLeastLoaded, ChoicePolicy::kLeastLoadedUpdated,
        ChoicePolicy::kLeastLoadedTotal, ChoicePolicy::kMinAdd,
        ChoicePolicy::kSelfish, ChoicePolicy::kMinAddP,
        ChoicePolicy::kSelfishP}) {
    if (tag == to_string(p)) return p;
  }
  throw std::invalid_argument(
      "unknown choice policy '" + std::string(tag) +
      "' (valid: random, shortest-queue, least-loaded, least-loaded-updated, "
      "least-loaded-total, min-add, selfish, min-add-p, selfish-p)");
}

}  // namespace supermarket
