#include "supermarket/sched_policy.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <numeric>
#include <vector>

#include "supermarket/simulator.h"

namespace supermarket {
namespace {

Job make_job(JobId id, double x, double y, double t = 0.0) {
  return Job{.id = id, .size = x, .prediction = y, .attained = t};
}

const SchedPolicy kAll[] = {SchedPolicy::kFifo,  SchedPolicy::kSjf,
                            SchedPolicy::kPsjf,  SchedPolicy::kSrpt,
                            SchedPolicy::kSpjf,  SchedPolicy::kPspjf,
                            SchedPolicy::kSprpt};

TEST(PredictedRemaining, Examples) {
  EXPECT_EQ(predicted_remaining(5.0, 2.0), 3.0);
  EXPECT_EQ(predicted_remaining(1.0, 4.0), 0.0);
  EXPECT_EQ(predicted_remaining(0.0, 0.0), 0.0);
}

TEST(SchedPolicy, Flags) {
  EXPECT_FALSE(is_preemptive(SchedPolicy::kFifo));
  EXPECT_FALSE(is_preemptive(SchedPolicy::kSjf));
  EXPECT_FALSE(is_preemptive(SchedPolicy::kSpjf));
  EXPECT_TRUE(is_preemptive(SchedPolicy::kPsjf));
  EXPECT_TRUE(is_preemptive(SchedPolicy::kSrpt));
  EXPECT_TRUE(is_preemptive(SchedPolicy::kPspjf));
  EXPECT_TRUE(is_preemptive(SchedPolicy::kSprpt));
  EXPECT_TRUE(uses_predictions(SchedPolicy::kSprpt));
  EXPECT_FALSE(uses_predictions(SchedPolicy::kSrpt));
  for (auto p : kAll) EXPECT_EQ(parse_sched_policy(to_string(p)), p);
  EXPECT_THROW(parse_sched_policy("LIFO"), std::invalid_argument);
}

TEST(SelectNext, SrptPicksLeastRemaining) {
  QueueState q;
  q.add_job(make_job(0, 3.0, 3.0));
  q.add_job(make_job(1, 0.2, 0.2));
  q.add_job(make_job(2, 1.1, 1.1));
  Rng ties(1);
  EXPECT_EQ(select_next(SchedPolicy::kSrpt, q, ties), 1u);
}

TEST(SelectNext, EmptyQueue) {
  QueueState q;
  Rng ties(1);
  for (auto p : kAll) EXPECT_FALSE(select_next(p, q, ties));
}

TEST(SelectNext, SjfDoesNotPreempt) {
  QueueState q;
  q.start(q.add_job(make_job(0, 5.0, 5.0)));
  const auto b = q.add_job(make_job(1, 0.1, 0.1));
  Rng ties(1);
  EXPECT_EQ(select_next(SchedPolicy::kSjf, q, ties), 0u);
  EXPECT_EQ(on_arrival(SchedPolicy::kSjf, q, b), ArrivalAction::kContinue);
}

TEST(SelectNext, SprptKeepsZeroKeyJob) {
  QueueState q;
  q.start(q.add_job(make_job(0, 3.0, 1.0, 1.5)));  // (y-t)^+ = 0
  const auto b = q.add_job(make_job(1, 1.0, 0.5));
  Rng ties(1);
  EXPECT_EQ(select_next(SchedPolicy::kSprpt, q, ties), 0u);
  EXPECT_EQ(on_arrival(SchedPolicy::kSprpt, q, b), ArrivalAction::kContinue);
}

TEST(SelectNext, TiesFavourServingJobWithoutRandomness) {
  QueueState q;
  q.add_job(make_job(0, 2.0, 2.0));
  q.start(q.add_job(make_job(1, 2.0, 2.0)));
  Rng ties(1), fresh(1);
  EXPECT_EQ(select_next(SchedPolicy::kPsjf, q, ties), 1u);
  EXPECT_EQ(ties.next_u64(), fresh.next_u64());
}

TEST(SelectNext, IdleTiesAreRandomButCoverAll) {
  QueueState q;
  for (JobId i = 0; i < 3; ++i) q.add_job(make_job(i, 1.0, 1.0));
  Rng ties(3);
  std::vector<int> hits(3);
  for (int i = 0; i < 3000; ++i) ++hits[*select_next(SchedPolicy::kSjf, q, ties)];
  for (int h : hits) EXPECT_NEAR(h, 1000, 120);
}

TEST(OnArrival, Examples) {
  {
    QueueState q;
    q.start(q.add_job(make_job(0, 4.0, 4.0, 3.0)));
    const auto b = q.add_job(make_job(1, 2.0, 2.0));
    EXPECT_EQ(on_arrival(SchedPolicy::kPsjf, q, b), ArrivalAction::kPreempt);
    EXPECT_EQ(on_arrival(SchedPolicy::kSrpt, q, b), ArrivalAction::kContinue);
    EXPECT_EQ(on_arrival(SchedPolicy::kFifo, q, b), ArrivalAction::kContinue);
  }
  {
    QueueState q;
    const auto a = q.add_job(make_job(0, 1.0, 1.0));
    for (auto p : kAll) EXPECT_EQ(on_arrival(p, q, a), ArrivalAction::kStart);
  }
}

TEST(PriorityKey, Definitions) {
  const Job j = make_job(7, 4.0, 3.0, 1.0);
  EXPECT_EQ(priority_key(SchedPolicy::kSjf, j), 4.0);
  EXPECT_EQ(priority_key(SchedPolicy::kPsjf, j), 4.0);
  EXPECT_EQ(priority_key(SchedPolicy::kSrpt, j), 3.0);
  EXPECT_EQ(priority_key(SchedPolicy::kSpjf, j), 3.0);
  EXPECT_EQ(priority_key(SchedPolicy::kPspjf, j), 3.0);
  EXPECT_EQ(priority_key(SchedPolicy::kSprpt, j), 2.0);
  // FIFO orders by arrival.
  EXPECT_LT(priority_key(SchedPolicy::kFifo, make_job(1, 9, 9)),
            priority_key(SchedPolicy::kFifo, make_job(2, 1, 1)));
}

// All jobs present at time 0 on one queue: SRPT must attain the minimum
// total response over every sequential order (checked by enumeration).
TEST(SrptOracle, MatchesBestPermutation) {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + trial % 6;  // 2..7 jobs
    auto jobs = std::make_shared<std::vector<TraceJob>>();
    std::vector<double> sizes;
    for (int i = 0; i < k; ++i) {
      const double x = 0.05 + rng.exponential(1.0);
      sizes.push_back(x);
      jobs->push_back({0.0, x, x});
    }
    double best = 1e300;
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    do {
      double t = 0.0, total = 0.0;
      for (int i : order) total += (t += sizes[i]);
      best = std::min(best, total);
    } while (std::next_permutation(order.begin(), order.end()));

    SimConfig c;
    c.n_queues = 1;
    c.d_choices = 1;
    c.sched_policy = SchedPolicy::kSrpt;
    c.trace = jobs;
    c.horizon = std::numeric_limits<double>::infinity();
    c.warmup = 0.0;
    const auto r = simulate(c, trial);
    ASSERT_EQ(r.measured, static_cast<std::uint64_t>(k));
    EXPECT_NEAR(r.response_sum, best, 1e-9 * best) << "trial " << trial;
  }
}

// Priorities while a job is in service: fixed under PSJF, nonincreasing
// under SRPT and SPRPT.
TEST(PriorityKey, EvolutionWhileServing) {
  QueueState q;
  q.start(q.add_job(make_job(0, 3.0, 2.0)));
  double psjf = priority_key(SchedPolicy::kPsjf, *q.serving_job());
  double srpt = priority_key(SchedPolicy::kSrpt, *q.serving_job());
  double sprpt = priority_key(SchedPolicy::kSprpt, *q.serving_job());
  for (int i = 0; i < 29; ++i) {
    q.advance_service(0.1);
    const Job& j = *q.serving_job();
    EXPECT_EQ(priority_key(SchedPolicy::kPsjf, j), psjf);
    EXPECT_LE(priority_key(SchedPolicy::kSrpt, j), srpt);
    EXPECT_LE(priority_key(SchedPolicy::kSprpt, j), sprpt);
    srpt = priority_key(SchedPolicy::kSrpt, j);
    sprpt = priority_key(SchedPolicy::kSprpt, j);
    EXPECT_GE(sprpt, 0.0);
  }
}

}  // namespace
}  // namespace supermarket
