#include "supermarket/queue_state.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "supermarket/choice_policy.h"
#include "supermarket/rng.h"

namespace supermarket {
namespace {

Job make_job(JobId id, double x, double y, double t = 0.0) {
  return Job{.id = id, .size = x, .prediction = y, .attained = t};
}

TEST(AdvanceService, ServesTheRunningJob) {
  QueueState q;
  q.start(q.add_job(make_job(0, 2.0, 2.0, 0.5)));
  EXPECT_DOUBLE_EQ(q.advance_service(1.0), 1.0);
  EXPECT_DOUBLE_EQ(q.serving_job()->attained, 1.5);
  EXPECT_DOUBLE_EQ(q.serving_job()->remaining(), 0.5);
  EXPECT_DOUBLE_EQ(q.true_load(), 0.5);
}

TEST(AdvanceService, IdleQueueUnchanged) {
  QueueState q;
  EXPECT_EQ(q.advance_service(5.0), 0.0);
  EXPECT_EQ(q.true_load(), 0.0);
  EXPECT_EQ(q.predicted_load_updated(), 0.0);
  EXPECT_EQ(q.predicted_load_total(), 0.0);
  EXPECT_NO_THROW(q.audit());
}

TEST(AdvanceService, TotalLoadFloorsAtZero) {
  QueueState q;
  q.start(q.add_job(make_job(0, 5.0, 0.3)));
  q.set_predicted_load_total(0.3);
  q.advance_service(1.0);
  EXPECT_EQ(q.predicted_load_total(), 0.0);
}

TEST(AdvanceService, RejectsNegativeAndOvershoot) {
  QueueState q;
  EXPECT_THROW(q.advance_service(-1.0), std::invalid_argument);
  q.start(q.add_job(make_job(0, 1.0, 1.0)));
  EXPECT_THROW(q.advance_service(1.5), std::invalid_argument);
  // Rounding slack is clamped.
  EXPECT_DOUBLE_EQ(q.advance_service(1.0 + 1e-12), 1.0);
}

TEST(QueueState, UpdatedLoadModes) {
  QueueState remaining(UpdatedLoadMode::kPredictedRemaining);
  QueueState full(UpdatedLoadMode::kFullPrediction);
  for (QueueState* q : {&remaining, &full}) {
    q->start(q->add_job(make_job(0, 3.0, 2.0)));
    q->add_job(make_job(1, 1.0, 4.0));
    q->advance_service(2.5);
    EXPECT_NO_THROW(q->audit());
  }
  // In service: y=2, t=2.5 -> (y-t)^+ = 0. Waiting: 4.
  EXPECT_DOUBLE_EQ(remaining.predicted_load_updated(), 4.0);
  EXPECT_DOUBLE_EQ(full.predicted_load_updated(), 6.0);
  EXPECT_DOUBLE_EQ(remaining.true_load(), 1.5);
}

TEST(QueueState, CompleteRecomputesAndVersionBumps) {
  QueueState q;
  const auto v0 = q.version();
  q.start(q.add_job(make_job(0, 1.0, 1.0)));
  q.add_job(make_job(1, 2.0, 3.0));
  EXPECT_GT(q.version(), v0);
  q.advance_service(1.0);
  const Job done = q.complete_in_service();
  EXPECT_EQ(done.id, 0u);
  EXPECT_EQ(q.job_count(), 1u);
  EXPECT_FALSE(q.in_service());
  EXPECT_DOUBLE_EQ(q.true_load(), 2.0);
  EXPECT_DOUBLE_EQ(q.predicted_load_updated(), 3.0);
}

TEST(QueueState, AuditCatchesIdleNonemptyQueue) {
  QueueState q;
  q.add_job(make_job(0, 1.0, 1.0));
  EXPECT_THROW(q.audit(), std::logic_error);
}

TEST(TotalLoad, Examples) {
  QueueState q;
  q.set_predicted_load_total(1.2);
  update_total_load_on_arrival(q, 0.8);
  EXPECT_DOUBLE_EQ(q.predicted_load_total(), 2.0);

  QueueState r;
  r.set_predicted_load_total(0.7);
  update_total_load_on_empty(r);
  EXPECT_EQ(r.predicted_load_total(), 0.0);

  QueueState s;
  s.start(s.add_job(make_job(0, 2.0, 2.0)));
  s.set_predicted_load_total(0.0);
  s.advance_service(0.5);
  EXPECT_EQ(s.predicted_load_total(), 0.0);
}

// Brute-force replay of the floor rule: decay in many tiny steps, each
// clamped at zero, and compare with the single-step update the queue uses.
TEST(TotalLoad, MatchesFineGrainedReplay) {
  Rng rng(21);
  QueueState q;
  q.start(q.add_job(make_job(0, 1e9, 1.0)));  // stays busy throughout
  double oracle = 0.0;
  for (int event = 0; event < 2000; ++event) {
    if (rng.uniform_open() < 0.5) {
      const double y = rng.exponential(1.0);
      update_total_load_on_arrival(q, y);
      oracle += y;
    } else {
      const double dt = rng.exponential(1.2);
      q.advance_service(dt);
      const int steps = 1000;
      for (int k = 0; k < steps; ++k) oracle = std::max(oracle - dt / steps, 0.0);
    }
    ASSERT_NEAR(q.predicted_load_total(), oracle, 1e-9) << "event " << event;
  }
}

}  // namespace
}  // namespace supermarket
