#include "supermarket/replication.h"

#include <gtest/gtest.h>

namespace supermarket {
namespace {

SimConfig small_config(std::uint32_t reps) {
  SimConfig c;
  c.n_queues = 20;
  c.arrival_rate = 0.8;
  c.horizon = 200.0;
  c.warmup = 20.0;
  c.replications = reps;
  return c;
}

TEST(Replications, SingleRunMeanIsThatRun) {
  const auto c = small_config(1);
  const auto s = run_replications(c);
  ASSERT_EQ(s.replication_means.size(), 1u);
  const auto r = simulate(c, replication_seed(c.seed, 0), {.keep_records = false});
  EXPECT_EQ(s.mean_response, r.mean_response());
  EXPECT_EQ(s.std_dev, 0.0);
  EXPECT_EQ(s.measured_jobs, r.measured);
}

TEST(Replications, EqualMeansAverageToThemselves) {
  RunResult a;
  a.measured = 2;
  a.response_sum = 3.0;
  a.tail_fractions = {1.0, 0.5};
  RunResult b = a;
  const auto s = summarize({a, b}, {1, 2}, false);
  EXPECT_DOUBLE_EQ(s.mean_response, 1.5);
  EXPECT_DOUBLE_EQ(s.std_dev, 0.0);
  EXPECT_EQ(s.measured_jobs, 4u);
}

TEST(Replications, IndependentOfThreadCount) {
  const auto c = small_config(6);
  const auto one = run_replications(c, {.jobs = 1, .keep_records = true});
  const auto many = run_replications(c, {.jobs = 4, .keep_records = true});
  EXPECT_EQ(one.replication_means, many.replication_means);
  EXPECT_EQ(one.records, many.records);
  EXPECT_EQ(one.replication_seeds, many.replication_seeds);
  EXPECT_EQ(one.records.size(), 6u);
  double sum = 0.0;
  for (double m : one.replication_means) sum += m;
  EXPECT_DOUBLE_EQ(one.mean_response, sum / 6.0);
}

TEST(Replications, SeedsAreCounterBased) {
  const auto s = run_replications(small_config(3));
  for (std::uint32_t r = 0; r < 3; ++r) {
    EXPECT_EQ(s.replication_seeds[r], replication_seed(1, r));
  }
}

TEST(Replications, ErrorsNameTheReplication) {
  auto c = small_config(2);
  c.trace = std::make_shared<std::vector<TraceJob>>(
      std::vector<TraceJob>{{0.0, std::numeric_limits<double>::quiet_NaN(), 1.0}});
  c.horizon = std::numeric_limits<double>::infinity();
  c.warmup = 0.0;
  EXPECT_THROW(run_replications(c), ReplicationError);
}

}  // namespace
}  // namespace supermarket
