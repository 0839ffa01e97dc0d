#include "supermarket/experiment.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "supermarket/csv.h"

namespace supermarket {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("supermarket_test_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(ParseConfig, EmptyGivesProtocolDefaults) {
  const auto spec = parse_config(json::object());
  ASSERT_EQ(spec.configs.size(), 8u);
  const std::vector<double> rates = {0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99};
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const auto& c = spec.configs[i];
    EXPECT_EQ(c.arrival_rate, rates[i]);
    EXPECT_EQ(c.n_queues, 1000u);
    EXPECT_EQ(c.d_choices, 2u);
    EXPECT_EQ(c.horizon, 10000.0);
    EXPECT_EQ(c.warmup, 1000.0);
    EXPECT_EQ(c.replications, 100u);
    EXPECT_EQ(c.choice_policy, ChoicePolicy::kShortestQueue);
    EXPECT_EQ(c.sched_policy, SchedPolicy::kFifo);
  }
}

TEST(ParseConfig, RejectsUnstableRate) {
  EXPECT_THROW(parse_config(json{{"arrival_rate", 1.2}}), std::invalid_argument);
}

TEST(ParseConfig, CrossProduct) {
  const auto spec = parse_config(
      json{{"sched_policy", {"FIFO", "SRPT"}}, {"arrival_rate", {0.5, 0.7, 0.9}}});
  EXPECT_EQ(spec.configs.size(), 6u);
}

TEST(ParseConfig, TableOneShape) {
  const auto spec = parse_config(
      json{{"choice_policy", {"shortest-queue", "least-loaded"}},
           {"sched_policy", {"FIFO", "SJF", "PSJF", "SRPT"}}});
  EXPECT_EQ(spec.configs.size(), 64u);
}

TEST(ParseConfig, PredictorObjectAndErrors) {
  const auto spec = parse_config(json{
      {"arrival_rate", 0.9},
      {"service_dist", "weibull-half"},
      {"predictor", {{"kind", "alpha-beta"}, {"alpha", 0.5}, {"beta", 0.2}}}});
  ASSERT_EQ(spec.configs.size(), 1u);
  const auto& p = spec.configs[0].predictor;
  EXPECT_EQ(p.kind, PredictorKind::kAlphaBeta);
  EXPECT_EQ(p.alpha, 0.5);
  EXPECT_EQ(p.beta, 0.2);
  EXPECT_EQ(p.dist.kind(), DistKind::kWeibullHalf);

  try {
    parse_config(json{{"lambda", 0.5}});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("arrival_rate"), std::string::npos);
  }
  try {
    parse_config(json{{"sched_policy", "RR"}});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("SPRPT"), std::string::npos);
  }
  EXPECT_THROW(parse_config(json{{"n_queues", {}}}), std::invalid_argument);
  EXPECT_THROW(parse_config(json{{"predictor", {{"kind", "alpha"}, {"alpha", 2}}}}),
               std::invalid_argument);
}

TEST(ResultRow, RoundTripsConfig) {
  const auto spec = parse_config(json{
      {"arrival_rate", {0.55, 0.9}},
      {"n_queues", 37},
      {"predictor", {{"kind", "alpha-beta"}, {"alpha", 0.25}, {"beta", 0.1}}},
      {"choice_policy", "min-add-p"},
      {"sched_policy", "SPRPT"},
      {"updated_load_mode", "full"},
      {"seed", 12345678901234ULL}});
  ConfigOutcome outcome;
  for (std::size_t i = 0; i < spec.configs.size(); ++i) {
    const auto row = result_row(i, spec.configs[i], "", outcome);
    ASSERT_EQ(row.size(), result_columns().size());
    const auto back = config_from_row(result_columns(), row);
    const auto& c = spec.configs[i];
    EXPECT_EQ(back.n_queues, c.n_queues);
    EXPECT_EQ(back.arrival_rate, c.arrival_rate);
    EXPECT_EQ(back.predictor, c.predictor);
    EXPECT_EQ(back.choice_policy, c.choice_policy);
    EXPECT_EQ(back.sched_policy, c.sched_policy);
    EXPECT_EQ(back.updated_load_mode, c.updated_load_mode);
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_EQ(result_row(i, back, "", outcome), row);
  }
}

json tiny() {
  return json{{"n_queues", 10},      {"arrival_rate", {0.5, 0.8}},
              {"horizon", 100},      {"warmup", 10},
              {"replications", 3},   {"sched_policy", {"FIFO", "SRPT"}}};
}

TEST(RunExperiment, DryRunWritesNothing) {
  auto doc = tiny();
  const auto dir = scratch("dry");
  doc["output_dir"] = dir.string();
  std::ostringstream log;
  run_experiment(parse_config(doc), {.dry_run = true, .log = &log});
  EXPECT_FALSE(fs::exists(dir));
  EXPECT_NE(log.str().find("4 configurations, 12 runs"), std::string::npos);
}

TEST(RunExperiment, RerunIsByteIdentical) {
  auto doc = tiny();
  doc["dump_records"] = true;
  doc["write_metrics"] = true;
  const auto a = scratch("rerun_a");
  const auto b = scratch("rerun_b");
  doc["output_dir"] = a.string();
  const auto result = run_experiment(parse_config(doc), {.jobs = 1});
  EXPECT_TRUE(result.all_ok());
  doc["output_dir"] = b.string();
  run_experiment(parse_config(doc), {.jobs = 3});
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    if (rel == "manifest.json") continue;  // carries wall time
    EXPECT_EQ(slurp(entry.path()), slurp(b / rel)) << rel;
  }
  EXPECT_TRUE(fs::exists(a / "records" / "config_3.csv"));
  EXPECT_TRUE(fs::exists(a / "metrics" / "config_0_slowdown_cdf.csv"));
  const auto manifest = json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(manifest["configs"].size(), 4u);

  // The results file is one header plus one row per config.
  std::istringstream rows(slurp(a / "results.csv"));
  std::string line;
  std::getline(rows, line);
  EXPECT_EQ(csv::split(line), result_columns());
  int count = 0;
  while (std::getline(rows, line)) {
    const auto fields = csv::split(line);
    EXPECT_EQ(fields.back(), "ok");
    ++count;
  }
  EXPECT_EQ(count, 4);
}

TEST(RecordsCsv, RoundTrip) {
  std::vector<std::vector<JobRecord>> reps(2);
  reps[0].push_back({1, 0.5, 2.0, 1.0, 0.7, 1.5, 3});
  reps[1].push_back({2, 1.0 / 3.0, 2.0, 0.25, 0.1, 2.0 - 1.0 / 3.0, 0});
  std::ostringstream out;
  write_records_csv(out, reps);
  std::istringstream in(out.str());
  const auto back = read_records_csv(in, "mem");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], reps[0][0]);
  EXPECT_EQ(back[1], reps[1][0]);
}

TEST(Csv, Helpers) {
  EXPECT_EQ(csv::split("a,\"b,c\",\"d\"\"e\"\r"),
            (std::vector<std::string>{"a", "b,c", "d\"e"}));
  EXPECT_EQ(csv::parse_double(" 2.5 "), 2.5);
  EXPECT_FALSE(csv::parse_double("2.5x"));
  EXPECT_FALSE(csv::parse_double(""));
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.0}) {
    EXPECT_EQ(csv::parse_double(csv::format_double(v)), v);
  }
  EXPECT_EQ(csv::escape("plain"), "plain");
  EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::escape("q\""), "\"q\"\"\"");
}

}  // namespace
}  // namespace supermarket
