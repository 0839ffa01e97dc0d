// Experiment descriptions, sweeps and result files.
//
// An experiment is a JSON object whose keys mirror SimConfig. Any of the
// sweepable keys may hold a list instead of a scalar; the experiment is the
// cross product. Missing keys take the defaults below, which reproduce the
// standard protocol (1000 queues, d = 2, 100 replications of 10000 time
// units measured after 1000).
//
//   {
//     "n_queues": 1000, "d_choices": 2,
//     "arrival_rate": [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99],
//     "service_dist": "exponential",
//     "predictor": "exact" | {"kind": "alpha-beta", "alpha": 0.5, "beta": 0.2},
//     "choice_policy": "shortest-queue", "sched_policy": "FIFO",
//     "updated_load_mode": "remaining" | "full",
//     "horizon": 10000, "warmup": 1000, "replications": 100, "seed": 1
//   }

#ifndef SUPERMARKET_EXPERIMENT_H_
#define SUPERMARKET_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "supermarket/metrics.h"
#include "supermarket/replication.h"
#include "supermarket/simulator.h"

namespace supermarket {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kOutputDirEnv = "SUPERMARKET_OUT_DIR";

// Defaults for the arrival-rate sweep.
const std::vector<double>& default_arrival_rates();

struct ExperimentSpec {
  std::vector<SimConfig> configs;
  // Per-config trace names, parallel to configs ("" for synthetic runs).
  std::vector<std::string> trace_names;
  std::filesystem::path output_dir = "results";
  bool dump_records = false;
  bool write_metrics = false;
};

// Throws std::invalid_argument for unknown keys or tags, and for generated
// configurations that fail SimConfig::validate().
ExperimentSpec parse_config(const nlohmann::json& doc);
ExperimentSpec parse_config_file(const std::filesystem::path& path);

std::string_view to_string(UpdatedLoadMode mode);
UpdatedLoadMode parse_updated_load_mode(std::string_view tag);

// The result CSV: one row per configuration. Every config field is a
// column, so config_from_row(result_row(c)) reproduces c.
const std::vector<std::string>& result_columns();

struct ConfigOutcome {
  std::optional<ReplicationSummary> summary;
  std::string error;  // empty on success
  double wall_seconds = 0.0;
};

std::vector<std::string> result_row(std::size_t index, const SimConfig& config,
                                    const std::string& trace_name,
                                    const ConfigOutcome& outcome);
SimConfig config_from_row(const std::vector<std::string>& header,
                          const std::vector<std::string>& fields);

struct ExperimentOptions {
  unsigned jobs = 0;  // 0: hardware concurrency
  bool dry_run = false;
  std::ostream* log = nullptr;
};

struct ExperimentResult {
  std::vector<ConfigOutcome> outcomes;
  bool all_ok() const;
};

// Runs every (config, replication) pair on a shared worker pool and writes
// results.csv and manifest.json (plus records/ and metrics/ when requested)
// into spec.output_dir. A dry run prints the plan to options.log and writes
// nothing.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const ExperimentOptions& options = {});

// Writes the result CSV for already computed outcomes.
void write_results_csv(std::ostream& out, const ExperimentSpec& spec,
                       const std::vector<ConfigOutcome>& outcomes);

// Record dump format shared with the fairness subcommand.
void write_records_csv(std::ostream& out,
                       const std::vector<std::vector<JobRecord>>& replications);
std::vector<JobRecord> read_records_csv(std::istream& in,
                                        const std::string& name);

// Metric CSVs.
void write_slowdown_cdf_csv(std::ostream& out, std::span<const JobRecord> records,
                            std::span<const double> grid);
void write_conditional_slowdown_csv(std::ostream& out,
                                    std::span<const JobRecord> records,
                                    std::size_t bins = 50);
void write_period_weights_csv(std::ostream& out, std::span<const double> weights);
void write_heatmap_csv(std::ostream& out, const Heatmap& map);

}  // namespace supermarket

#endif  // SUPERMARKET_EXPERIMENT_H_
