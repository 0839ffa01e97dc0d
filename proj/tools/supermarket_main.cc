// supermarket: command-line front end for the simulator.
//
//   supermarket run        synthetic sweeps
//   supermarket trace      trace replay
//   supermarket oracle     closed-form tail and mean-response tables
//   supermarket convert    map a published trace schema to canonical CSV
//   supermarket fairness   slowdown metrics from a record dump
//   supermarket synth-trace  generate a synthetic heavy-tailed trace

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "supermarket/analytics.h"
#include "supermarket/csv.h"
#include "supermarket/experiment.h"
#include "supermarket/metrics.h"
#include "supermarket/trace.h"
#include "synth_trace.h"

namespace {

using nlohmann::json;
using namespace supermarket;

std::string default_output_dir() {
  if (const char* env = std::getenv(std::string(kOutputDirEnv).c_str())) {
    if (*env) return env;
  }
  return "results";
}

// Flags shared by `run` and `trace`; unset flags leave the config alone.
struct SweepFlags {
  std::vector<std::uint32_t> queues;
  std::vector<std::uint32_t> d;
  std::vector<double> lambda;
  std::vector<std::string> dist;
  std::vector<std::string> choice;
  std::vector<std::string> sched;
  std::string predictor;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::string llu_mode;
  std::optional<std::uint32_t> reps;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned jobs = 0;
  bool dry_run = false;
  bool dump_records = false;
  bool metrics = false;

  void add_to(CLI::App* app) {
    app->add_option("--queues", queues, "Number of queues n (list sweeps)");
    app->add_option("--d", d, "Queues sampled per arrival (list sweeps)");
    app->add_option("--lambda", lambda, "Arrival rate per queue (list sweeps)");
    app->add_option("--dist", dist,
                    "Service distribution: exponential, weibull-half, "
                    "weibull-third");
    app->add_option("--choice", choice,
                    "Queue choice: random, shortest-queue, least-loaded, "
                    "least-loaded-updated, least-loaded-total, min-add, "
                    "selfish, min-add-p, selfish-p");
    app->add_option("--sched", sched,
                    "Scheduling: FIFO, SJF, PSJF, SRPT, SPJF, PSPJF, SPRPT");
    app->add_option("--predictor", predictor,
                    "Predictor: exact, exponential, alpha, alpha-beta, trace");
    app->add_option("--alpha", alpha, "Predictor alpha");
    app->add_option("--beta", beta, "Predictor beta");
    app->add_option("--llu-mode", llu_mode,
                    "Least-loaded-updated accounting: remaining, full");
    app->add_option("--reps", reps, "Replications per configuration");
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--out", out, "Output directory (default $" +
                                      std::string(kOutputDirEnv) +
                                      " or ./results)");
    app->add_option("--jobs", jobs, "Worker threads (default: all cores)");
    app->add_flag("--dry-run", dry_run, "Print the plan and exit");
    app->add_flag("--dump-records", dump_records, "Write per-job records");
    app->add_flag("--metrics", metrics, "Write slowdown metric CSVs");
  }

  void apply(json& doc) const {
    auto set_list = [&doc](const char* key, const auto& values) {
      if (values.empty()) return;
      doc[key] = values.size() == 1 ? json(values.front()) : json(values);
    };
    set_list("n_queues", queues);
    set_list("d_choices", d);
    set_list("arrival_rate", lambda);
    set_list("service_dist", dist);
    set_list("choice_policy", choice);
    set_list("sched_policy", sched);
    if (!predictor.empty() || alpha || beta) {
      json p = json::object();
      if (doc.contains("predictor") && doc["predictor"].is_object()) {
        p = doc["predictor"];
      } else if (doc.contains("predictor") && doc["predictor"].is_string()) {
        p["kind"] = doc["predictor"];
      }
      if (!predictor.empty()) p["kind"] = predictor;
      if (!p.contains("kind")) p["kind"] = "exact";
      if (alpha) p["alpha"] = *alpha;
      if (beta) p["beta"] = *beta;
      doc["predictor"] = p;
    }
    if (!llu_mode.empty()) doc["updated_load_mode"] = llu_mode;
    if (reps) doc["replications"] = *reps;
    if (seed) doc["seed"] = *seed;
    if (!out.empty()) doc["output_dir"] = out;
    if (!doc.contains("output_dir")) doc["output_dir"] = default_output_dir();
    if (dump_records) doc["dump_records"] = true;
    if (metrics) doc["write_metrics"] = true;
  }
};

int run_spec(const ExperimentSpec& spec, const SweepFlags& flags) {
  ExperimentOptions options;
  options.jobs = flags.jobs;
  options.dry_run = flags.dry_run;
  options.log = &std::cerr;
  const auto result = run_experiment(spec, options);
  if (!flags.dry_run) {
    std::cerr << "wrote " << (spec.output_dir / "results.csv").string() << '\n';
  }
  return result.all_ok() ? 0 : 1;
}

int cmd_run(const std::string& config_path, SweepFlags& flags,
            std::optional<double> horizon, std::optional<double> warmup) {
  json doc = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config " + config_path);
    doc = json::parse(in);
  }
  flags.apply(doc);
  if (horizon) doc["horizon"] = *horizon;
  if (warmup) doc["warmup"] = *warmup;
  return run_spec(parse_config(doc), flags);
}

int cmd_trace(const std::string& trace_path, SweepFlags& flags) {
  auto loaded = load_trace(trace_path);
  std::cerr << "trace " << loaded.meta.name << ": " << loaded.meta.job_count
            << " jobs (" << loaded.meta.dropped << " dropped)\n";

  json doc = json::object();
  doc["n_queues"] = 100;
  doc["replications"] = 5;
  doc["arrival_rate"] = 0.9;
  doc["predictor"] = "trace";
  flags.apply(doc);
  // Sweep expansion validates synthetic constraints, so parse with a
  // placeholder predictor and a finite horizon, then swap in the trace.
  json probe = doc;
  probe["predictor"] = "exact";
  const auto base = parse_config(probe);
  Predictor predictor;
  {
    json pdoc = json::object();
    pdoc["predictor"] = doc["predictor"];
    pdoc["arrival_rate"] = 0.5;
    pdoc["horizon"] = 1.0;
    pdoc["warmup"] = 0.0;
    pdoc["replications"] = 1;
    pdoc["n_queues"] = 1;
    pdoc["d_choices"] = 1;
    if (doc["predictor"] == "trace" ||
        (doc["predictor"].is_object() &&
         doc["predictor"].value("kind", "") == "trace")) {
      predictor = Predictor::trace_given();
    } else {
      predictor = parse_config(pdoc).configs.front().predictor;
    }
  }

  ExperimentSpec spec;
  spec.output_dir = base.output_dir;
  spec.dump_records = base.dump_records;
  spec.write_metrics = base.write_metrics;
  std::vector<double> prepared_for;
  std::vector<std::vector<TraceJob>> prepared;
  for (auto config : base.configs) {
    std::vector<TraceJob> jobs = loaded.jobs;
    prepare_trace(jobs, config.arrival_rate, config.n_queues);
    config.predictor = predictor;
    config.predictor.dist = config.service_dist;
    spec.configs.push_back(with_trace(config, jobs));
    spec.trace_names.push_back(loaded.meta.name);
  }

  if (!flags.dry_run) {
    // Trace-level figures do not depend on the simulation.
    std::vector<TraceJob> normalized = loaded.jobs;
    normalize_sizes(normalized);
    const auto dir = spec.output_dir / "metrics";
    std::filesystem::create_directories(dir);
    std::ofstream weights(dir / (loaded.meta.name + "_period_weights.csv"));
    write_period_weights_csv(weights, per_period_weights(normalized));
    std::ofstream heat(dir / (loaded.meta.name + "_heatmap.csv"));
    write_heatmap_csv(heat, size_prediction_heatmap(normalized));
  }
  return run_spec(spec, flags);
}

int cmd_oracle(std::vector<double> lambdas, std::vector<int> ds, int levels) {
  if (lambdas.empty()) lambdas = default_arrival_rates();
  if (ds.empty()) ds = {1, 2};
  std::cout << "lambda,d,mean_response";
  for (int i = 0; i <= levels; ++i) std::cout << ",tail_" << i;
  std::cout << '\n';
  for (double lambda : lambdas) {
    for (int d : ds) {
      std::cout << csv::format_double(lambda) << ',' << d << ','
                << csv::format_double(supermarket_mean_response(lambda, d));
      for (double t : supermarket_tail_curve(lambda, d, levels)) {
        std::cout << ',' << csv::format_double(t);
      }
      std::cout << '\n';
    }
  }
  return 0;
}

int cmd_convert(const std::string& in_path, const std::string& out_path,
                ConvertOptions options) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open " + in_path);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  const auto stats = convert_trace(in, out, options, in_path);
  std::cerr << stats.rows << " rows, " << stats.dropped << " dropped, "
            << stats.jobs << " jobs written to " << out_path << '\n';
  return 0;
}

int cmd_fairness(const std::string& records_path, const std::string& out_dir,
                 std::size_t bins, double grid_lo, double grid_hi,
                 std::size_t grid_points) {
  std::ifstream in(records_path);
  if (!in) throw std::runtime_error("cannot open " + records_path);
  const auto records = read_records_csv(in, records_path);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  {
    std::ofstream out(dir / "slowdown_cdf.csv");
    write_slowdown_cdf_csv(out, records, log_grid(grid_lo, grid_hi, grid_points));
  }
  {
    std::ofstream out(dir / "conditional_slowdown.csv");
    write_conditional_slowdown_csv(out, records, bins);
  }
  std::cerr << records.size() << " records; wrote slowdown_cdf.csv and "
            << "conditional_slowdown.csv to " << out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supermarket-model simulator with known and predicted service "
               "times"};
  app.require_subcommand(1);

  SweepFlags run_flags;
  std::string config_path;
  std::optional<double> horizon, warmup;
  auto* run = app.add_subcommand("run", "Run a synthetic sweep");
  run->add_option("--config", config_path, "JSON experiment description");
  run->add_option("--horizon", horizon, "End of simulated time");
  run->add_option("--warmup", warmup, "Start of the measurement window");
  run_flags.add_to(run);

  SweepFlags trace_flags;
  std::string trace_path;
  auto* trace = app.add_subcommand("trace", "Replay a canonical trace CSV");
  trace->add_option("--trace", trace_path, "Trace CSV")->required();
  trace_flags.add_to(trace);

  std::vector<double> oracle_lambdas;
  std::vector<int> oracle_ds;
  int oracle_levels = 6;
  auto* oracle = app.add_subcommand("oracle", "Print closed-form tables");
  oracle->add_option("--lambda", oracle_lambdas, "Arrival rates");
  oracle->add_option("--d", oracle_ds, "Choices");
  oracle->add_option("--levels", oracle_levels, "Highest tail level");

  ConvertOptions convert_options;
  std::string convert_in, convert_out, delimiter = ",";
  auto* convert = app.add_subcommand(
      "convert", "Convert a published trace schema to canonical CSV");
  convert->add_option("--in", convert_in, "Input file")->required();
  convert->add_option("--out", convert_out, "Output CSV")->required();
  convert->add_option("--submission-col", convert_options.submission_column);
  convert->add_option("--size-col", convert_options.size_column);
  convert->add_option("--start-col", convert_options.start_column);
  convert->add_option("--end-col", convert_options.end_column);
  convert->add_option("--prediction-col", convert_options.prediction_column)
      ->required();
  convert->add_option("--status-col", convert_options.status_column);
  convert->add_option("--success-value", convert_options.success_value);
  convert->add_option("--job-col", convert_options.job_column,
                      "Sum task rows sharing this id into one job");
  convert->add_option("--delimiter", delimiter);
  convert->add_option("--time-scale", convert_options.time_scale,
                      "Multiplier turning input times into seconds");

  std::string records_path, fairness_out = "fairness";
  std::size_t bins = 50, grid_points = 161;
  double grid_lo = 1.0, grid_hi = 1e4;
  auto* fairness = app.add_subcommand(
      "fairness", "Slowdown CDF and mean conditional slowdown from records");
  fairness->add_option("--records", records_path, "Record dump CSV")
      ->required();
  fairness->add_option("--out", fairness_out, "Output directory");
  fairness->add_option("--bins", bins, "Equal-count size bins");
  fairness->add_option("--grid-lo", grid_lo, "Smallest CDF grid point");
  fairness->add_option("--grid-hi", grid_hi, "Largest CDF grid point");
  fairness->add_option("--grid-points", grid_points, "CDF grid size");

  SynthTraceOptions synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand(
      "synth-trace", "Generate a synthetic heavy-tailed trace");
  synth_cmd->add_option("--out", synth_out, "Output CSV")->required();
  synth_cmd->add_option("--count", synth.count, "Rows to generate");
  synth_cmd->add_option("--seed", synth.seed, "Seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, run_flags, horizon, warmup);
    if (*trace) return cmd_trace(trace_path, trace_flags);
    if (*oracle) return cmd_oracle(oracle_lambdas, oracle_ds, oracle_levels);
    if (*convert) {
      if (delimiter.size() != 1) {
        throw std::invalid_argument("--delimiter must be one character");
      }
      convert_options.delimiter = delimiter[0];
      return cmd_convert(convert_in, convert_out, convert_options);
    }
    if (*fairness) {
      return cmd_fairness(records_path, fairness_out, bins, grid_lo, grid_hi,
                          grid_points);
    }
    if (*synth_cmd) {
      std::ofstream out(synth_out);
      if (!out) throw std::runtime_error("cannot write " + synth_out);
      write_synth_trace(out, synth);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
