#include "supermarket/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "supermarket/csv.h"
#include "supermarket/metrics.h"
#include "supermarket/rng.h"

namespace supermarket {

using nlohmann::json;

const std::vector<double>& default_arrival_rates() {
  static const std::vector<double> rates = {0.5, 0.6,  0.7,  0.8,
                                            0.9, 0.95, 0.98, 0.99};
  return rates;
}

std::string_view to_string(UpdatedLoadMode mode) {
  return mode == UpdatedLoadMode::kFullPrediction ? "full" : "remaining";
}

UpdatedLoadMode parse_updated_load_mode(std::string_view tag) {
  if (tag == "remaining") return UpdatedLoadMode::kPredictedRemaining;
  if (tag == "full") return UpdatedLoadMode::kFullPrediction;
  throw std::invalid_argument("unknown updated_load_mode '" +
                              std::string(tag) + "' (valid: remaining, full)");
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "n_queues",     "d_choices",     "arrival_rate",      "service_dist",
      "predictor",    "choice_policy", "sched_policy",      "updated_load_mode",
      "horizon",      "warmup",        "replications",      "seed",
      "output_dir",   "dump_records",  "write_metrics"};
  return keys;
}

std::vector<json> as_list(const json& doc, const char* key, json fallback) {
  const json& value = doc.contains(key) ? doc.at(key) : fallback;
  if (value.is_array()) {
    if (value.empty()) {
      throw std::invalid_argument(std::string("'") + key +
                                  "' must not be an empty list");
    }
    return std::vector<json>(value.begin(), value.end());
  }
  return {value};
}

template <typename T>
T scalar(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("'") + key + "': " + e.what());
  }
}

template <typename T>
T number(const json& value, const char* key) {
  if (!value.is_number()) {
    throw std::invalid_argument(std::string("'") + key +
                                "' must be numeric, got " + value.dump());
  }
  return value.get<T>();
}

std::string text(const json& value, const char* key) {
  if (!value.is_string()) {
    throw std::invalid_argument(std::string("'") + key +
                                "' must be a string, got " + value.dump());
  }
  return value.get<std::string>();
}

Predictor parse_predictor(const json& value) {
  Predictor p;
  if (value.is_string()) {
    p.kind = parse_predictor_kind(value.get<std::string>());
  } else if (value.is_object()) {
    for (const auto& [k, v] : value.items()) {
      if (k != "kind" && k != "alpha" && k != "beta") {
        throw std::invalid_argument("unknown predictor key '" + k +
                                    "' (valid: kind, alpha, beta)");
      }
    }
    p.kind = parse_predictor_kind(text(value.at("kind"), "predictor.kind"));
    if (value.contains("alpha")) p.alpha = number<double>(value.at("alpha"), "alpha");
    if (value.contains("beta")) p.beta = number<double>(value.at("beta"), "beta");
  } else {
    throw std::invalid_argument("'predictor' must be a tag or an object");
  }
  p.validate();
  return p;
}

}  // namespace

ExperimentSpec parse_config(const json& doc) {
  if (!doc.is_object()) {
    throw std::invalid_argument("experiment description must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) {
      std::string valid;
      for (const auto& k : known_keys()) valid += (valid.empty() ? "" : ", ") + k;
      throw std::invalid_argument("unknown configuration key '" + key +
                                  "' (valid: " + valid + ")");
    }
  }

  ExperimentSpec spec;
  spec.output_dir = scalar<std::string>(doc, "output_dir", "results");
  spec.dump_records = scalar<bool>(doc, "dump_records", false);
  spec.write_metrics = scalar<bool>(doc, "write_metrics", false);

  SimConfig base;
  base.horizon = scalar<double>(doc, "horizon", 10000.0);
  base.warmup = scalar<double>(doc, "warmup", 1000.0);
  base.replications = scalar<std::uint32_t>(doc, "replications", 100);
  base.seed = scalar<std::uint64_t>(doc, "seed", 1);

  const auto dists = as_list(doc, "service_dist", "exponential");
  const auto predictors = as_list(doc, "predictor", "exact");
  const auto modes = as_list(doc, "updated_load_mode", "remaining");
  const auto queues = as_list(doc, "n_queues", 1000);
  const auto ds = as_list(doc, "d_choices", 2);
  const auto choices = as_list(doc, "choice_policy", "shortest-queue");
  const auto scheds = as_list(doc, "sched_policy", "FIFO");
  const auto rates = as_list(doc, "arrival_rate", json(default_arrival_rates()));

  for (const auto& dist : dists) {
    for (const auto& pred : predictors) {
      for (const auto& mode : modes) {
        for (const auto& n : queues) {
          for (const auto& d : ds) {
            for (const auto& choice : choices) {
              for (const auto& sched : scheds) {
                for (const auto& rate : rates) {
                  SimConfig c = base;
                  c.service_dist =
                      ServiceDist(parse_dist_kind(text(dist, "service_dist")));
                  c.predictor = parse_predictor(pred);
                  c.predictor.dist = c.service_dist;
                  c.updated_load_mode = parse_updated_load_mode(
                      text(mode, "updated_load_mode"));
                  c.n_queues = number<std::uint32_t>(n, "n_queues");
                  c.d_choices = number<std::uint32_t>(d, "d_choices");
                  c.choice_policy =
                      parse_choice_policy(text(choice, "choice_policy"));
                  c.sched_policy =
                      parse_sched_policy(text(sched, "sched_policy"));
                  c.arrival_rate = number<double>(rate, "arrival_rate");
                  try {
                    c.validate();
                  } catch (const std::invalid_argument& e) {
                    throw std::invalid_argument(
                        "configuration " + std::to_string(spec.configs.size()) +
                        ": " + e.what());
                  }
                  spec.configs.push_back(std::move(c));
                  spec.trace_names.emplace_back();
                }
              }
            }
          }
        }
      }
    }
  }
  return spec;
}

ExperimentSpec parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> columns = {
      "index",          "trace",         "n_queues",     "d_choices",
      "arrival_rate",   "service_dist",  "predictor",    "alpha",
      "beta",           "choice_policy", "sched_policy", "updated_load_mode",
      "horizon",        "warmup",        "replications", "seed",
      "mean_response",  "std_dev",       "measured_jobs", "status"};
  return columns;
}

std::vector<std::string> result_row(std::size_t index, const SimConfig& c,
                                    const std::string& trace_name,
                                    const ConfigOutcome& outcome) {
  using csv::format_double;
  std::vector<std::string> row = {
      std::to_string(index),
      trace_name,
      std::to_string(c.n_queues),
      std::to_string(c.d_choices),
      format_double(c.arrival_rate),
      std::string(to_string(c.service_dist.kind())),
      std::string(to_string(c.predictor.kind)),
      format_double(c.predictor.alpha),
      format_double(c.predictor.beta),
      std::string(to_string(c.choice_policy)),
      std::string(to_string(c.sched_policy)),
      std::string(to_string(c.updated_load_mode)),
      format_double(c.horizon),
      format_double(c.warmup),
      std::to_string(c.replications),
      std::to_string(c.seed)};
  if (outcome.summary) {
    row.push_back(format_double(outcome.summary->mean_response));
    row.push_back(format_double(outcome.summary->std_dev));
    row.push_back(std::to_string(outcome.summary->measured_jobs));
    row.push_back("ok");
  } else {
    row.insert(row.end(), {"", "", "", "error: " + outcome.error});
  }
  return row;
}

SimConfig config_from_row(const std::vector<std::string>& header,
                          const std::vector<std::string>& fields) {
  if (header.size() != fields.size()) {
    throw std::invalid_argument("result row has " +
                                std::to_string(fields.size()) +
                                " fields, header has " +
                                std::to_string(header.size()));
  }
  std::map<std::string, std::string> row;
  for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = fields[i];
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = row.find(key);
    if (it == row.end()) {
      throw std::invalid_argument("result row lacks column '" + key + "'");
    }
    return it->second;
  };
  auto real = [&](const std::string& key) {
    const auto v = csv::parse_double(get(key));
    if (!v) throw std::invalid_argument("column '" + key + "' is not numeric");
    return *v;
  };
  auto integer = [&](const std::string& key) {
    return static_cast<std::uint64_t>(std::stoull(get(key)));
  };

  SimConfig c;
  c.n_queues = static_cast<std::uint32_t>(integer("n_queues"));
  c.d_choices = static_cast<std::uint32_t>(integer("d_choices"));
  c.arrival_rate = real("arrival_rate");
  c.service_dist = ServiceDist(parse_dist_kind(get("service_dist")));
  c.predictor.kind = parse_predictor_kind(get("predictor"));
  c.predictor.alpha = real("alpha");
  c.predictor.beta = real("beta");
  c.predictor.dist = c.service_dist;
  c.choice_policy = parse_choice_policy(get("choice_policy"));
  c.sched_policy = parse_sched_policy(get("sched_policy"));
  c.updated_load_mode = parse_updated_load_mode(get("updated_load_mode"));
  c.horizon = real("horizon");
  c.warmup = real("warmup");
  c.replications = static_cast<std::uint32_t>(integer("replications"));
  c.seed = integer("seed");
  return c;
}

bool ExperimentResult::all_ok() const {
  return std::all_of(outcomes.begin(), outcomes.end(),
                     [](const ConfigOutcome& o) { return o.error.empty(); });
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv::escape(fields[i]);
  }
  out << '\n';
}

std::string describe(const SimConfig& c, const std::string& trace) {
  std::string s = std::string(to_string(c.choice_policy)) + "/" +
                  std::string(to_string(c.sched_policy)) +
                  " lambda=" + csv::format_double(c.arrival_rate) +
                  " n=" + std::to_string(c.n_queues) +
                  " d=" + std::to_string(c.d_choices) + " " +
                  std::string(to_string(c.service_dist.kind())) +
                  " predictor=" + std::string(to_string(c.predictor.kind));
  if (!trace.empty()) s += " trace=" + trace;
  return s;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_results_csv(std::ostream& out, const ExperimentSpec& spec,
                       const std::vector<ConfigOutcome>& outcomes) {
  write_row(out, result_columns());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const std::string trace =
        i < spec.trace_names.size() ? spec.trace_names[i] : std::string();
    write_row(out, result_row(i, spec.configs[i], trace, outcomes[i]));
  }
}

void write_records_csv(std::ostream& out,
                       const std::vector<std::vector<JobRecord>>& replications) {
  using csv::format_double;
  out << "replication,id,queue_id,arrival,completion,size,prediction,response\n";
  for (std::size_t r = 0; r < replications.size(); ++r) {
    for (const auto& rec : replications[r]) {
      out << r << ',' << rec.id << ',' << rec.queue_id << ','
          << format_double(rec.arrival) << ',' << format_double(rec.completion)
          << ',' << format_double(rec.size) << ','
          << format_double(rec.prediction) << ','
          << format_double(rec.response) << '\n';
    }
  }
}

std::vector<JobRecord> read_records_csv(std::istream& in,
                                        const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument(name + ": empty record file");
  }
  const auto header = csv::split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* needed :
       {"id", "queue_id", "arrival", "completion", "size", "prediction"}) {
    if (!col.contains(needed)) {
      throw std::invalid_argument(name + ": missing column '" + needed + "'");
    }
  }
  std::vector<JobRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != header.size()) {
      throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                  ": wrong field count");
    }
    auto num = [&](const char* key) {
      const auto v = csv::parse_double(f[col.at(key)]);
      if (!v) {
        throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                    ": column '" + key + "' is not numeric");
      }
      return *v;
    };
    JobRecord r;
    r.id = static_cast<JobId>(num("id"));
    r.queue_id = static_cast<std::uint32_t>(num("queue_id"));
    r.arrival = num("arrival");
    r.completion = num("completion");
    r.size = num("size");
    r.prediction = num("prediction");
    r.response = r.completion - r.arrival;
    records.push_back(r);
  }
  return records;
}

void write_slowdown_cdf_csv(std::ostream& out,
                            std::span<const JobRecord> records,
                            std::span<const double> grid) {
  out << "grid_point,cdf_value\n";
  for (const auto& p : slowdown_cdf(records, grid)) {
    out << csv::format_double(p.x) << ',' << csv::format_double(p.cdf) << '\n';
  }
}

void write_conditional_slowdown_csv(std::ostream& out,
                                    std::span<const JobRecord> records,
                                    std::size_t bins) {
  out << "bin_mean_size,bin_mean_slowdown,count\n";
  for (const auto& b : mean_conditional_slowdown(records, bins)) {
    out << csv::format_double(b.mean_size) << ','
        << csv::format_double(b.mean_slowdown) << ',' << b.count << '\n';
  }
}

void write_period_weights_csv(std::ostream& out,
                              std::span<const double> weights) {
  out << "period_index,weight\n";
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out << i << ',' << csv::format_double(weights[i]) << '\n';
  }
}

void write_heatmap_csv(std::ostream& out, const Heatmap& map) {
  out << "size_bin_lo,size_bin_hi,prediction_bin_lo,prediction_bin_hi,count\n";
  const double width =
      (map.log_hi - map.log_lo) / static_cast<double>(map.bins);
  auto edge = [&](std::size_t i) {
    return std::pow(10.0, map.log_lo + width * static_cast<double>(i));
  };
  for (std::size_t i = 0; i < map.bins; ++i) {
    for (std::size_t j = 0; j < map.bins; ++j) {
      out << csv::format_double(edge(i)) << ',' << csv::format_double(edge(i + 1))
          << ',' << csv::format_double(edge(j)) << ','
          << csv::format_double(edge(j + 1)) << ',' << map.counts[i][j] << '\n';
    }
  }
  out << "underflow,,,," << map.underflow << '\n';
}

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const ExperimentOptions& options) {
  std::size_t total_runs = 0;
  for (const auto& c : spec.configs) total_runs += c.replications;
  if (options.log) {
    *options.log << spec.configs.size() << " configurations, " << total_runs
                 << " runs" << (options.dry_run ? " (dry run)" : "") << '\n';
    if (options.dry_run) {
      for (std::size_t i = 0; i < spec.configs.size(); ++i) {
        const auto& c = spec.configs[i];
        *options.log << "  [" << i << "] "
                     << describe(c, i < spec.trace_names.size()
                                        ? spec.trace_names[i]
                                        : std::string())
                     << " reps=" << c.replications << '\n';
      }
    }
  }
  ExperimentResult result;
  result.outcomes.resize(spec.configs.size());
  if (options.dry_run) return result;

  const bool keep = spec.dump_records || spec.write_metrics;
  struct Task {
    std::size_t config;
    std::uint32_t rep;
  };
  std::vector<Task> tasks;
  tasks.reserve(total_runs);
  std::vector<std::vector<RunResult>> runs(spec.configs.size());
  std::vector<std::vector<std::exception_ptr>> errors(spec.configs.size());
  std::vector<std::vector<double>> seconds(spec.configs.size());
  for (std::size_t c = 0; c < spec.configs.size(); ++c) {
    const auto reps = spec.configs[c].replications;
    runs[c].resize(reps);
    errors[c].resize(reps);
    seconds[c].resize(reps);
    for (std::uint32_t r = 0; r < reps; ++r) tasks.push_back({c, r});
  }

  RunOptions run_options;
  run_options.keep_records = keep;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) {
      const auto [c, r] = tasks[t];
      const auto start = std::chrono::steady_clock::now();
      try {
        runs[c][r] = simulate(spec.configs[c],
                              replication_seed(spec.configs[c].seed, r),
                              run_options);
      } catch (...) {
        errors[c][r] = std::current_exception();
      }
      seconds[c][r] = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    }
  };
  unsigned threads = options.jobs ? options.jobs
                                  : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(tasks.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t c = 0; c < spec.configs.size(); ++c) {
    auto& outcome = result.outcomes[c];
    for (double s : seconds[c]) outcome.wall_seconds += s;
    for (std::uint32_t r = 0; r < errors[c].size(); ++r) {
      if (!errors[c][r]) continue;
      try {
        std::rethrow_exception(errors[c][r]);
      } catch (const std::exception& e) {
        outcome.error = "replication " + std::to_string(r) + ": " + e.what();
      }
      break;
    }
    if (outcome.error.empty()) {
      std::vector<std::uint64_t> seeds;
      for (std::uint32_t r = 0; r < spec.configs[c].replications; ++r) {
        seeds.push_back(replication_seed(spec.configs[c].seed, r));
      }
      outcome.summary = summarize(std::move(runs[c]), std::move(seeds), keep);
    }
    if (options.log) {
      *options.log << "[" << c << "] "
                   << describe(spec.configs[c], c < spec.trace_names.size()
                                                    ? spec.trace_names[c]
                                                    : std::string())
                   << ": "
                   << (outcome.summary
                           ? "mean response " +
                                 csv::format_double(outcome.summary->mean_response)
                           : outcome.error)
                   << '\n';
    }
  }

  std::filesystem::create_directories(spec.output_dir);
  {
    auto out = open_output(spec.output_dir / "results.csv");
    write_results_csv(out, spec, result.outcomes);
  }
  for (std::size_t c = 0; c < spec.configs.size(); ++c) {
    const auto& outcome = result.outcomes[c];
    if (!outcome.summary) continue;
    const std::string stem = "config_" + std::to_string(c);
    if (spec.dump_records) {
      std::filesystem::create_directories(spec.output_dir / "records");
      auto out = open_output(spec.output_dir / "records" / (stem + ".csv"));
      write_records_csv(out, outcome.summary->records);
    }
    if (spec.write_metrics) {
      std::vector<JobRecord> pooled;
      for (const auto& rep : outcome.summary->records) {
        pooled.insert(pooled.end(), rep.begin(), rep.end());
      }
      const auto dir = spec.output_dir / "metrics";
      std::filesystem::create_directories(dir);
      if (!pooled.empty()) {
        const auto grid = log_grid(1.0, 1e4, 161);
        auto cdf = open_output(dir / (stem + "_slowdown_cdf.csv"));
        write_slowdown_cdf_csv(cdf, pooled, grid);
      }
      if (pooled.size() >= 50) {
        auto mcs = open_output(dir / (stem + "_conditional_slowdown.csv"));
        write_conditional_slowdown_csv(mcs, pooled);
      }
    }
  }

  json manifest;
  manifest["version"] = kVersion;
  manifest["results"] = "results.csv";
  manifest["threads"] = threads;
  json configs = json::array();
  for (std::size_t c = 0; c < spec.configs.size(); ++c) {
    const auto& config = spec.configs[c];
    json entry;
    entry["index"] = c;
    entry["seed"] = config.seed;
    entry["replications"] = config.replications;
    entry["wall_seconds"] = result.outcomes[c].wall_seconds;
    entry["status"] = result.outcomes[c].error.empty()
                          ? "ok"
                          : "error: " + result.outcomes[c].error;
    if (c < spec.trace_names.size() && !spec.trace_names[c].empty()) {
      entry["trace"] = spec.trace_names[c];
    }
    configs.push_back(entry);
  }
  manifest["configs"] = configs;
  auto out = open_output(spec.output_dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  return result;
}

}  // namespace supermarket
