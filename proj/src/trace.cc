#include "supermarket/trace.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <ostream>

#include "supermarket/csv.h"

namespace supermarket {
namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool truthy(const std::string& field) {
  const auto v = lower(trim(field));
  return v == "1" || v == "true" || v == "yes" || v == "y";
}

std::size_t column_index(const std::vector<std::string>& header,
                         const std::string& name, const std::string& source) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw TraceError(source, 1, "missing column '" + name + "'");
}

void sort_by_submission(std::vector<TraceJob>& jobs) {
  std::stable_sort(jobs.begin(), jobs.end(),
                   [](const TraceJob& a, const TraceJob& b) {
                     return a.submission < b.submission;
                   });
}

}  // namespace

LoadedTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trace file " + path.string());
  }
  auto trace = load_trace(in, path.string());
  trace.meta.name = path.stem().string();
  return trace;
}

LoadedTrace load_trace(std::istream& in, const std::string& name) {
  LoadedTrace trace;
  trace.meta.name = name;
  std::string line;
  if (!std::getline(in, line)) throw TraceError(name, 1, "empty file");
  const auto header = csv::split(line);
  const auto sub_col = column_index(header, "submission", name);
  const auto size_col = column_index(header, "size", name);
  const auto pred_col = column_index(header, "prediction", name);
  std::optional<std::size_t> failed_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == "failed") failed_col = i;
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split(line);
    if (fields.size() != header.size()) {
      throw TraceError(name, line_no,
                       "expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(fields.size()));
    }
    TraceJob job;
    const auto sub = csv::parse_double(fields[sub_col]);
    const auto size = csv::parse_double(fields[size_col]);
    const auto pred = csv::parse_double(fields[pred_col]);
    if (!sub || !size || !pred || !std::isfinite(*sub) ||
        !std::isfinite(*size) || !std::isfinite(*pred)) {
      throw TraceError(name, line_no, "non-numeric or non-finite value");
    }
    job.submission = *sub;
    job.size = *size;
    job.prediction = *pred;
    const bool failed = failed_col && truthy(fields[*failed_col]);
    if (failed || !(job.size > 0.0) || !(job.prediction > 0.0)) {
      ++trace.meta.dropped;
      continue;
    }
    trace.jobs.push_back(job);
  }
  if (trace.jobs.empty()) {
    throw TraceError(name, line_no, "no usable jobs after filtering");
  }
  sort_by_submission(trace.jobs);
  trace.meta.job_count = trace.jobs.size();
  trace.meta.span = trace.jobs.back().submission - trace.jobs.front().submission;
  return trace;
}

void write_trace(std::ostream& out, std::span<const TraceJob> jobs) {
  out << "submission,size,prediction\n";
  for (const auto& job : jobs) {
    out << csv::format_double(job.submission) << ','
        << csv::format_double(job.size) << ','
        << csv::format_double(job.prediction) << '\n';
  }
}

double normalize_sizes(std::vector<TraceJob>& jobs) {
  if (jobs.empty()) throw std::invalid_argument("normalize_sizes: no jobs");
  double sum = 0.0;
  for (const auto& job : jobs) sum += job.size;
  const double factor = sum / static_cast<double>(jobs.size());
  if (!(factor > 0.0)) {
    throw std::invalid_argument("normalize_sizes: mean size is not positive");
  }
  for (auto& job : jobs) {
    job.size /= factor;
    job.prediction /= factor;
  }
  return factor;
}

void scale_arrivals(std::vector<TraceJob>& jobs, double lambda,
                    std::uint32_t queues) {
  if (jobs.size() < 2) {
    throw std::invalid_argument("scale_arrivals: need at least two jobs");
  }
  if (!(lambda > 0.0) || queues == 0) {
    throw std::invalid_argument("scale_arrivals: need lambda > 0, queues > 0");
  }
  const auto [lo_it, hi_it] = std::minmax_element(
      jobs.begin(), jobs.end(), [](const TraceJob& a, const TraceJob& b) {
        return a.submission < b.submission;
      });
  const double lo = lo_it->submission;
  const double span = hi_it->submission - lo;
  if (!(span > 0.0)) {
    throw std::invalid_argument("scale_arrivals: trace spans zero time");
  }
  const double target_gap = 1.0 / (static_cast<double>(queues) * lambda);
  const double gap = span / static_cast<double>(jobs.size() - 1);
  const double factor = target_gap / gap;
  for (auto& job : jobs) job.submission = (job.submission - lo) * factor;
}

void prepare_trace(std::vector<TraceJob>& jobs, double lambda,
                   std::uint32_t queues) {
  sort_by_submission(jobs);
  normalize_sizes(jobs);
  scale_arrivals(jobs, lambda, queues);
}

SimConfig with_trace(SimConfig config, std::span<const TraceJob> jobs) {
  auto sorted = std::make_shared<std::vector<TraceJob>>(jobs.begin(),
                                                         jobs.end());
  sort_by_submission(*sorted);
  config.trace = std::move(sorted);
  config.horizon = std::numeric_limits<double>::infinity();
  config.warmup = 0.0;
  return config;
}

ReplicationSummary replay(std::span<const TraceJob> jobs, SimConfig config,
                          const ReplicationOptions& options) {
  return run_replications(with_trace(std::move(config), jobs), options);
}

ConvertStats convert_trace(std::istream& in, std::ostream& out,
                           const ConvertOptions& options,
                           const std::string& name) {
  const char delim = options.delimiter;
  std::string line;
  if (!std::getline(in, line)) throw TraceError(name, 1, "empty file");
  const auto header = csv::split(line, delim);

  const auto sub_col = column_index(header, options.submission_column, name);
  const auto pred_col = column_index(header, options.prediction_column, name);
  std::optional<std::size_t> size_col, start_col, end_col, status_col, job_col;
  if (!options.size_column.empty()) {
    size_col = column_index(header, options.size_column, name);
  } else if (!options.start_column.empty() && !options.end_column.empty()) {
    start_col = column_index(header, options.start_column, name);
    end_col = column_index(header, options.end_column, name);
  } else {
    throw std::invalid_argument(
        "convert: give a size column or both start and end columns");
  }
  if (!options.status_column.empty()) {
    status_col = column_index(header, options.status_column, name);
  }
  if (!options.job_column.empty()) {
    job_col = column_index(header, options.job_column, name);
  }

  ConvertStats stats;
  std::vector<TraceJob> jobs;
  // Job id -> position in `jobs`, for summing tasks.
  std::map<std::string, std::size_t> by_id;
  std::size_t line_no = 1;
  auto number = [&](const std::vector<std::string>& fields, std::size_t col) {
    const auto v = csv::parse_double(fields[col]);
    if (!v) {
      throw TraceError(name, line_no,
                       "column '" + trim(header[col]) + "' is not numeric");
    }
    return *v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    ++stats.rows;
    const auto fields = csv::split(line, delim);
    if (fields.size() != header.size()) {
      throw TraceError(name, line_no,
                       "expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(fields.size()));
    }
    if (status_col && trim(fields[*status_col]) != options.success_value) {
      ++stats.dropped;
      continue;
    }
    TraceJob task;
    task.submission = number(fields, sub_col) * options.time_scale;
    task.size = size_col ? number(fields, *size_col)
                         : number(fields, *end_col) - number(fields, *start_col);
    task.size *= options.time_scale;
    task.prediction = number(fields, pred_col) * options.time_scale;
    if (job_col) {
      const auto id = trim(fields[*job_col]);
      auto [it, inserted] = by_id.try_emplace(id, jobs.size());
      if (!inserted) {
        TraceJob& job = jobs[it->second];
        job.submission = std::min(job.submission, task.submission);
        job.size += task.size;
        job.prediction += task.prediction;
        continue;
      }
    }
    jobs.push_back(task);
  }
  sort_by_submission(jobs);
  stats.jobs = jobs.size();
  write_trace(out, jobs);
  return stats;
}

}  // namespace supermarket
