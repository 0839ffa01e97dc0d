// Workload traces: loading, normalization, arrival scaling and replay.
//
// Canonical trace files are CSV with a header naming at least the columns
// submission, size and prediction (seconds). An optional `failed` column
// marks jobs that did not complete successfully (1/true/yes); such rows are
// dropped, as are rows with a nonpositive size or prediction.

#ifndef SUPERMARKET_TRACE_H_
#define SUPERMARKET_TRACE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "supermarket/job.h"
#include "supermarket/replication.h"
#include "supermarket/simulator.h"

namespace supermarket {

struct TraceMeta {
  std::string name;
  std::uint64_t job_count = 0;
  std::uint64_t dropped = 0;
  double normalization_factor = 1.0;
  double span = 0.0;
};

struct LoadedTrace {
  std::vector<TraceJob> jobs;  // sorted by submission
  TraceMeta meta;
};

class TraceError : public std::runtime_error {
 public:
  TraceError(const std::string& source, std::size_t line,
             const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

LoadedTrace load_trace(const std::filesystem::path& path);
LoadedTrace load_trace(std::istream& in, const std::string& name);

void write_trace(std::ostream& out, std::span<const TraceJob> jobs);

// Divides sizes and predictions by the mean size; returns that factor.
double normalize_sizes(std::vector<TraceJob>& jobs);

// Affine rescale of submission times: the first arrival moves to 0 and the
// average gap becomes 1 / (queues * lambda). Needs at least two jobs and a
// nonzero span.
void scale_arrivals(std::vector<TraceJob>& jobs, double lambda,
                    std::uint32_t queues = 100);

// Sorts by submission (stable), normalizes sizes and scales arrivals.
void prepare_trace(std::vector<TraceJob>& jobs, double lambda,
                   std::uint32_t queues);

// Copy of `config` that replays `jobs` (sorted by submission) instead of
// Poisson arrivals, measuring every completion.
SimConfig with_trace(SimConfig config, std::span<const TraceJob> jobs);

// Replays prepared jobs through the simulator: arrivals at the submission
// times, d-choice and scheduling from `config`, every completion measured.
// The trace supplies predictions when config.predictor is kTraceGiven.
ReplicationSummary replay(std::span<const TraceJob> jobs, SimConfig config,
                          const ReplicationOptions& options = {});

// Column mapping for converting a published trace schema to the canonical
// form.
struct ConvertOptions {
  std::string submission_column = "submit_time";
  // Either a size column, or start and end columns whose difference is the
  // size.
  std::string size_column;
  std::string start_column;
  std::string end_column;
  std::string prediction_column;
  // Rows whose status column differs from success_value are dropped. Empty
  // status_column keeps every row.
  std::string status_column;
  std::string success_value;
  // Rows sharing a job id are summed (sizes and predictions) into one job
  // submitted at the earliest task submission. Empty keeps rows as jobs.
  std::string job_column;
  char delimiter = ',';
  // Multiplies every time value (e.g. 1e-6 for microsecond traces).
  double time_scale = 1.0;
};

struct ConvertStats {
  std::uint64_t rows = 0;
  std::uint64_t dropped = 0;
  std::uint64_t jobs = 0;
};

ConvertStats convert_trace(std::istream& in, std::ostream& out,
                           const ConvertOptions& options,
                           const std::string& name = "input");

}  // namespace supermarket

#endif  // SUPERMARKET_TRACE_H_
