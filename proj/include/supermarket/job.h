#ifndef SUPERMARKET_JOB_H_
#define SUPERMARKET_JOB_H_

#include <cstdint>

namespace supermarket {

using JobId = std::uint64_t;

// One unit of work. Ids are assigned in arrival order.
struct Job {
  JobId id = 0;
  double arrival = 0.0;
  double size = 0.0;        // true service requirement x
  double prediction = 0.0;  // predicted service requirement y
  double attained = 0.0;    // service received so far t

  double remaining() const { return size - attained; }
};

// Measurement for one completed job.
struct JobRecord {
  JobId id = 0;
  double arrival = 0.0;
  double completion = 0.0;
  double size = 0.0;
  double prediction = 0.0;
  double response = 0.0;  // completion - arrival
  std::uint32_t queue_id = 0;

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

// One row of a workload trace.
struct TraceJob {
  double submission = 0.0;
  double size = 0.0;
  double prediction = 0.0;

  friend bool operator==(const TraceJob&, const TraceJob&) = default;
};

}  // namespace supermarket

#endif  // SUPERMARKET_JOB_H_
