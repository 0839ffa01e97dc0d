// Response-time and fairness measurements over completed jobs.

#ifndef SUPERMARKET_METRICS_H_
#define SUPERMARKET_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "supermarket/job.h"

namespace supermarket {

// Arithmetic mean of response times. Throws std::invalid_argument when
// empty.
double mean_response(std::span<const JobRecord> records);

// response / size for each record, in input order. Throws
// std::invalid_argument on a nonpositive size.
std::vector<double> slowdowns(std::span<const JobRecord> records);

struct CdfPoint {
  double x = 0.0;
  double cdf = 0.0;
};

// Empirical CDF of slowdown evaluated at each grid point: the fraction of
// slowdowns <= x.
std::vector<CdfPoint> slowdown_cdf(std::span<const JobRecord> records,
                                   std::span<const double> grid);

// Log-spaced grid of `points` values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

struct SlowdownBin {
  double mean_size = 0.0;
  double mean_slowdown = 0.0;
  std::size_t count = 0;
};

// Sorts records by size and splits them into `bins` groups of equal count;
// the first (size mod bins) groups hold one extra record. Throws
// std::invalid_argument with fewer records than bins.
std::vector<SlowdownBin> mean_conditional_slowdown(
    std::span<const JobRecord> records, std::size_t bins = 50);

// Splits [first submission, last submission] into `periods` equal spans and
// sums job sizes per span (the last span is closed), scaled so the mean
// value is 1. Throws std::invalid_argument for an empty or zero-span trace.
std::vector<double> per_period_weights(std::span<const TraceJob> jobs,
                                       std::size_t periods = 100);

struct Heatmap {
  // Bin edges in log10 units; bins[i][j] counts size in row i and
  // prediction in column j.
  double log_lo = 0.0;
  double log_hi = 0.0;
  std::size_t bins = 0;
  std::vector<std::vector<std::uint64_t>> counts;
  // Pairs with a nonpositive size or prediction.
  std::uint64_t underflow = 0;

  std::uint64_t total() const;
};

// 2-D histogram of (size, prediction) over base-10 logarithmic bins. When
// log_lo == log_hi the range is taken from the data, widened to whole
// decades. Values outside the range are clamped into the edge bins.
Heatmap size_prediction_heatmap(std::span<const TraceJob> jobs,
                                std::size_t bins = 50, double log_lo = 0.0,
                                double log_hi = 0.0);

}  // namespace supermarket

#endif  // SUPERMARKET_METRICS_H_
