#include "supermarket/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace supermarket {

double mean_response(std::span<const JobRecord> records) {
  if (records.empty()) {
    throw std::invalid_argument("mean_response: no records");
  }
  double sum = 0.0;
  for (const auto& r : records) sum += r.completion - r.arrival;
  return sum / static_cast<double>(records.size());
}

std::vector<double> slowdowns(std::span<const JobRecord> records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!(r.size > 0.0)) {
      throw std::invalid_argument("slowdown undefined for job " +
                                  std::to_string(r.id) + " with size " +
                                  std::to_string(r.size));
    }
    out.push_back(r.response / r.size);
  }
  return out;
}

std::vector<CdfPoint> slowdown_cdf(std::span<const JobRecord> records,
                                   std::span<const double> grid) {
  auto values = slowdowns(records);
  std::sort(values.begin(), values.end());
  std::vector<CdfPoint> points;
  points.reserve(grid.size());
  const auto n = static_cast<double>(values.size());
  for (double x : grid) {
    const auto below = std::upper_bound(values.begin(), values.end(), x);
    const double frac =
        values.empty() ? 0.0
                       : static_cast<double>(below - values.begin()) / n;
    points.push_back({x, frac});
  }
  return points;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) {
    throw std::invalid_argument("log_grid needs 0 < lo < hi and >= 2 points");
  }
  std::vector<double> grid(points);
  const double a = std::log10(lo);
  const double step = (std::log10(hi) - a) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = std::pow(10.0, a + step * static_cast<double>(i));
  }
  grid.back() = hi;
  return grid;
}

std::vector<SlowdownBin> mean_conditional_slowdown(
    std::span<const JobRecord> records, std::size_t bins) {
  if (bins == 0 || records.size() < bins) {
    throw std::invalid_argument(
        "mean_conditional_slowdown: need at least " + std::to_string(bins) +
        " records, got " + std::to_string(records.size()));
  }
  std::vector<JobRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const JobRecord& a, const JobRecord& b) {
                     return a.size < b.size;
                   });
  const auto sd = slowdowns(sorted);
  const std::size_t base = sorted.size() / bins;
  const std::size_t extra = sorted.size() % bins;

  std::vector<SlowdownBin> out(bins);
  std::size_t begin = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t count = base + (b < extra ? 1 : 0);
    double size_sum = 0.0;
    double slowdown_sum = 0.0;
    for (std::size_t k = begin; k < begin + count; ++k) {
      size_sum += sorted[k].size;
      slowdown_sum += sd[k];
    }
    out[b] = {size_sum / static_cast<double>(count),
              slowdown_sum / static_cast<double>(count), count};
    begin += count;
  }
  return out;
}

std::vector<double> per_period_weights(std::span<const TraceJob> jobs,
                                       std::size_t periods) {
  if (jobs.empty()) throw std::invalid_argument("per_period_weights: no jobs");
  if (periods == 0) throw std::invalid_argument("per_period_weights: 0 periods");
  const auto [lo_it, hi_it] = std::minmax_element(
      jobs.begin(), jobs.end(), [](const TraceJob& a, const TraceJob& b) {
        return a.submission < b.submission;
      });
  const double lo = lo_it->submission;
  const double span = hi_it->submission - lo;
  if (!(span > 0.0)) {
    throw std::invalid_argument("per_period_weights: trace spans zero time");
  }
  std::vector<double> weights(periods, 0.0);
  double total = 0.0;
  for (const auto& job : jobs) {
    auto idx = static_cast<std::size_t>((job.submission - lo) / span *
                                        static_cast<double>(periods));
    idx = std::min(idx, periods - 1);
    weights[idx] += job.size;
    total += job.size;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("per_period_weights: total size is zero");
  }
  const double per_period = total / static_cast<double>(periods);
  for (auto& w : weights) w /= per_period;
  return weights;
}

std::uint64_t Heatmap::total() const {
  std::uint64_t sum = underflow;
  for (const auto& row : counts) {
    for (auto c : row) sum += c;
  }
  return sum;
}

Heatmap size_prediction_heatmap(std::span<const TraceJob> jobs,
                                std::size_t bins, double log_lo,
                                double log_hi) {
  if (bins == 0) throw std::invalid_argument("heatmap needs at least 1 bin");
  Heatmap map;
  map.bins = bins;
  map.counts.assign(bins, std::vector<std::uint64_t>(bins, 0));

  if (log_lo == log_hi) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& job : jobs) {
      if (job.size > 0.0 && job.prediction > 0.0) {
        lo = std::min({lo, job.size, job.prediction});
        hi = std::max({hi, job.size, job.prediction});
      }
    }
    if (std::isfinite(lo)) {
      log_lo = std::floor(std::log10(lo));
      log_hi = std::ceil(std::log10(hi));
    }
    if (!(log_hi > log_lo)) log_hi = log_lo + 1.0;
  }
  map.log_lo = log_lo;
  map.log_hi = log_hi;

  const double scale = static_cast<double>(bins) / (log_hi - log_lo);
  auto index = [&](double v) {
    const double pos = (std::log10(v) - log_lo) * scale;
    if (pos <= 0.0) return std::size_t{0};
    return std::min(static_cast<std::size_t>(pos), bins - 1);
  };
  for (const auto& job : jobs) {
    if (!(job.size > 0.0 && job.prediction > 0.0)) {
      ++map.underflow;
      continue;
    }
    ++map.counts[index(job.size)][index(job.prediction)];
  }
  return map;
}

}  // namespace supermarket
