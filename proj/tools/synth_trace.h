// Synthetic heavy-tailed trace in the canonical CSV schema.
//
// Shapes a cluster-scheduler log would have: a daily arrival cycle with
// bursts of near-simultaneous submissions, Weibull(1/2) runtimes, noisy user
// estimates rounded up to whole minutes, a cluster of long jobs whose
// estimates are stuck at a one-hour default, a few failed jobs and a few
// zero-length rows.

#ifndef SUPERMARKET_TOOLS_SYNTH_TRACE_H_
#define SUPERMARKET_TOOLS_SYNTH_TRACE_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>

#include "supermarket/csv.h"
#include "supermarket/distributions.h"
#include "supermarket/rng.h"

namespace supermarket {

struct SynthTraceOptions {
  std::uint64_t count = 20000;
  std::uint64_t seed = 2024;
};

inline double standard_normal(Rng& rng) {
  const double u = rng.uniform_open();
  const double v = rng.uniform_open();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

inline void write_synth_trace(std::ostream& out,
                              const SynthTraceOptions& options) {
  constexpr double kMeanSize = 1800.0;  // seconds
  constexpr double kDay = 86400.0;
  constexpr double kMeanGap = 30.0;

  Rng rng(mix64(options.seed));
  const ServiceDist weibull(DistKind::kWeibullHalf);
  out << "submission,size,prediction,failed\n";

  double t = 0.0;
  std::uint64_t burst_left = 0;
  for (std::uint64_t i = 0; i < options.count; ++i) {
    if (burst_left > 0) {
      --burst_left;
      t += rng.exponential(0.5);
    } else {
      // Daytime rate is three times the night rate.
      const double phase = std::sin(2.0 * std::numbers::pi * t / kDay);
      t += rng.exponential(kMeanGap / (1.0 + 0.5 * phase));
      if (rng.uniform_open() < 0.01) burst_left = 20 + rng.below(60);
    }

    double size;
    double prediction;
    if (rng.uniform_open() < 0.04) {
      // Long jobs submitted with the default one-hour estimate.
      size = 20000.0 + 30000.0 * rng.uniform_open();
      prediction = 3600.0;
    } else {
      size = kMeanSize * weibull.sample(rng);
      const double noisy = size * std::exp(0.8 * standard_normal(rng));
      prediction = 60.0 * std::ceil(noisy / 60.0);
    }
    size = std::round(size * 100.0) / 100.0;
    if (size <= 0.0) size = 0.01;

    const double roll = rng.uniform_open();
    const bool failed = roll < 0.02;
    if (roll >= 0.02 && roll < 0.025) size = 0.0;

    out << csv::format_double(std::round(t * 100.0) / 100.0) << ','
        << csv::format_double(size) << ',' << csv::format_double(prediction)
        << ',' << (failed ? 1 : 0) << '\n';
  }
}

}  // namespace supermarket

#endif  // SUPERMARKET_TOOLS_SYNTH_TRACE_H_
