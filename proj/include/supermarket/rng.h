// Deterministic random streams.
//
// All sampling in the simulator goes through Rng, which exposes only
// operations defined on the raw 64-bit output of std::mt19937_64. The
// standard fixes that engine's output sequence, so a given seed yields the
// same variates on every platform (std::*_distribution makes no such
// promise).

#ifndef SUPERMARKET_RNG_H_
#define SUPERMARKET_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>

namespace supermarket {

// splitmix64 finalizer; used for seed derivation only.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based split: seed for replication `index` of a master seed.
// Independent of the order in which replications are executed.
constexpr std::uint64_t replication_seed(std::uint64_t master,
                                         std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x5851F42D4C957F2DULL));
}

// Sub-streams of one run. Keeping them separate means policies that differ
// only in how they consume routing or tie randomness still see identical
// arrivals, sizes and predictions.
enum class Stream : std::uint64_t {
  kArrivals = 1,
  kSizes = 2,
  kPredictions = 3,
  kRouting = 4,
  kTies = 5,
};

constexpr std::uint64_t stream_seed(std::uint64_t run_seed, Stream stream) {
  return mix64(run_seed ^ mix64(static_cast<std::uint64_t>(stream)));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1): 53 random bits centred in their
  // cell, so neither endpoint is reachable.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    auto r = static_cast<std::uint64_t>(uniform_open() *
                                        static_cast<double>(bound));
    return r < bound ? r : bound - 1;
  }

  // Exponential variate with the given mean, by inversion.
  double exponential(double mean) { return -mean * std::log(uniform_open()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace supermarket

#endif  // SUPERMARKET_RNG_H_
