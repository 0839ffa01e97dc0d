// Service-time distributions, all normalized to mean 1.

#ifndef SUPERMARKET_DISTRIBUTIONS_H_
#define SUPERMARKET_DISTRIBUTIONS_H_

#include <string>
#include <string_view>

#include "supermarket/rng.h"

namespace supermarket {

enum class DistKind {
  kExponential,   // 1 - e^{-x}
  kWeibullHalf,   // 1 - e^{-sqrt(2x)}   (shape 1/2, scale 1/2)
  kWeibullThird,  // 1 - e^{-cbrt(6x)}   (shape 1/3, scale 1/6)
};

class ServiceDist {
 public:
  constexpr ServiceDist() = default;
  constexpr explicit ServiceDist(DistKind kind) : kind_(kind) {}

  DistKind kind() const { return kind_; }

  // S(x). Zero for x <= 0.
  double cdf(double x) const;
  // 1 - S(x), computed without cancellation for large x.
  double survival(double x) const;

  // S^{-1}(u) for u in [0, 1). Throws std::domain_error otherwise.
  double inverse_cdf(double u) const;
  // Inverse of survival(): the x with 1 - S(x) = s, for s in (0, 1].
  double inverse_survival(double s) const;

  // Inversion sampling: inverse_cdf of an open-interval uniform.
  double sample(Rng& rng) const;

  double mean() const { return 1.0; }
  double variance() const;

  friend bool operator==(const ServiceDist&, const ServiceDist&) = default;

 private:
  DistKind kind_ = DistKind::kExponential;
};

std::string_view to_string(DistKind kind);
// Accepts "exponential", "weibull-half", "weibull-third". Throws
// std::invalid_argument listing the valid tags.
DistKind parse_dist_kind(std::string_view tag);

}  // namespace supermarket

#endif  // SUPERMARKET_DISTRIBUTIONS_H_
