#include "supermarket/distributions.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace supermarket {
namespace {

// Every supported distribution has S(x) = 1 - exp(-z(x)) for a monotone
// map z; only the map differs.
double to_exponent(DistKind kind, double x) {
  switch (kind) {
    case DistKind::kExponential:
      return x;
    case DistKind::kWeibullHalf:
      return std::sqrt(2.0 * x);
    case DistKind::kWeibullThird:
      return std::cbrt(6.0 * x);
  }
  return x;
}

double from_exponent(DistKind kind, double z) {
  switch (kind) {
    case DistKind::kExponential:
      return z;
    case DistKind::kWeibullHalf:
      return 0.5 * z * z;
    case DistKind::kWeibullThird:
      return z * z * z / 6.0;
  }
  return z;
}

}  // namespace

double ServiceDist::cdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  return -std::expm1(-to_exponent(kind_, x));
}

double ServiceDist::survival(double x) const {
  if (!(x > 0.0)) return 1.0;
  return std::exp(-to_exponent(kind_, x));
}

double ServiceDist::inverse_cdf(double u) const {
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::domain_error("inverse_cdf: probability " + std::to_string(u) +
                            " outside [0, 1)");
  }
  return from_exponent(kind_, -std::log1p(-u));
}

double ServiceDist::inverse_survival(double s) const {
  if (!(s > 0.0 && s <= 1.0)) {
    throw std::domain_error("inverse_survival: probability " +
                            std::to_string(s) + " outside (0, 1]");
  }
  return from_exponent(kind_, -std::log(s));
}

double ServiceDist::sample(Rng& rng) const {
  return inverse_cdf(rng.uniform_open());
}

double ServiceDist::variance() const {
  switch (kind_) {
    case DistKind::kExponential:
      return 1.0;
    case DistKind::kWeibullHalf:
      return 5.0;  // E[X^2] = (1/2)^2 * 4! = 6
    case DistKind::kWeibullThird:
      return 19.0;  // E[X^2] = (1/6)^2 * 6! = 20
  }
  return 1.0;
}

std::string_view to_string(DistKind kind) {
  switch (kind) {
    case DistKind::kExponential:
      return "exponential";
    case DistKind::kWeibullHalf:
      return "weibull-half";
    case DistKind::kWeibullThird:
      return "weibull-third";
  }
  return "?";
}

DistKind parse_dist_kind(std::string_view tag) {
  for (auto kind : {DistKind::kExponential, DistKind::kWeibullHalf,
                    DistKind::kWeibullThird}) {
    if (tag == to_string(kind)) return kind;
  }
  throw std::invalid_argument(
      "unknown service distribution '" + std::string(tag) +
      "' (valid: exponential, weibull-half, weibull-third)");
}

}  // namespace supermarket
