#include "supermarket/analytics.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace supermarket {
namespace {

void check_domain(double lambda, int d) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::domain_error("arrival rate must lie in (0, 1), got " +
                            std::to_string(lambda));
  }
  if (d < 1) throw std::domain_error("d must be at least 1");
}

// (d^i - 1)/(d - 1) = 1 + d + ... + d^{i-1}, accumulated in floating point
// so large i saturates to infinity instead of overflowing an integer.
double tail_exponent(int d, int i) {
  double exponent = 0.0;
  double power = 1.0;
  for (int k = 0; k < i; ++k) {
    exponent += power;
    power *= d;
  }
  return exponent;
}

}  // namespace

double supermarket_tail(double lambda, int d, int i) {
  check_domain(lambda, d);
  if (i < 0) throw std::domain_error("level must be nonnegative");
  return std::pow(lambda, tail_exponent(d, i));
}

std::vector<double> supermarket_tail_curve(double lambda, int d,
                                           int max_level) {
  std::vector<double> curve;
  for (int i = 0; i <= max_level; ++i) {
    curve.push_back(supermarket_tail(lambda, d, i));
  }
  return curve;
}

double supermarket_mean_response(double lambda, int d) {
  check_domain(lambda, d);
  double sum = 0.0;
  for (int i = 1;; ++i) {
    const double term = supermarket_tail(lambda, d, i);
    sum += term;
    if (term < 1e-15) break;
  }
  return sum / lambda;
}

}  // namespace supermarket
