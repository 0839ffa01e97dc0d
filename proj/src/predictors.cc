#include "supermarket/predictors.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace supermarket {

void Predictor::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("predictor alpha must lie in [0, 1], got " +
                                std::to_string(alpha));
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("predictor beta must lie in [0, 1], got " +
                                std::to_string(beta));
  }
}

double reversal(const ServiceDist& dist, double x) {
  const double lower = dist.cdf(x);
  const double upper = dist.survival(x);
  if (lower <= 0.0 || upper <= 0.0 || lower >= 1.0) {
    throw std::overflow_error("reversal: S(" + std::to_string(x) +
                              ") is numerically 0 or 1 for " +
                              std::string(to_string(dist.kind())));
  }
  // Invert whichever tail is small; it is the one known to full precision.
  if (lower <= 0.5) return dist.inverse_survival(lower);
  return dist.inverse_cdf(upper);
}

namespace {

double alpha_uniform(double alpha, double x, Rng& rng) {
  return x * (1.0 - alpha + 2.0 * alpha * rng.uniform_open());
}

}  // namespace

double predict(const Predictor& p, double x, Rng& rng, double given) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("predict: size must be positive, got " +
                                std::to_string(x));
  }
  switch (p.kind) {
    case PredictorKind::kExact:
      return x;
    case PredictorKind::kExponential:
      return rng.exponential(x);
    case PredictorKind::kAlpha:
      return alpha_uniform(p.alpha, x, rng);
    case PredictorKind::kAlphaBeta:
      // The reversal replaces the prediction outright; no noise on top.
      if (rng.uniform_open() < p.beta) return reversal(p.dist, x);
      return alpha_uniform(p.alpha, x, rng);
    case PredictorKind::kTraceGiven:
      return given;
  }
  return x;
}

std::string_view to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::kExact:
      return "exact";
    case PredictorKind::kExponential:
      return "exponential";
    case PredictorKind::kAlpha:
      return "alpha";
    case PredictorKind::kAlphaBeta:
      return "alpha-beta";
    case PredictorKind::kTraceGiven:
      return "trace";
  }
  return "?";
}

PredictorKind parse_predictor_kind(std::string_view tag) {
  for (auto kind : {PredictorKind::kExact, PredictorKind::kExponential,
                    PredictorKind::kAlpha, PredictorKind::kAlphaBeta,
                    PredictorKind::kTraceGiven}) {
    if (tag == to_string(kind)) return kind;
  }
  throw std::invalid_argument(
      "unknown predictor '" + std::string(tag) +
      "' (valid: exact, exponential, alpha, alpha-beta, trace)");
}

}  // namespace supermarket
