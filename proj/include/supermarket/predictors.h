// Predicted service times: together with the service distribution, a
// Predictor defines the joint law of (size, prediction).

#ifndef SUPERMARKET_PREDICTORS_H_
#define SUPERMARKET_PREDICTORS_H_

#include <string>
#include <string_view>

#include "supermarket/distributions.h"
#include "supermarket/rng.h"

namespace supermarket {

enum class PredictorKind {
  kExact,        // y = x
  kExponential,  // y ~ Exp(mean x)
  kAlpha,        // y ~ U[(1-a)x, (1+a)x]
  kAlphaBeta,    // reversal of x w.p. beta, otherwise as kAlpha
  kTraceGiven,   // y supplied by the arrival source (trace replay)
};

struct Predictor {
  PredictorKind kind = PredictorKind::kExact;
  double alpha = 0.0;
  double beta = 0.0;
  // Distribution whose quantiles define the reversal (kAlphaBeta only).
  ServiceDist dist;

  static Predictor exact() { return {}; }
  static Predictor exponential() {
    return {.kind = PredictorKind::kExponential};
  }
  static Predictor alpha_pred(double alpha) {
    return {.kind = PredictorKind::kAlpha, .alpha = alpha};
  }
  static Predictor alpha_beta(double alpha, double beta, ServiceDist dist) {
    return {PredictorKind::kAlphaBeta, alpha, beta, dist};
  }
  static Predictor trace_given() {
    return {.kind = PredictorKind::kTraceGiven};
  }

  // Throws std::invalid_argument if alpha or beta is outside [0, 1].
  void validate() const;

  friend bool operator==(const Predictor&, const Predictor&) = default;
};

// S^{-1}(1 - S(x)): the value at the complementary quantile of x.
// Throws std::overflow_error when S(x) rounds to 0 or 1.
double reversal(const ServiceDist& dist, double x);

// Draws a prediction for a job of true size x > 0. `given` is the
// externally supplied prediction used by kTraceGiven and ignored otherwise.
// Only kExponential, kAlpha and kAlphaBeta consume randomness.
double predict(const Predictor& p, double x, Rng& rng, double given = 0.0);

std::string_view to_string(PredictorKind kind);
PredictorKind parse_predictor_kind(std::string_view tag);

}  // namespace supermarket

#endif  // SUPERMARKET_PREDICTORS_H_
