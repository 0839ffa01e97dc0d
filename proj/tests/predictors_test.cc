#include "supermarket/predictors.h"

#include <gtest/gtest.h>

#include <cmath>

namespace supermarket {
namespace {

const ServiceDist kExp(DistKind::kExponential);
const ServiceDist kHalf(DistKind::kWeibullHalf);
const ServiceDist kThird(DistKind::kWeibullThird);

// Independent oracle: solve S(r) = 1 - S(x) by bisection on the cdf.
double reversal_by_bisection(const ServiceDist& d, double x) {
  const double target = 1.0 - d.cdf(x);
  double lo = 0.0, hi = 1.0;
  while (d.cdf(hi) < target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (d.cdf(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(Predict, ExactIsIdentity) {
  Rng rng(1);
  EXPECT_EQ(predict(Predictor::exact(), 3.7, rng), 3.7);
}

TEST(Predict, ExactConsumesNoRandomness) {
  Rng a(1), b(1);
  predict(Predictor::exact(), 2.0, a);
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Predict, AlphaUniformRangeAndMean) {
  Rng rng(2);
  const auto p = Predictor::alpha_pred(0.5);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double y = predict(p, 2.0, rng);
    ASSERT_GE(y, 1.0);
    ASSERT_LE(y, 3.0);
    sum += y;
  }
  EXPECT_NEAR(sum / n, 2.0, 0.02);
}

TEST(Predict, ExponentialConditionalMean) {
  Rng rng(3);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += predict(Predictor::exponential(), 1.5, rng);
  EXPECT_NEAR(sum / n, 1.5, 0.03);
}

TEST(Predict, AlphaBetaMedianFixedPoint) {
  Rng rng(4);
  const auto p = Predictor::alpha_beta(0.5, 1.0, kExp);
  EXPECT_NEAR(predict(p, std::log(2.0), rng), std::log(2.0), 1e-12);
}

TEST(Predict, AlphaBetaReversalFrequency) {
  Rng rng(5);
  const auto p = Predictor::alpha_beta(0.0, 0.3, kExp);
  const double x = 2.0;
  int reversed = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double y = predict(p, x, rng);
    if (y != x) {
      ++reversed;
      ASSERT_NEAR(y, reversal(kExp, x), 1e-12);
    }
  }
  EXPECT_NEAR(double(reversed) / n, 0.3, 0.01);
}

TEST(Predict, TraceUsesGivenValue) {
  Rng rng(6);
  EXPECT_EQ(predict(Predictor::trace_given(), 2.0, rng, 5.5), 5.5);
}

TEST(Predict, RejectsNonpositiveSize) {
  Rng rng(7);
  EXPECT_THROW(predict(Predictor::exact(), 0.0, rng), std::invalid_argument);
  EXPECT_THROW(predict(Predictor::alpha_pred(0.2), -1.0, rng),
               std::invalid_argument);
}

TEST(Predictor, ValidateBounds) {
  EXPECT_THROW(Predictor::alpha_pred(1.5).validate(), std::invalid_argument);
  EXPECT_THROW(Predictor::alpha_beta(0.5, -0.1, kExp).validate(),
               std::invalid_argument);
  EXPECT_NO_THROW(Predictor::alpha_beta(1.0, 1.0, kExp).validate());
}

TEST(Reversal, Examples) {
  EXPECT_NEAR(reversal(kExp, std::log(2.0)), std::log(2.0), 1e-12);
  EXPECT_NEAR(reversal(kExp, 2.0), 0.14541, 1e-5);
  EXPECT_NEAR(reversal(kExp, 2.0), -std::log(1.0 - std::exp(-2.0)), 1e-14);
  // 70th percentile maps to the 30th.
  EXPECT_NEAR(reversal(kExp, kExp.inverse_cdf(0.7)), kExp.inverse_cdf(0.3),
              1e-12);
}

TEST(Reversal, MatchesBisectionOracle) {
  for (const auto& d : {kExp, kHalf, kThird}) {
    for (double x = 1e-3; x <= 20.0; x *= 1.7) {
      const double want = reversal_by_bisection(d, x);
      EXPECT_NEAR(reversal(d, x), want, 1e-9 * (1.0 + want))
          << to_string(d.kind()) << " x=" << x;
    }
  }
  EXPECT_NEAR(reversal_by_bisection(kExp, 2.0), 0.14541, 1e-5);
}

TEST(Reversal, InvolutionAndSymmetry) {
  for (const auto& d : {kExp, kHalf, kThird}) {
    for (double x = 1e-3; x <= 20.0; x *= 1.25) {
      const double r = reversal(d, x);
      EXPECT_NEAR(reversal(d, r), x, 1e-8 * x) << to_string(d.kind());
      EXPECT_NEAR(d.cdf(r) + d.cdf(x), 1.0, 1e-9);
    }
  }
}

TEST(Reversal, OverflowAtExtremes) {
  EXPECT_THROW(reversal(kExp, 1000.0), std::overflow_error);
  EXPECT_THROW(reversal(kThird, 1e9), std::overflow_error);
  // Tiny sizes are fine: the small tail is inverted at full precision.
  EXPECT_NEAR(reversal(kExp, 1e-300), 300.0 * std::log(10.0), 1e-9);
}

TEST(Predictor, TagsRoundTrip) {
  for (auto k : {PredictorKind::kExact, PredictorKind::kExponential,
                 PredictorKind::kAlpha, PredictorKind::kAlphaBeta,
                 PredictorKind::kTraceGiven}) {
    EXPECT_EQ(parse_predictor_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_predictor_kind("oracle"), std::invalid_argument);
}

}  // namespace
}  // namespace supermarket
