#include <gtest/gtest.h>

#include "evifuse/random.hpp"
#include "evifuse/weights.hpp"

using namespace evifuse;
using weights::Scheme;
using weights::WeightVector;

namespace {

// Normalize, multiply elementwise and renormalize: Dempster's rule on
// singleton-only mass functions, written out directly.
std::vector<double> product_rule(const std::vector<double>& a, const std::vector<double>& b) {
  double sa = 0.0, sb = 0.0;
  for (double v : a) sa += v;
  for (double v : b) sb += v;
  std::vector<double> out(a.size());
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = (a[i] / sa) * (b[i] / sb);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace

TEST(BuildWeight, W0IsUnweighted) {
  for (const metrics::ConfusionMatrix& cm : {metrics::ConfusionMatrix{40, 10, 5, 45},
                                             metrics::ConfusionMatrix{0, 0, 0, 7}}) {
    EXPECT_EQ(weights::build_weight(cm, Scheme::W0).values, (std::vector<double>{1.0, 1.0}));
  }
}

TEST(BuildWeight, SchemesFromWorkedMatrix) {
  const metrics::ConfusionMatrix cm{40, 10, 5, 45};
  const auto w1 = weights::build_weight(cm, Scheme::W1).values;
  EXPECT_NEAR(w1[0], 0.85, 1e-12);
  EXPECT_NEAR(w1[1], 0.85, 1e-12);
  const auto w2 = weights::build_weight(cm, Scheme::W2).values;
  EXPECT_NEAR(w2[0], 0.8889, 1e-4);
  EXPECT_NEAR(w2[1], 0.8182, 1e-4);
  const auto w3 = weights::build_weight(cm, Scheme::W3).values;
  EXPECT_NEAR(w3[0], 0.8, 1e-12);
  EXPECT_NEAR(w3[1], 0.9, 1e-12);
  const auto w4 = weights::build_weight(cm, Scheme::W4).values;
  const auto expect4 = product_rule(w2, w3);
  EXPECT_NEAR(w4[0], expect4[0], 1e-12);
  EXPECT_NEAR(w4[1], expect4[1], 1e-12);
}

TEST(BuildWeight, UndefinedRatesFallBackToOne) {
  // No positives at all: sensitivity and PPV are undefined.
  const auto w2 = weights::build_weight(metrics::ConfusionMatrix{0, 0, 0, 10}, Scheme::W2).values;
  EXPECT_DOUBLE_EQ(w2[0], 1.0);
  EXPECT_DOUBLE_EQ(w2[1], 1.0);
}

TEST(BuildWeight, ZeroRatesAreFloored) {
  const auto w2 = weights::build_weight(metrics::ConfusionMatrix{0, 5, 5, 0}, Scheme::W2).values;
  EXPECT_DOUBLE_EQ(w2[0], weights::kWeightFloor);
  EXPECT_DOUBLE_EQ(w2[1], weights::kWeightFloor);
}

TEST(BuildWeight, W5Example) {
  weights::Rates r;
  r.accuracy = 0.9;
  r.sensitivity = 0.8;
  r.specificity = 0.95;
  const auto w5 = weights::build_weight(r, Scheme::W5).values;
  const auto expected = product_rule({0.9, 0.9}, {0.8, 0.95});
  EXPECT_NEAR(w5[0], expected[0], 1e-12);
  EXPECT_NEAR(w5[0], 0.4571, 1e-4);
  EXPECT_NEAR(w5[1], 0.5429, 1e-4);
}

TEST(DempsterWeightCombine, Examples) {
  const auto even = weights::dempster_weight_combine({{1, 1}}, {{1, 1}}).values;
  EXPECT_NEAR(even[0], 0.5, 1e-15);
  EXPECT_NEAR(even[1], 0.5, 1e-15);

  for (const std::vector<double>& a : {std::vector<double>{0.5, 0.5}, std::vector<double>{0.9, 0.9}}) {
    const auto w = weights::dempster_weight_combine({a}, {{0.8, 0.95}}).values;
    EXPECT_NEAR(w[0], 0.4571, 1e-4);
    EXPECT_NEAR(w[1], 0.5429, 1e-4);
  }

  const auto sharp = weights::dempster_weight_combine({{1, 1e-4}}, {{1, 1e-4}}).values;
  EXPECT_NEAR(sharp[0], 1.0 / (1.0 + 1e-8), 1e-15);
  EXPECT_NEAR(sharp[0], 0.99999999, 1e-8);
}

TEST(DempsterWeightCombine, RandomizedProperties) {
  Rng rng(17);
  for (int t = 0; t < 1000; ++t) {
    const WeightVector a{{rng.uniform(0.01, 1.0), rng.uniform(0.01, 1.0)}};
    const WeightVector b{{rng.uniform(0.01, 1.0), rng.uniform(0.01, 1.0)}};
    const auto ab = weights::dempster_weight_combine(a, b).values;
    const auto ba = weights::dempster_weight_combine(b, a).values;
    EXPECT_NEAR(ab[0] + ab[1], 1.0, 1e-12);
    EXPECT_GT(ab[0], 0.0);
    EXPECT_GT(ab[1], 0.0);
    EXPECT_NEAR(ab[0], ba[0], 1e-12);
    EXPECT_NEAR(ab[1], ba[1], 1e-12);

    const double u = rng.uniform(0.1, 2.0);
    const auto neutral = weights::dempster_weight_combine({{u, u}}, b).values;
    const double sb = b.values[0] + b.values[1];
    EXPECT_NEAR(neutral[0], b.values[0] / sb, 1e-12);
    EXPECT_NEAR(neutral[1], b.values[1] / sb, 1e-12);

    if (a.values[0] > a.values[1] && b.values[0] > b.values[1]) {
      const double sa = a.values[0] + a.values[1];
      EXPECT_GT(ab[0], a.values[0] / sa);
      EXPECT_GT(ab[0], b.values[0] / sb);
    }
  }
}

TEST(Scheme, NamesRoundTrip) {
  for (auto s : weights::kAllSchemes) EXPECT_EQ(weights::parse_scheme(weights::to_string(s)), s);
  EXPECT_EQ(weights::parse_scheme("W3"), Scheme::W3);
  EXPECT_FALSE(weights::parse_scheme("w9").has_value());
}
