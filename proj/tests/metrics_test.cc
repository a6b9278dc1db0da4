// Copyright 2026 The FedLDL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedldl/metrics.h"

#include <cmath>
#include <vector>

#include "fedldl/errors.h"
#include "fedldl/random.h"
#include "gtest/gtest.h"

namespace fedldl::metrics {
namespace {

LabelDistribution LD(std::vector<double> v) { return LabelDistribution(std::move(v)); }

// Values below were evaluated at 40 significant digits (mpmath), including
// the 1e-12 smoothing for KL.
constexpr double kKlHalfVsQuarter = 0.14384103622522379705;
constexpr double kClarkHalfVsQuarter = 0.38873012632302003139;
constexpr double kCanberraHalfVsQuarter = 0.53333333333333333333;
constexpr double kCosineHalfVsQuarter = 0.89442719099991587856;

TEST(KlDivergenceTest, WorkedExamples) {
  EXPECT_EQ(KlDivergence(LD({0.5, 0.5}), LD({0.5, 0.5})), 0.0);
  EXPECT_NEAR(KlDivergence(LD({0.5, 0.5}), LD({0.25, 0.75})), kKlHalfVsQuarter,
              1e-12);
  EXPECT_NEAR(KlDivergence(LD({1.0, 0.0}), LD({1.0, 0.0})), 0.0, 1e-9);
}

TEST(KlDivergenceTest, FiniteAtVertices) {
  const double kl = KlDivergence(LD({1.0, 0.0}), LD({0.0, 1.0}));
  EXPECT_TRUE(std::isfinite(kl));
  EXPECT_GT(kl, 20.0);  // ~ln(1e12)
}

TEST(KlDivergenceTest, Asymmetric) {
  const auto a = LD({0.5, 0.5});
  const auto b = LD({0.1, 0.9});
  EXPECT_GT(std::abs(KlDivergence(a, b) - KlDivergence(b, a)), 1e-3);
}

TEST(ChebyshevTest, WorkedExamples) {
  EXPECT_NEAR(Chebyshev(LD({0.7, 0.3}), LD({0.5, 0.5})), 0.2, 1e-15);
  EXPECT_EQ(Chebyshev(LD({0.7, 0.3}), LD({0.7, 0.3})), 0.0);
  EXPECT_EQ(Chebyshev(LD({1.0, 0.0}), LD({0.0, 1.0})), 1.0);
}

TEST(ClarkTest, WorkedExamples) {
  EXPECT_EQ(Clark(LD({0.2, 0.8}), LD({0.2, 0.8})), 0.0);
  EXPECT_NEAR(Clark(LD({1.0, 0.0}), LD({0.0, 1.0})), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(Clark(LD({0.5, 0.5}), LD({0.25, 0.75})), kClarkHalfVsQuarter,
              1e-15);
}

TEST(ClarkTest, ZeroOverZeroTermsVanish) {
  EXPECT_EQ(Clark(LD({0.5, 0.5, 0.0}), LD({0.5, 0.5, 0.0})), 0.0);
  EXPECT_NEAR(Clark(LD({1.0, 0.0, 0.0}), LD({0.0, 1.0, 0.0})), std::sqrt(2.0),
              1e-15);
}

TEST(CanberraTest, WorkedExamples) {
  EXPECT_EQ(Canberra(LD({0.3, 0.7}), LD({0.3, 0.7})), 0.0);
  EXPECT_NEAR(Canberra(LD({1.0, 0.0}), LD({0.0, 1.0})), 2.0, 1e-15);
  EXPECT_NEAR(Canberra(LD({0.5, 0.5}), LD({0.25, 0.75})), kCanberraHalfVsQuarter,
              1e-15);
  EXPECT_NEAR(Canberra(LD({1.0, 0.0, 0.0}), LD({0.0, 1.0, 0.0})), 2.0, 1e-15);
}

TEST(IntersectionTest, WorkedExamples) {
  EXPECT_NEAR(Intersection(LD({0.3, 0.7}), LD({0.3, 0.7})), 1.0, 1e-15);
  EXPECT_EQ(Intersection(LD({1.0, 0.0}), LD({0.0, 1.0})), 0.0);
  EXPECT_NEAR(Intersection(LD({0.7, 0.3}), LD({0.5, 0.5})), 0.8, 1e-15);
}

TEST(CosineTest, WorkedExamples) {
  EXPECT_NEAR(Cosine(LD({0.3, 0.7}), LD({0.3, 0.7})), 1.0, 1e-9);
  EXPECT_EQ(Cosine(LD({1.0, 0.0}), LD({0.0, 1.0})), 0.0);
  EXPECT_NEAR(Cosine(LD({0.5, 0.5}), LD({0.25, 0.75})), kCosineHalfVsQuarter,
              1e-15);
}

TEST(MetricsTest, LengthMismatchIsDimensionError) {
  const auto a = LD({0.5, 0.5});
  const auto b = LD({0.2, 0.3, 0.5});
  EXPECT_THROW(KlDivergence(a, b), DimensionError);
  EXPECT_THROW(Chebyshev(a, b), DimensionError);
  EXPECT_THROW(Clark(a, b), DimensionError);
  EXPECT_THROW(Canberra(a, b), DimensionError);
  EXPECT_THROW(Intersection(a, b), DimensionError);
  EXPECT_THROW(Cosine(a, b), DimensionError);
}

TEST(MetricsTest, NanInputIsRejected) {
  EXPECT_THROW(LD({std::nan(""), 1.0}), InputError);
  EXPECT_THROW(LD({0.6, 0.6}), InputError);
  EXPECT_THROW(LD({1.0}), InputError);
  EXPECT_THROW(LD({-0.1, 1.1}), InputError);
}

// Randomized properties over Dirichlet-sampled pairs.
class MetricPropertyTest : public ::testing::Test {
 protected:
  static constexpr int kPairs = 1000;

  LabelDistribution Draw(Rng& rng) {
    return LabelDistribution(SampleSymmetricDirichlet(dim_, 0.5, rng));
  }

  std::size_t dim_ = 5;
};

TEST_F(MetricPropertyTest, IdentityNonnegativityAndTotalVariation) {
  Rng rng = MakeStream(7, StreamTag::kGroundTruth);
  for (int i = 0; i < kPairs; ++i) {
    dim_ = 2 + static_cast<std::size_t>(i % 7);
    const LabelDistribution d = Draw(rng);
    const LabelDistribution p = Draw(rng);

    EXPECT_LE(KlDivergence(d, d), 1e-9);
    EXPECT_LE(Chebyshev(d, d), 1e-9);
    EXPECT_LE(Clark(d, d), 1e-9);
    EXPECT_LE(Canberra(d, d), 1e-9);
    EXPECT_NEAR(Intersection(d, d), 1.0, 1e-9);
    EXPECT_NEAR(Cosine(d, d), 1.0, 1e-9);

    const double kl = KlDivergence(d, p);
    EXPECT_GE(kl, 0.0);
    if (Chebyshev(d, p) > 1e-9) {
      EXPECT_GT(kl, 0.0);
    }

    EXPECT_EQ(Chebyshev(d, p), Chebyshev(p, d));
    EXPECT_NEAR(Clark(d, p), Clark(p, d), 1e-15);
    EXPECT_NEAR(Canberra(d, p), Canberra(p, d), 1e-15);
    EXPECT_NEAR(Intersection(d, p), Intersection(p, d), 1e-15);
    EXPECT_NEAR(Cosine(d, p), Cosine(p, d), 1e-15);

    double l1 = 0.0;
    for (std::size_t c = 0; c < d.size(); ++c) l1 += std::abs(d[c] - p[c]);
    EXPECT_NEAR(Intersection(d, p), 1.0 - 0.5 * l1, 1e-12);

    const MetricReport r = Evaluate(d, p);
    EXPECT_GE(r.intersection, 0.0);
    EXPECT_LE(r.intersection, 1.0 + 1e-12);
    EXPECT_GE(r.cosine, 0.0);
    EXPECT_LE(r.cosine, 1.0);
    EXPECT_LE(r.chebyshev, 1.0);
    EXPECT_LE(r.clark, std::sqrt(static_cast<double>(d.size())) + 1e-12);
  }
}

TEST(MetricAveragerTest, MeanOfReports) {
  MetricAverager avg;
  avg.Add({.kl = 1.0, .cosine = 0.5});
  avg.Add({.kl = 3.0, .cosine = 1.0});
  EXPECT_EQ(avg.count(), 2u);
  EXPECT_DOUBLE_EQ(avg.Mean().kl, 2.0);
  EXPECT_DOUBLE_EQ(avg.Mean().cosine, 0.75);
}

}  // namespace
}  // namespace fedldl::metrics
