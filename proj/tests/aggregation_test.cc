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

#include "fedldl/aggregation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fedldl/errors.h"
#include "fedldl/random.h"
#include "gtest/gtest.h"

namespace fedldl::aggregation {
namespace {

ClientSummary Summary(int id, std::size_t n, double q, std::vector<double> values) {
  const ModelShape shape{values.size(), 0, 0};
  return {id, n, q, ModelParams(shape, std::move(values))};
}

double Sum(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

TEST(ScoreTest, EffectiveInfo) {
  EXPECT_EQ(EffectiveInfo(100, 0.0), 0.0);
  EXPECT_EQ(EffectiveInfo(200, 7.0), 1400.0);
  EXPECT_THROW(EffectiveInfo(10, -1.0), InputError);
}

TEST(ScoreTest, AnnealedEndpoints) {
  EXPECT_EQ(AnnealedScore(200, 7.0, 0.0), 1400.0);
  EXPECT_EQ(AnnealedScore(200, 7.0, 1.0), 200.0);
  EXPECT_EQ(AnnealedScore(200, 0.0, 1.0), 200.0);
  EXPECT_EQ(AnnealedScore(200, 0.0, 0.5), 0.0);
  EXPECT_NEAR(AnnealedScore(100, 0.5, 0.5), 70.71067811865475, 1e-12);
  EXPECT_THROW(AnnealedScore(10, 1.0, 1.5), DomainError);
}

TEST(ScheduleTest, LinearWarmup) {
  const AggregationConfig cfg{.anneal_warmup_rounds = 4};
  EXPECT_EQ(AnnealSchedule(0, cfg), 0.0);
  EXPECT_EQ(AnnealSchedule(1, cfg), 0.25);
  EXPECT_EQ(AnnealSchedule(2, cfg), 0.5);
  EXPECT_EQ(AnnealSchedule(4, cfg), 1.0);
  EXPECT_EQ(AnnealSchedule(40, cfg), 1.0);
  for (int t = 0; t < 10; ++t) {
    EXPECT_LE(AnnealSchedule(t, cfg), AnnealSchedule(t + 1, cfg));
  }
  EXPECT_THROW(AnnealSchedule(-1, cfg), DomainError);
}

TEST(ScheduleTest, ConstantAndModes) {
  AggregationConfig cfg{.anneal_warmup_rounds = 4,
                        .schedule = AnnealKind::kConstant,
                        .constant_rho = 0.3};
  EXPECT_EQ(AnnealSchedule(0, cfg), 0.3);
  EXPECT_EQ(AnnealSchedule(99, cfg), 0.3);
  cfg.mode = ServerMode::kFedAvg;
  EXPECT_EQ(EffectiveRho(0, cfg), 1.0);
  cfg.mode = ServerMode::kQualityOnly;
  EXPECT_EQ(EffectiveRho(50, cfg), 0.0);
}

TEST(SoftWeightsTest, WorkedExamples) {
  const auto w = SoftWeights(std::vector<double>{2, 1, 1}, 1.0);
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 0.25);
  EXPECT_DOUBLE_EQ(w[2], 0.25);
  const auto sharp = SoftWeights(std::vector<double>{2, 1}, 2.0);
  EXPECT_NEAR(sharp[0], 0.8, 1e-15);
  EXPECT_NEAR(sharp[1], 0.2, 1e-15);
}

TEST(SoftWeightsTest, ZeroScores) {
  std::vector<std::string> warnings;
  const auto w = SoftWeights(std::vector<double>{0, 3}, 1.5, &warnings);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_EQ(w[1], 1.0);
  EXPECT_TRUE(warnings.empty());
  const auto u = SoftWeights(std::vector<double>{0, 0, 0, 0}, 1.0, &warnings);
  for (double x : u) EXPECT_EQ(x, 0.25);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(SoftWeightsTest, HugeScoresStayFinite) {
  const auto w = SoftWeights(std::vector<double>{1e300, 1e299}, 3.0);
  EXPECT_NEAR(w[0], 1000.0 / 1001.0, 1e-12);
  EXPECT_NEAR(Sum(w), 1.0, 1e-12);
}

TEST(SoftWeightsTest, RejectsBadInput) {
  EXPECT_THROW(SoftWeights(std::vector<double>{}, 1.0), DimensionError);
  EXPECT_THROW(SoftWeights(std::vector<double>{1, -1}, 1.0), InputError);
  EXPECT_THROW(SoftWeights(std::vector<double>{1, NAN}, 1.0), InputError);
  EXPECT_THROW(SoftWeights(std::vector<double>{1}, 0.0), DomainError);
}

TEST(SoftWeightsPropertyTest, SimplexAndScaleInvariance) {
  Rng rng = MakeStream(21, StreamTag::kQuality);
  std::uniform_real_distribution<double> score(0.0, 1000.0);
  std::uniform_real_distribution<double> gamma(0.25, 4.0);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(2 + trial % 9);
    for (double& x : s) x = score(rng);
    const double g = gamma(rng);
    const auto w = SoftWeights(s, g);
    EXPECT_NEAR(Sum(w), 1.0, 1e-12);
    for (double x : w) EXPECT_GE(x, 0.0);
    std::vector<double> scaled = s;
    const double c = scale(rng);
    for (double& x : scaled) x *= c;
    const auto ws = SoftWeights(scaled, g);
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], ws[i], 1e-12);
    // Larger score, larger weight.
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[i] > s[j]) {
          EXPECT_GE(w[i], w[j]);
        }
      }
    }
  }
}

TEST(AggregateTest, WorkedExamples) {
  const std::vector<ClientSummary> two = {Summary(0, 1, 1, {1.0, 2.0}),
                                          Summary(1, 1, 1, {3.0, 6.0})};
  const ModelParams mean = Aggregate(two, std::vector<double>{0.5, 0.5});
  EXPECT_EQ(mean[0], 2.0);
  EXPECT_EQ(mean[1], 4.0);
  const ModelParams first = Aggregate(two, std::vector<double>{1.0, 0.0});
  EXPECT_EQ(first, two[0].params);
}

TEST(AggregateTest, RejectsBadInput) {
  const std::vector<ClientSummary> two = {Summary(0, 1, 1, {1.0}),
                                          Summary(1, 1, 1, {3.0})};
  EXPECT_THROW(Aggregate(two, std::vector<double>{0.5}), DimensionError);
  EXPECT_THROW(Aggregate(two, std::vector<double>{0.5, 0.6}), InputError);
  EXPECT_THROW(Aggregate(two, std::vector<double>{1.5, -0.5}), InputError);
  const std::vector<ClientSummary> mixed = {Summary(0, 1, 1, {1.0}),
                                            Summary(1, 1, 1, {3.0, 4.0})};
  EXPECT_THROW(Aggregate(mixed, std::vector<double>{0.5, 0.5}), DimensionError);
}

TEST(AggregatePropertyTest, PermutationEquivariantBitwise) {
  Rng rng = MakeStream(22, StreamTag::kQuality);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ClientSummary> clients;
    for (int m = 0; m < 6; ++m) {
      std::vector<double> v(7);
      for (double& x : v) x = normal(rng);
      clients.push_back(Summary(m, 10 + m, 1.0 + m, std::move(v)));
    }
    std::vector<double> weights(6);
    for (double& w : weights) w = std::abs(normal(rng)) + 0.01;
    const double total = Sum(weights);
    for (double& w : weights) w /= total;
    const ModelParams reference = Aggregate(clients, weights);

    std::vector<std::size_t> perm(6);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<ClientSummary> shuffled;
    std::vector<double> shuffled_w;
    for (std::size_t i : perm) {
      shuffled.push_back(clients[i]);
      shuffled_w.push_back(weights[i]);
    }
    EXPECT_EQ(Aggregate(shuffled, shuffled_w), reference);
  }
}

TEST(RoundWeightsTest, FedAvgUsesSampleCounts) {
  const std::vector<ClientSummary> c = {Summary(0, 30, 2, {0}), Summary(1, 10, 10, {0})};
  const auto w = RoundWeights(c, 0, {.mode = ServerMode::kFedAvg});
  EXPECT_EQ(w[0], 0.75);
  EXPECT_EQ(w[1], 0.25);
}

TEST(RoundWeightsTest, FedQualAnnealsFromQualityToSize) {
  const std::vector<ClientSummary> c = {Summary(0, 100, 2, {0}),
                                        Summary(1, 10, 10, {0})};
  const AggregationConfig cfg{.anneal_warmup_rounds = 10};
  const auto start = RoundWeights(c, 0, cfg);
  EXPECT_NEAR(start[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(start[1], 1.0 / 3.0, 1e-15);
  for (int t : {10, 11, 50}) {
    const auto late = RoundWeights(c, t, cfg);
    EXPECT_NEAR(late[0], 100.0 / 110.0, 1e-15);
    EXPECT_NEAR(late[1], 10.0 / 110.0, 1e-15);
  }
}

TEST(RoundWeightsTest, FullyAnnealedEqualsFedAvgBitwise) {
  Rng rng = MakeStream(23, StreamTag::kQuality);
  std::uniform_int_distribution<int> count(1, 500);
  std::uniform_real_distribution<double> quality(0.0, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ClientSummary> c;
    for (int m = 0; m < 2 + trial % 10; ++m) {
      c.push_back(Summary(m, static_cast<std::size_t>(count(rng)), quality(rng), {0}));
    }
    const auto fedavg = RoundWeights(c, 0, {.mode = ServerMode::kFedAvg});
    const auto annealed = RoundWeights(
        c, 0, {.schedule = AnnealKind::kConstant, .constant_rho = 1.0});
    EXPECT_EQ(fedavg, annealed);
  }
}

TEST(RoundWeightsTest, QualityDominanceAtEqualSize) {
  Rng rng = MakeStream(24, StreamTag::kQuality);
  std::uniform_real_distribution<double> quality(0.1, 20.0);
  std::uniform_real_distribution<double> rho(0.0, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ClientSummary> c;
    for (int m = 0; m < 5; ++m) c.push_back(Summary(m, 50, quality(rng), {0}));
    const AggregationConfig cfg{.schedule = AnnealKind::kConstant,
                                .constant_rho = rho(rng)};
    const auto w = RoundWeights(c, 0, cfg);
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[i].quality > c[j].quality) {
          EXPECT_GT(w[i], w[j]);
        }
      }
    }
  }
}

TEST(RoundWeightsTest, ZeroQualityClientIsDroppedWithWarning) {
  const std::vector<ClientSummary> c = {Summary(0, 100, 0, {0}),
                                        Summary(1, 10, 3, {0})};
  std::vector<std::string> warnings;
  const auto w = RoundWeights(c, 0, {.anneal_warmup_rounds = 5}, &warnings);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_EQ(w[1], 1.0);
  EXPECT_FALSE(warnings.empty());
}

TEST(RoundWeightsTest, QualityOnlyIgnoresSchedule) {
  const std::vector<ClientSummary> c = {Summary(0, 100, 2, {0}),
                                        Summary(1, 10, 10, {0})};
  const auto w = RoundWeights(c, 1000, {.mode = ServerMode::kQualityOnly});
  EXPECT_NEAR(w[0], 2.0 / 3.0, 1e-15);
}

}  // namespace
}  // namespace fedldl::aggregation
