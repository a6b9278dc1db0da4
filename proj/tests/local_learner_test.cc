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

#include "fedldl/local_learner.h"

#include <cmath>
#include <vector>

#include "fedldl/errors.h"
#include "fedldl/metrics.h"
#include "gtest/gtest.h"
#include "test_oracles.h"

namespace fedldl {
namespace {

ModelParams RandomParams(ModelShape shape, Rng& rng, double scale = 0.5) {
  std::normal_distribution<double> normal(0.0, scale);
  ModelParams p(shape);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = normal(rng);
  return p;
}

Example RandomExample(const ModelShape& shape, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(shape.feature_dim);
  for (double& v : x) v = normal(rng);
  // Some targets with exact zeros, some interior.
  std::vector<double> d = SampleSymmetricDirichlet(shape.num_classes, 0.4, rng);
  return {std::move(x), LabelDistribution::Normalized(std::move(d))};
}

TEST(ForwardTest, ZeroModelPredictsUniform) {
  ModelParams params(ModelShape{4, 3, 0});
  const ForwardPass fp = Forward(params, std::vector<double>{1.0, -2.0, 0.5});
  for (double z : fp.logits) EXPECT_EQ(z, 0.0);
  for (double p : fp.prediction.values()) EXPECT_DOUBLE_EQ(p, 0.25);
}

TEST(ForwardTest, SoftmaxClosedForm) {
  const std::vector<double> logits = {0.0, std::log(3.0)};
  const std::vector<double> p = Softmax(logits);
  EXPECT_NEAR(p[0], 0.25, 1e-15);
  EXPECT_NEAR(p[1], 0.75, 1e-15);
}

TEST(ForwardTest, ShiftInvariance) {
  const std::vector<double> logits = {0.3, -1.2, 2.0};
  std::vector<double> shifted = logits;
  for (double& z : shifted) z += 123.0;
  const auto a = Softmax(logits);
  const auto b = Softmax(shifted);
  for (std::size_t c = 0; c < a.size(); ++c) EXPECT_NEAR(a[c], b[c], 1e-15);
}

TEST(ForwardTest, LargeLogitsStayOnSimplex) {
  ModelShape shape{3, 2, 0};
  ModelParams params(shape, {800, 0, -800, 0, 0, 900, 0, 0, 0});
  const ForwardPass fp = Forward(params, std::vector<double>{1.0, 1.0});
  double total = 0.0;
  for (double p : fp.prediction.values()) {
    EXPECT_TRUE(std::isfinite(p));
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(ForwardTest, RejectsBadFeatures) {
  ModelParams params(ModelShape{2, 2, 0});
  EXPECT_THROW(Forward(params, std::vector<double>{1.0, NAN}), InputError);
  EXPECT_THROW(Forward(params, std::vector<double>{1.0}), DimensionError);
}

TEST(JointLossTest, WorkedExamples) {
  const ModelShape shape{2, 1, 0};
  const ModelParams zero(shape);
  LocalTrainConfig cfg;
  cfg.weight_decay = 0.0;

  const Example uniform{{1.0}, LabelDistribution({0.5, 0.5})};
  cfg.alpha = 0.0;
  EXPECT_NEAR(JointLoss(zero, uniform, std::vector<double>{0.0, 0.0}, cfg, zero),
              0.0, 1e-15);

  cfg.alpha = 1.0;
  EXPECT_EQ(JointLoss(zero, uniform, std::vector<double>{0.0, 0.0}, cfg, zero),
            0.0);

  cfg.alpha = 0.5;
  EXPECT_NEAR(JointLoss(zero, uniform, std::vector<double>{1.0, 0.0}, cfg, zero),
              0.25, 1e-15);
}

TEST(JointLossTest, PureKlTermMatchesMetric) {
  Rng rng = MakeStream(3, StreamTag::kModelInit);
  const ModelShape shape{5, 4, 0};
  LocalTrainConfig cfg;
  cfg.weight_decay = 0.0;
  cfg.alpha = 0.0;
  for (int i = 0; i < 20; ++i) {
    const ModelParams params = RandomParams(shape, rng);
    Example ex = RandomExample(shape, rng);
    const ForwardPass fp = Forward(params, ex.features);
    const double loss = JointLoss(params, ex, fp.logits, cfg, params);
    EXPECT_NEAR(loss, metrics::KlDivergence(ex.target, fp.prediction), 1e-9);
  }
}

TEST(JointLossTest, AffineInAlpha) {
  Rng rng = MakeStream(4, StreamTag::kModelInit);
  const ModelShape shape{4, 3, 0};
  for (int i = 0; i < 50; ++i) {
    const ModelParams params = RandomParams(shape, rng);
    const ModelParams global = RandomParams(shape, rng);
    const Example ex = RandomExample(shape, rng);
    const std::vector<double> anchor = Forward(global, ex.features).logits;
    LocalTrainConfig cfg;
    cfg.prox_mu = 0.3;
    auto at = [&](double a) {
      cfg.alpha = a;
      return JointLoss(params, ex, anchor, cfg, global);
    };
    EXPECT_NEAR(at(0.5), 0.5 * (at(0.0) + at(1.0)), 1e-12);
  }
}

TEST(JointLossTest, DimensionErrors) {
  const ModelParams params(ModelShape{3, 2, 0});
  const Example ex{{1.0, 2.0}, LabelDistribution({0.2, 0.3, 0.5})};
  LocalTrainConfig cfg;
  EXPECT_THROW(JointLoss(params, ex, std::vector<double>{0.0, 0.0}, cfg, params),
               DimensionError);
  const Example wrong{{1.0, 2.0}, LabelDistribution({0.5, 0.5})};
  EXPECT_THROW(JointLoss(params, wrong, std::vector<double>{0, 0, 0}, cfg, params),
               DimensionError);
  const ModelParams other(ModelShape{3, 3, 0});
  EXPECT_THROW(JointGrad(params, ex, std::vector<double>{0, 0, 0}, cfg, other),
               DimensionError);
  cfg.alpha = 1.5;
  EXPECT_THROW(JointLoss(params, ex, std::vector<double>{0, 0, 0}, cfg, params),
               ConfigError);
}

TEST(JointGradTest, StationaryPoints) {
  const ModelShape shape{2, 2, 0};
  const ModelParams zero(shape);
  LocalTrainConfig cfg;
  cfg.weight_decay = 0.0;
  const Example ex{{0.4, -1.0}, LabelDistribution({0.5, 0.5})};

  cfg.alpha = 0.0;
  const ModelParams flat = JointGrad(zero, ex, std::vector<double>{3.0, 1.0}, cfg, zero);
  for (double g : flat.values()) EXPECT_EQ(g, 0.0);
  Rng rng = MakeStream(5, StreamTag::kModelInit);
  const ModelParams params = RandomParams(shape, rng);
  const Example any{{0.4, -1.0}, LabelDistribution({0.9, 0.1})};
  cfg.alpha = 1.0;
  const std::vector<double> own = Forward(params, any.features).logits;
  const ModelParams pinned = JointGrad(params, any, own, cfg, params);
  for (double g : pinned.values()) EXPECT_EQ(g, 0.0);
}

struct GradCase {
  ModelShape shape;
  AnchorPenalty penalty;
};

class JointGradOracleTest : public ::testing::TestWithParam<GradCase> {};

TEST_P(JointGradOracleTest, MatchesCentralDifferences) {
  const GradCase& gc = GetParam();
  Rng rng = MakeStream(11, StreamTag::kModelInit, gc.shape.hidden_units,
                       static_cast<std::uint64_t>(gc.penalty));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const ModelParams params = RandomParams(gc.shape, rng);
    const ModelParams global = RandomParams(gc.shape, rng);
    const ModelParams anchor_model = RandomParams(gc.shape, rng);
    const Example ex = RandomExample(gc.shape, rng);
    const std::vector<double> anchor = Forward(anchor_model, ex.features).logits;
    LocalTrainConfig cfg;
    cfg.alpha = unit(rng);
    cfg.prox_mu = unit(rng);
    cfg.weight_decay = 0.1 * unit(rng);
    cfg.penalty = gc.penalty;

    const ModelParams analytic = JointGrad(params, ex, anchor, cfg, global);
    const std::vector<double> numeric = testing::CentralDifferences(
        params, [&](const ModelParams& p) {
          return JointLoss(p, ex, anchor, cfg, global);
        });
    worst = std::max(worst, testing::RelativeError(analytic.values(), numeric));
  }
  EXPECT_LE(worst, 1e-5);
}

INSTANTIATE_TEST_SUITE_P(
    Models, JointGradOracleTest,
    ::testing::Values(GradCase{{5, 4, 0}, AnchorPenalty::kSquaredLogits},
                      GradCase{{3, 6, 0}, AnchorPenalty::kSoftmaxKl},
                      GradCase{{4, 3, 5}, AnchorPenalty::kSquaredLogits},
                      GradCase{{4, 3, 5}, AnchorPenalty::kSoftmaxKl}));

ClientShard MakeShard(std::vector<Example> examples) {
  ClientShard shard;
  shard.client_id = 0;
  shard.quality = 10.0;
  for (const Example& ex : examples) shard.latent.push_back(ex.target);
  shard.examples = std::move(examples);
  return shard;
}

// Two well-separated clusters with soft targets.
ClientShard SeparableShard(Rng& rng, std::size_t n) {
  std::normal_distribution<double> jitter(0.0, 0.3);
  std::vector<Example> examples;
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = i % 2 == 0;
    const double center = positive ? 2.0 : -2.0;
    examples.push_back(
        {{center + jitter(rng), center + jitter(rng)},
         positive ? LabelDistribution({0.9, 0.1}) : LabelDistribution({0.1, 0.9})});
  }
  return MakeShard(std::move(examples));
}

TEST(LocalTrainTest, ZeroEpochsIsIdentity) {
  Rng rng = MakeStream(1, StreamTag::kModelInit);
  const ModelParams start = RandomParams({2, 2, 0}, rng);
  const ClientShard shard = SeparableShard(rng, 10);
  LocalTrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_EQ(LocalTrain(start, start, shard, cfg, rng), start);
}

TEST(LocalTrainTest, ZeroGradientLeavesParamsUnchanged) {
  const ModelParams zero(ModelShape{2, 2, 0});
  const ClientShard shard = MakeShard({{{1.0, 2.0}, LabelDistribution({0.5, 0.5})}});
  LocalTrainConfig cfg;
  cfg.weight_decay = 0.0;
  cfg.alpha = 0.0;
  cfg.epochs = 7;
  Rng rng = MakeStream(2, StreamTag::kLocalTraining);
  EXPECT_EQ(LocalTrain(zero, zero, shard, cfg, rng), zero);
}

TEST(LocalTrainTest, EmptyShardIsConfigError) {
  const ModelParams zero(ModelShape{2, 2, 0});
  Rng rng = MakeStream(2, StreamTag::kLocalTraining);
  EXPECT_THROW(LocalTrain(zero, zero, ClientShard{}, LocalTrainConfig{}, rng),
               ConfigError);
}

TEST(LocalTrainTest, DescendsAndMatchesReferenceSgd) {
  Rng data_rng = MakeStream(3, StreamTag::kGroundTruth);
  const ClientShard shard = SeparableShard(data_rng, 37);  // short last batch
  const ModelParams start(ModelShape{2, 2, 0});
  LocalTrainConfig cfg;  // E=5, B=16, lr=0.01, momentum 0.9, decay 1e-4
  cfg.alpha = 0.0;

  Rng rng_a = MakeStream(9, StreamTag::kLocalTraining);
  const ModelParams trained = LocalTrain(start, start, shard, cfg, rng_a);

  Rng rng_b = MakeStream(9, StreamTag::kLocalTraining);
  const std::vector<double> reference = testing::ReferenceSgd(
      std::vector<double>(start.values().begin(), start.values().end()), 2, 2,
      shard.examples, cfg.epochs, static_cast<std::size_t>(cfg.batch_size),
      cfg.learning_rate, cfg.momentum, cfg.weight_decay, rng_b);
  for (std::size_t i = 0; i < reference.size(); ++i) {
    EXPECT_NEAR(trained[i], reference[i], 1e-12);
  }

  LocalTrainConfig plain = cfg;
  plain.weight_decay = 0.0;
  EXPECT_LT(ShardLoss(trained, start, shard, plain),
            ShardLoss(start, start, shard, plain));
}

TEST(LocalTrainTest, DeterministicGivenSeed) {
  Rng data_rng = MakeStream(4, StreamTag::kGroundTruth);
  const ClientShard shard = SeparableShard(data_rng, 50);
  Rng init = MakeStream(4, StreamTag::kModelInit);
  const ModelParams start = RandomParams({2, 2, 0}, init);
  LocalTrainConfig cfg;
  cfg.alpha = 0.4;
  cfg.prox_mu = 0.01;
  Rng a = MakeStream(5, StreamTag::kLocalTraining);
  Rng b = MakeStream(5, StreamTag::kLocalTraining);
  EXPECT_EQ(LocalTrain(start, start, shard, cfg, a),
            LocalTrain(start, start, shard, cfg, b));
}

TEST(LocalTrainTest, FullCalibrationPinsLogitsToAnchor) {
  // alpha = 1 with the anchor equal to the start model: zero gradient from
  // the data terms, so only decay moves the parameters.
  Rng rng = MakeStream(6, StreamTag::kModelInit);
  const ModelParams start = RandomParams({2, 2, 0}, rng);
  const ClientShard shard = SeparableShard(rng, 20);
  LocalTrainConfig cfg;
  cfg.alpha = 1.0;
  cfg.weight_decay = 0.0;
  EXPECT_EQ(LocalTrain(start, start, shard, cfg, rng), start);
}

TEST(LocalTrainTest, HiddenLayerModelLearns) {
  Rng rng = MakeStream(8, StreamTag::kModelInit);
  const ModelParams start = ModelParams::Initial({2, 2, 6}, rng);
  const ClientShard shard = SeparableShard(rng, 40);
  LocalTrainConfig cfg;
  cfg.weight_decay = 0.0;
  const ModelParams trained = LocalTrain(start, start, shard, cfg, rng);
  EXPECT_TRUE(trained.AllFinite());
  EXPECT_LT(ShardLoss(trained, start, shard, cfg), ShardLoss(start, start, shard, cfg));
}

}  // namespace
}  // namespace fedldl
