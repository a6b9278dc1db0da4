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

#ifndef FEDLDL_LOCAL_LEARNER_H_
#define FEDLDL_LOCAL_LEARNER_H_

#include <span>
#include <vector>

#include "fedldl/client_shard.h"
#include "fedldl/model.h"
#include "fedldl/random.h"

namespace fedldl {

// Distance R(anchor, logits) used to pull client logits toward the anchor.
enum class AnchorPenalty {
  kSquaredLogits,  // 0.5 * ||z - a||^2
  kSoftmaxKl,      // KL(softmax(a) || softmax(z))
};

struct LocalTrainConfig {
  int epochs = 5;
  int batch_size = 16;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  double alpha = 0.0;    // calibration weight in [0, 1]
  double prox_mu = 0.0;  // proximal coefficient; 0 disables
  AnchorPenalty penalty = AnchorPenalty::kSquaredLogits;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
};

// Per-example objective
//
//   (1 - alpha) * KL(d || softmax(z)) + alpha * R(a, z)
//     + (mu / 2) * ||w - w_g||^2 + (decay / 2) * ||w||^2
//
// where z are the logits of `params` on the example and a = anchor_logits.
double JointLoss(const ModelParams& params, const Example& example,
                 std::span<const double> anchor_logits,
                 const LocalTrainConfig& cfg, const ModelParams& global_params);

// Gradient of JointLoss with respect to params.
ModelParams JointGrad(const ModelParams& params, const Example& example,
                      std::span<const double> anchor_logits,
                      const LocalTrainConfig& cfg,
                      const ModelParams& global_params);

// Mean JointLoss over the shard, with anchor logits taken from
// anchor_params.
double ShardLoss(const ModelParams& params, const ModelParams& anchor_params,
                 const ClientShard& shard, const LocalTrainConfig& cfg);

// E epochs of mini-batch SGD with momentum on the joint objective. The anchor
// logits come from `anchor_params` and stay frozen for the whole call; the
// proximal term also pulls toward `anchor_params`. Batches are the mean over
// their examples; the last short batch is kept. Throws ConfigError on an
// empty shard.
ModelParams LocalTrain(const ModelParams& start_params,
                       const ModelParams& anchor_params,
                       const ClientShard& shard, const LocalTrainConfig& cfg,
                       Rng& rng);

}  // namespace fedldl

#endif  // FEDLDL_LOCAL_LEARNER_H_
