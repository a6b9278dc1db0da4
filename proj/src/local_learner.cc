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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fedldl/errors.h"

namespace fedldl {

void LocalTrainConfig::Validate() const {
  if (epochs < 0) throw ConfigError("local epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("local batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ConfigError("momentum must be in [0, 1)");
  }
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("calibration alpha must be in [0, 1], got " +
                      std::to_string(alpha));
  }
  if (!(prox_mu >= 0.0)) throw ConfigError("prox_mu must be >= 0");
}

namespace {

// Scratch buffers for one forward/backward pass, reused across examples.
struct Workspace {
  std::vector<double> hidden;
  std::vector<double> logits;
  std::vector<double> log_probs;
  std::vector<double> probs;
  std::vector<double> dlogits;
  std::vector<double> dhidden;
  std::vector<double> anchor_probs;
};

void CheckShapes(const ModelParams& params, const ModelParams& global_params,
                 std::size_t target_size, std::size_t anchor_size) {
  const ModelShape& shape = params.shape();
  if (!(global_params.shape() == shape)) {
    throw DimensionError("global parameters have a different shape");
  }
  if (target_size != shape.num_classes) {
    throw DimensionError("target has " + std::to_string(target_size) +
                         " labels, model predicts " +
                         std::to_string(shape.num_classes));
  }
  if (anchor_size != shape.num_classes) {
    throw DimensionError("anchor logits have " + std::to_string(anchor_size) +
                         " entries, model predicts " +
                         std::to_string(shape.num_classes));
  }
}

void RunForward(const ModelParams& params, std::span<const double> x,
                Workspace& ws) {
  const ModelShape& shape = params.shape();
  if (x.size() != shape.feature_dim) {
    throw DimensionError("expected " + std::to_string(shape.feature_dim) +
                         " features, got " + std::to_string(x.size()));
  }
  const double* p = params.values().data();
  const std::size_t f = shape.feature_dim;
  const std::size_t c_count = shape.num_classes;
  ws.logits.assign(c_count, 0.0);

  if (shape.hidden_units == 0) {
    const double* b = p + c_count * f;
    for (std::size_t c = 0; c < c_count; ++c) {
      double acc = b[c];
      const double* row = p + c * f;
      for (std::size_t k = 0; k < f; ++k) acc += row[k] * x[k];
      ws.logits[c] = acc;
    }
  } else {
    const std::size_t h = shape.hidden_units;
    const double* b1 = p + h * f;
    const double* w2 = b1 + h;
    const double* b2 = w2 + c_count * h;
    ws.hidden.assign(h, 0.0);
    for (std::size_t j = 0; j < h; ++j) {
      double acc = b1[j];
      const double* row = p + j * f;
      for (std::size_t k = 0; k < f; ++k) acc += row[k] * x[k];
      ws.hidden[j] = std::tanh(acc);
    }
    for (std::size_t c = 0; c < c_count; ++c) {
      double acc = b2[c];
      const double* row = w2 + c * h;
      for (std::size_t j = 0; j < h; ++j) acc += row[j] * ws.hidden[j];
      ws.logits[c] = acc;
    }
  }

  const double top = *std::max_element(ws.logits.begin(), ws.logits.end());
  double sum = 0.0;
  ws.probs.resize(c_count);
  for (std::size_t c = 0; c < c_count; ++c) {
    ws.probs[c] = std::exp(ws.logits[c] - top);
    sum += ws.probs[c];
  }
  const double log_norm = top + std::log(sum);
  ws.log_probs.resize(c_count);
  for (std::size_t c = 0; c < c_count; ++c) {
    ws.probs[c] /= sum;
    ws.log_probs[c] = ws.logits[c] - log_norm;
  }
}

// Data terms of the objective for the logits currently in `ws`.
double DataLoss(const LabelDistribution& target,
                std::span<const double> anchor_logits,
                const LocalTrainConfig& cfg, Workspace& ws) {
  double kl = 0.0;
  for (std::size_t c = 0; c < target.size(); ++c) {
    if (target[c] > 0.0) kl += target[c] * (std::log(target[c]) - ws.log_probs[c]);
  }
  double penalty = 0.0;
  switch (cfg.penalty) {
    case AnchorPenalty::kSquaredLogits:
      for (std::size_t c = 0; c < anchor_logits.size(); ++c) {
        const double diff = ws.logits[c] - anchor_logits[c];
        penalty += 0.5 * diff * diff;
      }
      break;
    case AnchorPenalty::kSoftmaxKl: {
      const std::vector<double> anchor_log_probs = LogSoftmax(anchor_logits);
      for (std::size_t c = 0; c < anchor_logits.size(); ++c) {
        const double a = std::exp(anchor_log_probs[c]);
        penalty += a * (anchor_log_probs[c] - ws.log_probs[c]);
      }
      break;
    }
  }
  return (1.0 - cfg.alpha) * kl + cfg.alpha * penalty;
}

double RegularizerLoss(const ModelParams& params,
                       const ModelParams& global_params,
                       const LocalTrainConfig& cfg) {
  double prox = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double drift = params[i] - global_params[i];
    prox += drift * drift;
    norm += params[i] * params[i];
  }
  return 0.5 * cfg.prox_mu * prox + 0.5 * cfg.weight_decay * norm;
}

// grad += scale * d(data terms)/d(params) for the pass stored in `ws`.
void AccumulateDataGrad(const ModelParams& params, std::span<const double> x,
                        const LabelDistribution& target,
                        std::span<const double> anchor_logits,
                        const LocalTrainConfig& cfg, double scale,
                        Workspace& ws, std::span<double> grad) {
  const ModelShape& shape = params.shape();
  const std::size_t c_count = shape.num_classes;
  const std::size_t f = shape.feature_dim;

  if (cfg.penalty == AnchorPenalty::kSoftmaxKl) {
    ws.anchor_probs = Softmax(anchor_logits);
  }
  ws.dlogits.resize(c_count);
  for (std::size_t c = 0; c < c_count; ++c) {
    const double penalty_grad =
        cfg.penalty == AnchorPenalty::kSquaredLogits
            ? ws.logits[c] - anchor_logits[c]
            : ws.probs[c] - ws.anchor_probs[c];
    ws.dlogits[c] = scale * ((1.0 - cfg.alpha) * (ws.probs[c] - target[c]) +
                             cfg.alpha * penalty_grad);
  }

  double* g = grad.data();
  if (shape.hidden_units == 0) {
    double* gb = g + c_count * f;
    for (std::size_t c = 0; c < c_count; ++c) {
      const double dz = ws.dlogits[c];
      double* row = g + c * f;
      for (std::size_t k = 0; k < f; ++k) row[k] += dz * x[k];
      gb[c] += dz;
    }
    return;
  }

  const std::size_t h = shape.hidden_units;
  const double* w2 = params.values().data() + h * (f + 1);
  double* gb1 = g + h * f;
  double* gw2 = gb1 + h;
  double* gb2 = gw2 + c_count * h;
  ws.dhidden.assign(h, 0.0);
  for (std::size_t c = 0; c < c_count; ++c) {
    const double dz = ws.dlogits[c];
    double* row = gw2 + c * h;
    const double* wrow = w2 + c * h;
    for (std::size_t j = 0; j < h; ++j) {
      row[j] += dz * ws.hidden[j];
      ws.dhidden[j] += dz * wrow[j];
    }
    gb2[c] += dz;
  }
  for (std::size_t j = 0; j < h; ++j) {
    const double da = ws.dhidden[j] * (1.0 - ws.hidden[j] * ws.hidden[j]);
    double* row = g + j * f;
    for (std::size_t k = 0; k < f; ++k) row[k] += da * x[k];
    gb1[j] += da;
  }
}

void AccumulateRegularizerGrad(const ModelParams& params,
                               const ModelParams& global_params,
                               const LocalTrainConfig& cfg,
                               std::span<double> grad) {
  if (cfg.prox_mu == 0.0 && cfg.weight_decay == 0.0) return;
  for (std::size_t i = 0; i < params.size(); ++i) {
    grad[i] += cfg.prox_mu * (params[i] - global_params[i]) +
               cfg.weight_decay * params[i];
  }
}

}  // namespace

double JointLoss(const ModelParams& params, const Example& example,
                 std::span<const double> anchor_logits,
                 const LocalTrainConfig& cfg, const ModelParams& global_params) {
  cfg.Validate();
  CheckShapes(params, global_params, example.target.size(),
              anchor_logits.size());
  for (double v : example.features) {
    if (!std::isfinite(v)) throw InputError("non-finite feature value");
  }
  Workspace ws;
  RunForward(params, example.features, ws);
  return DataLoss(example.target, anchor_logits, cfg, ws) +
         RegularizerLoss(params, global_params, cfg);
}

ModelParams JointGrad(const ModelParams& params, const Example& example,
                      std::span<const double> anchor_logits,
                      const LocalTrainConfig& cfg,
                      const ModelParams& global_params) {
  cfg.Validate();
  CheckShapes(params, global_params, example.target.size(),
              anchor_logits.size());
  for (double v : example.features) {
    if (!std::isfinite(v)) throw InputError("non-finite feature value");
  }
  Workspace ws;
  RunForward(params, example.features, ws);
  ModelParams grad(params.shape());
  AccumulateDataGrad(params, example.features, example.target, anchor_logits,
                     cfg, 1.0, ws, grad.values());
  AccumulateRegularizerGrad(params, global_params, cfg, grad.values());
  return grad;
}

namespace {

std::vector<std::vector<double>> AnchorLogits(const ModelParams& anchor_params,
                                              const ClientShard& shard) {
  std::vector<std::vector<double>> anchors;
  anchors.reserve(shard.examples.size());
  Workspace ws;
  for (const Example& ex : shard.examples) {
    RunForward(anchor_params, ex.features, ws);
    anchors.push_back(ws.logits);
  }
  return anchors;
}

}  // namespace

double ShardLoss(const ModelParams& params, const ModelParams& anchor_params,
                 const ClientShard& shard, const LocalTrainConfig& cfg) {
  cfg.Validate();
  if (shard.examples.empty()) {
    throw ConfigError("client " + std::to_string(shard.client_id) +
                      " has an empty shard");
  }
  const auto anchors = AnchorLogits(anchor_params, shard);
  Workspace ws;
  double total = 0.0;
  for (std::size_t j = 0; j < shard.examples.size(); ++j) {
    RunForward(params, shard.examples[j].features, ws);
    total += DataLoss(shard.examples[j].target, anchors[j], cfg, ws);
  }
  return total / static_cast<double>(shard.examples.size()) +
         RegularizerLoss(params, anchor_params, cfg);
}

ModelParams LocalTrain(const ModelParams& start_params,
                       const ModelParams& anchor_params,
                       const ClientShard& shard, const LocalTrainConfig& cfg,
                       Rng& rng) {
  cfg.Validate();
  if (shard.examples.empty()) {
    throw ConfigError("client " + std::to_string(shard.client_id) +
                      " has an empty shard");
  }
  if (!(start_params.shape() == anchor_params.shape())) {
    throw DimensionError("start and anchor parameters differ in shape");
  }
  for (const Example& ex : shard.examples) {
    CheckShapes(start_params, anchor_params, ex.target.size(),
                start_params.shape().num_classes);
  }

  ModelParams params = start_params;
  if (cfg.epochs == 0) return params;

  const auto anchors = AnchorLogits(anchor_params, shard);
  const std::size_t n = shard.examples.size();
  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
  std::vector<std::size_t> order(n);
  std::vector<double> grad(params.size());
  std::vector<double> velocity(params.size(), 0.0);
  Workspace ws;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t begin = 0; begin < n; begin += batch) {
      const std::size_t end = std::min(n, begin + batch);
      const double scale = 1.0 / static_cast<double>(end - begin);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t j = order[i];
        const Example& ex = shard.examples[j];
        RunForward(params, ex.features, ws);
        AccumulateDataGrad(params, ex.features, ex.target, anchors[j], cfg,
                           scale, ws, grad);
      }
      AccumulateRegularizerGrad(params, anchor_params, cfg, grad);
      for (std::size_t i = 0; i < grad.size(); ++i) {
        velocity[i] = cfg.momentum * velocity[i] + grad[i];
        params[i] -= cfg.learning_rate * velocity[i];
      }
    }
  }
  return params;
}

}  // namespace fedldl
