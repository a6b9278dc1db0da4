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

#ifndef FEDLDL_MODEL_H_
#define FEDLDL_MODEL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fedldl/label_distribution.h"
#include "fedldl/random.h"

namespace fedldl {

struct ModelShape {
  std::size_t num_classes = 0;   // C
  std::size_t feature_dim = 0;   // F
  std::size_t hidden_units = 0;  // H; 0 selects the plain linear-softmax model

  std::size_t NumParams() const;
  bool operator==(const ModelShape&) const = default;
};

// Weights of the softmax predictor, stored flat so that aggregation,
// momentum and decay are plain vector arithmetic.
//
// Layout without a hidden layer:  [W (C x F, row-major) | b (C)]
// Layout with H hidden units:     [W1 (H x F) | b1 (H) | W2 (C x H) | b2 (C)]
class ModelParams {
 public:
  ModelParams() = default;
  explicit ModelParams(ModelShape shape);  // all zeros
  ModelParams(ModelShape shape, std::vector<double> values);

  // Zeros for the linear model. With a hidden layer the first layer gets
  // N(0, 1/F) entries so the tanh units are not all identical.
  static ModelParams Initial(ModelShape shape, Rng& rng);

  const ModelShape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool AllFinite() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  ModelShape shape_;
  std::vector<double> values_;
};

// One supervised example.
struct Example {
  std::vector<double> features;
  LabelDistribution target;
};

// Intermediate values of one forward pass, kept for backpropagation.
struct ForwardPass {
  std::vector<double> hidden;  // tanh activations; empty for the linear model
  std::vector<double> logits;
  std::vector<double> log_probs;
  LabelDistribution prediction;
};

// logits = f(x; params), prediction = softmax(logits) computed with the max
// logit subtracted. Throws InputError on non-finite features and
// DimensionError on a feature-length mismatch.
ForwardPass Forward(const ModelParams& params, std::span<const double> features);

// Softmax and log-softmax of a logit vector (stabilized).
std::vector<double> Softmax(std::span<const double> logits);
std::vector<double> LogSoftmax(std::span<const double> logits);

}  // namespace fedldl

#endif  // FEDLDL_MODEL_H_
