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

#include "fedldl/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fedldl/errors.h"

namespace fedldl {

std::size_t ModelShape::NumParams() const {
  if (hidden_units == 0) return num_classes * (feature_dim + 1);
  return hidden_units * (feature_dim + 1) + num_classes * (hidden_units + 1);
}

ModelParams::ModelParams(ModelShape shape)
    : shape_(shape), values_(shape.NumParams(), 0.0) {}

ModelParams::ModelParams(ModelShape shape, std::vector<double> values)
    : shape_(shape), values_(std::move(values)) {
  if (values_.size() != shape_.NumParams()) {
    throw DimensionError("parameter vector has " +
                         std::to_string(values_.size()) + " entries, shape needs " +
                         std::to_string(shape_.NumParams()));
  }
}

ModelParams ModelParams::Initial(ModelShape shape, Rng& rng) {
  ModelParams params(shape);
  if (shape.hidden_units > 0) {
    std::normal_distribution<double> normal(
        0.0, 1.0 / std::sqrt(static_cast<double>(shape.feature_dim)));
    const std::size_t first_layer = shape.hidden_units * shape.feature_dim;
    for (std::size_t i = 0; i < first_layer; ++i) params[i] = normal(rng);
  }
  return params;
}

bool ModelParams::AllFinite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

std::vector<double> LogSoftmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - top);
  const double log_norm = top + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t c = 0; c < logits.size(); ++c) out[c] = logits[c] - log_norm;
  return out;
}

std::vector<double> Softmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) {
    out[c] = std::exp(logits[c] - top);
    sum += out[c];
  }
  for (double& p : out) p /= sum;
  return out;
}

namespace {

// out = W x + b, W is rows x cols row-major starting at `w`.
void Affine(const double* w, const double* b, std::span<const double> x,
            std::size_t rows, std::vector<double>& out) {
  const std::size_t cols = x.size();
  out.assign(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w + r * cols;
    double acc = b[r];
    for (std::size_t k = 0; k < cols; ++k) acc += row[k] * x[k];
    out[r] = acc;
  }
}

}  // namespace

ForwardPass Forward(const ModelParams& params,
                    std::span<const double> features) {
  const ModelShape& shape = params.shape();
  if (features.size() != shape.feature_dim) {
    throw DimensionError("expected " + std::to_string(shape.feature_dim) +
                         " features, got " + std::to_string(features.size()));
  }
  for (double x : features) {
    if (!std::isfinite(x)) throw InputError("non-finite feature value");
  }

  const double* base = params.values().data();
  std::vector<double> hidden;
  std::vector<double> logits;
  if (shape.hidden_units == 0) {
    const double* w = base;
    const double* b = w + shape.num_classes * shape.feature_dim;
    Affine(w, b, features, shape.num_classes, logits);
  } else {
    const std::size_t h = shape.hidden_units;
    const double* w1 = base;
    const double* b1 = w1 + h * shape.feature_dim;
    const double* w2 = b1 + h;
    const double* b2 = w2 + shape.num_classes * h;
    Affine(w1, b1, features, h, hidden);
    for (double& a : hidden) a = std::tanh(a);
    Affine(w2, b2, hidden, shape.num_classes, logits);
  }

  std::vector<double> log_probs = LogSoftmax(logits);
  std::vector<double> probs = Softmax(logits);
  return ForwardPass{
      .hidden = std::move(hidden),
      .logits = std::move(logits),
      .log_probs = std::move(log_probs),
      .prediction = LabelDistribution(std::move(probs)),
  };
}

}  // namespace fedldl
