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
#include <limits>
#include <numeric>

#include "fedldl/errors.h"

namespace fedldl::aggregation {

void AggregationConfig::Validate() const {
  if (!(gamma_temp > 0.0)) throw ConfigError("gamma_temp must be > 0");
  if (anneal_warmup_rounds < 1) {
    throw ConfigError("anneal_warmup_rounds must be >= 1");
  }
  if (!(constant_rho >= 0.0 && constant_rho <= 1.0)) {
    throw ConfigError("constant_rho must be in [0, 1]");
  }
}

double EffectiveInfo(std::size_t sample_count, double quality) {
  if (!(quality >= 0.0)) throw InputError("quality must be >= 0");
  return static_cast<double>(sample_count) * quality;
}

double AnnealedScore(std::size_t sample_count, double quality, double rho) {
  if (!(quality >= 0.0)) throw InputError("quality must be >= 0");
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must be in [0, 1]");
  const double n = static_cast<double>(sample_count);
  if (rho == 1.0) return n;
  if (quality == 0.0) return 0.0;
  return n * std::pow(quality, 1.0 - rho);
}

double AnnealSchedule(int round, const AggregationConfig& cfg) {
  cfg.Validate();
  if (round < 0) throw DomainError("round index must be >= 0");
  switch (cfg.schedule) {
    case AnnealKind::kConstant:
      return cfg.constant_rho;
    case AnnealKind::kLinear:
      break;
  }
  return std::min(1.0, static_cast<double>(round) /
                           static_cast<double>(cfg.anneal_warmup_rounds));
}

double EffectiveRho(int round, const AggregationConfig& cfg) {
  switch (cfg.mode) {
    case ServerMode::kFedAvg:
      return 1.0;
    case ServerMode::kQualityOnly:
      return 0.0;
    case ServerMode::kFedQual:
      break;
  }
  return AnnealSchedule(round, cfg);
}

std::vector<double> SoftWeights(std::span<const double> scores, double gamma,
                                std::vector<std::string>* warnings) {
  if (scores.empty()) throw DimensionError("no scores to normalize");
  if (!(gamma > 0.0)) throw DomainError("gamma must be > 0");
  for (double s : scores) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw InputError("scores must be finite and >= 0");
    }
  }
  const std::size_t m = scores.size();
  std::vector<double> weights(m, 0.0);
  if (std::all_of(scores.begin(), scores.end(),
                  [](double s) { return s == 0.0; })) {
    if (warnings != nullptr) {
      warnings->push_back("all aggregation scores are zero; using uniform weights");
    }
    std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(m));
    return weights;
  }

  if (gamma == 1.0) {
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    if (std::isfinite(total)) {
      for (std::size_t i = 0; i < m; ++i) weights[i] = scores[i] / total;
      return weights;
    }
  }

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> logits(m);
  double top = kNegInf;
  for (std::size_t i = 0; i < m; ++i) {
    logits[i] = scores[i] > 0.0 ? gamma * std::log(scores[i]) : kNegInf;
    top = std::max(top, logits[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    weights[i] = logits[i] == kNegInf ? 0.0 : std::exp(logits[i] - top);
    total += weights[i];
  }
  for (double& w : weights) w /= total;
  return weights;
}

ModelParams Aggregate(std::span<const ClientSummary> summaries,
                      std::span<const double> weights) {
  if (summaries.empty()) throw DimensionError("nothing to aggregate");
  if (summaries.size() != weights.size()) {
    throw DimensionError("aggregation weights do not match client count");
  }
  const ModelShape& shape = summaries.front().params.shape();
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    if (!(summaries[i].params.shape() == shape) ||
        summaries[i].params.size() != shape.NumParams()) {
      throw DimensionError("client parameter shapes differ");
    }
    if (!(weights[i] >= 0.0)) throw InputError("negative aggregation weight");
    weight_sum += weights[i];
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw InputError("aggregation weights sum to " + std::to_string(weight_sum));
  }

  std::vector<std::size_t> order(summaries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return summaries[a].client_id < summaries[b].client_id;
  });

  ModelParams out(shape);
  for (std::size_t idx : order) {
    const double w = weights[idx];
    const auto src = summaries[idx].params.values();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * src[k];
  }
  return out;
}

std::vector<double> RoundWeights(std::span<const ClientSummary> summaries,
                                 int round, const AggregationConfig& cfg,
                                 std::vector<std::string>* warnings) {
  cfg.Validate();
  if (summaries.empty()) throw DimensionError("no clients this round");
  for (const ClientSummary& s : summaries) {
    if (s.sample_count == 0) throw InputError("client with zero samples");
  }

  if (cfg.mode == ServerMode::kFedAvg) {
    double total = 0.0;
    for (const ClientSummary& s : summaries) {
      total += static_cast<double>(s.sample_count);
    }
    std::vector<double> weights;
    weights.reserve(summaries.size());
    for (const ClientSummary& s : summaries) {
      weights.push_back(static_cast<double>(s.sample_count) / total);
    }
    return weights;
  }

  const double rho = EffectiveRho(round, cfg);
  std::vector<double> scores;
  scores.reserve(summaries.size());
  for (const ClientSummary& s : summaries) {
    scores.push_back(AnnealedScore(s.sample_count, s.quality, rho));
    if (s.quality == 0.0 && rho < 1.0 && warnings != nullptr) {
      warnings->push_back("client " + std::to_string(s.client_id) +
                          " has zero quality and receives zero weight");
    }
  }
  return SoftWeights(scores, cfg.gamma_temp, warnings);
}

}  // namespace fedldl::aggregation
