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

#ifndef FEDLDL_AGGREGATION_H_
#define FEDLDL_AGGREGATION_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fedldl/model.h"

namespace fedldl::aggregation {

enum class ServerMode {
  kFedQual,      // annealed quality-aware soft weights
  kFedAvg,       // sample-size weights
  kQualityOnly,  // soft weights on N * q with the annealing factor pinned to 0
};

enum class AnnealKind {
  kLinear,    // rho_t = min(1, t / warmup)
  kConstant,  // rho_t = constant_rho for every round (ablations)
};

struct AggregationConfig {
  double gamma_temp = 1.0;
  int anneal_warmup_rounds = 1;
  ServerMode mode = ServerMode::kFedQual;
  AnnealKind schedule = AnnealKind::kLinear;
  double constant_rho = 1.0;

  void Validate() const;
};

struct ClientSummary {
  int client_id = 0;
  std::size_t sample_count = 0;
  double quality = 0.0;
  ModelParams params;
};

// S = N * q.
double EffectiveInfo(std::size_t sample_count, double quality);

// S^(1 - rho) * N^rho = N * q^(1 - rho). A zero-quality client scores 0 for
// rho < 1.
double AnnealedScore(std::size_t sample_count, double quality, double rho);

// Trust-annealing factor for round t (t >= 0).
double AnnealSchedule(int round, const AggregationConfig& cfg);

// w_m = s_m^gamma / sum_j s_j^gamma. For gamma != 1 this is evaluated as a
// stabilized softmax of gamma * ln s. Zero scores get zero weight. If every
// score is zero the result is uniform and a message is appended to
// `warnings` (when non-null).
std::vector<double> SoftWeights(std::span<const double> scores, double gamma,
                                std::vector<std::string>* warnings = nullptr);

// Elementwise sum_m w_m * params_m, accumulated in ascending client-id order
// whatever the order of `summaries`. Throws DimensionError on shape or length
// mismatch and InputError when the weights are negative or do not sum to 1
// within 1e-9.
ModelParams Aggregate(std::span<const ClientSummary> summaries,
                      std::span<const double> weights);

// Aggregation weights for round t under cfg.mode, aligned with `summaries`.
std::vector<double> RoundWeights(std::span<const ClientSummary> summaries,
                                 int round, const AggregationConfig& cfg,
                                 std::vector<std::string>* warnings = nullptr);

// The annealing factor actually in force for a mode: the schedule for
// kFedQual, 0 for kQualityOnly, 1 for kFedAvg.
double EffectiveRho(int round, const AggregationConfig& cfg);

}  // namespace fedldl::aggregation

#endif  // FEDLDL_AGGREGATION_H_
