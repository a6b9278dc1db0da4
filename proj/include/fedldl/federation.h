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

#ifndef FEDLDL_FEDERATION_H_
#define FEDLDL_FEDERATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedldl/aggregation.h"
#include "fedldl/calibration.h"
#include "fedldl/data_synthesis.h"
#include "fedldl/local_learner.h"
#include "fedldl/metrics.h"
#include "fedldl/model.h"
#include "fedldl/random.h"

namespace fedldl {

enum class Algorithm { kFedQual, kFedAvg, kFedProx, kFedQAgg, kFedQRect };

std::string_view AlgorithmName(Algorithm algorithm);
// Throws ConfigError for an unknown name.
Algorithm ParseAlgorithm(std::string_view name);

// The switches that distinguish the supported algorithms.
struct AlgorithmProfile {
  bool uses_calibration = false;
  aggregation::ServerMode server_mode = aggregation::ServerMode::kFedAvg;
  double prox_mu = 0.0;
};

// fedavg:   plain local KL, sample-size weights.
// fedprox:  fedavg plus a proximal term with coefficient `fedprox_mu`.
// fedqagg:  plain local KL, quality-weighted server (annealing pinned off).
// fedqrect: quality-calibrated local objective, sample-size weights.
// fedqual:  quality-calibrated local objective, annealed quality weights.
AlgorithmProfile ProfileFor(Algorithm algorithm, double fedprox_mu = 0.01);

struct FederationConfig {
  int rounds = 100;
  double participation = 1.0;  // rho_online in (0, 1]
  Algorithm algorithm = Algorithm::kFedQual;
  LocalTrainConfig local;       // alpha/prox_mu are filled per client
  double fedprox_mu = 0.01;
  int hidden_units = 0;         // 0: linear-softmax predictor
  calibration::CalibrationConfig calibration;
  // Pins alpha for every client when set (ablations).
  std::optional<double> alpha_override;
  // mode is taken from the algorithm; anneal_warmup_rounds = 0 means
  // max(1, rounds / 2).
  aggregation::AggregationConfig aggregation{.anneal_warmup_rounds = 0};
  data::PartitionConfig data;
  double eval_fraction = 0.2;
  std::uint64_t master_seed = 0;

  // Throws ConfigError on any invalid field.
  void Validate() const;
  // Aggregation settings with the mode and default warm-up filled in.
  aggregation::AggregationConfig ResolvedAggregation() const;
  ModelShape Shape() const;
};

struct RoundReport {
  int round = 0;
  std::vector<int> selected;           // ascending client ids
  std::vector<double> weights;         // aligned with `selected`
  std::vector<double> alphas;          // calibration weight per selected client
  std::vector<double> local_losses;    // final local objective per client
  double rho = 0.0;
  metrics::MetricReport metrics;       // global model vs latent d_gt
  double seconds = 0.0;
  std::vector<std::string> warnings;
};

struct RunOptions {
  int workers = 1;
  bool keep_trajectory = false;
};

struct FederationResult {
  int num_clients = 0;
  std::vector<RoundReport> reports;
  ModelParams initial_model;
  ModelParams final_model;
  // Global parameters after each round when RunOptions::keep_trajectory.
  std::vector<ModelParams> trajectory;
};

// ceil(rho_online * M) distinct client ids, ascending. All clients when
// rho_online == 1.
std::vector<int> SelectClients(int num_clients, double rho_online, Rng& rng);

// Selection for round t of a run seeded with `master_seed`.
std::vector<int> SelectClientsForRound(int num_clients, double rho_online,
                                       int round, std::uint64_t master_seed);

// Seed handed to the data pipeline; mixes the master seed with data.seed.
std::uint64_t DataSeed(const FederationConfig& cfg);

// Mean metrics of `model` on the held-out examples.
metrics::MetricReport EvaluateModel(const ModelParams& model,
                                    std::span<const data::GroundTruthExample> eval);

// Synthesizes the data and runs cfg.rounds rounds. Results do not depend on
// options.workers.
FederationResult RunFederation(const FederationConfig& cfg,
                               const RunOptions& options = {});

// Same, on an already synthesized dataset.
FederationResult RunFederation(const FederationConfig& cfg,
                               const data::FederatedDataset& dataset,
                               const RunOptions& options = {});

}  // namespace fedldl

#endif  // FEDLDL_FEDERATION_H_
