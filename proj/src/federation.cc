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

#include "fedldl/federation.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include <fmt/format.h>

#include "fedldl/errors.h"

namespace fedldl {

std::string_view AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kFedQual:
      return "fedqual";
    case Algorithm::kFedAvg:
      return "fedavg";
    case Algorithm::kFedProx:
      return "fedprox";
    case Algorithm::kFedQAgg:
      return "fedqagg";
    case Algorithm::kFedQRect:
      return "fedqrect";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kFedQual, Algorithm::kFedAvg,
                      Algorithm::kFedProx, Algorithm::kFedQAgg,
                      Algorithm::kFedQRect}) {
    if (AlgorithmName(a) == name) return a;
  }
  throw ConfigError(fmt::format("unknown algorithm '{}'", name));
}

AlgorithmProfile ProfileFor(Algorithm algorithm, double fedprox_mu) {
  using aggregation::ServerMode;
  switch (algorithm) {
    case Algorithm::kFedAvg:
      return {false, ServerMode::kFedAvg, 0.0};
    case Algorithm::kFedProx:
      return {false, ServerMode::kFedAvg, fedprox_mu};
    case Algorithm::kFedQAgg:
      return {false, ServerMode::kQualityOnly, 0.0};
    case Algorithm::kFedQRect:
      return {true, ServerMode::kFedAvg, 0.0};
    case Algorithm::kFedQual:
      return {true, ServerMode::kFedQual, 0.0};
  }
  throw ConfigError("unknown algorithm");
}

void FederationConfig::Validate() const {
  if (rounds < 0) throw ConfigError("rounds must be >= 0");
  if (!(participation > 0.0 && participation <= 1.0)) {
    throw ConfigError("participation must be in (0, 1]");
  }
  if (!(fedprox_mu >= 0.0)) throw ConfigError("fedprox_mu must be >= 0");
  if (hidden_units < 0) throw ConfigError("hidden_units must be >= 0");
  if (alpha_override && !(*alpha_override >= 0.0 && *alpha_override <= 1.0)) {
    throw ConfigError("alpha_override must be in [0, 1]");
  }
  if (!(eval_fraction > 0.0 && eval_fraction < 1.0)) {
    throw ConfigError("eval_fraction must be in (0, 1)");
  }
  if (aggregation.anneal_warmup_rounds < 0) {
    throw ConfigError("anneal_warmup_rounds must be >= 0 (0 = rounds / 2)");
  }
  local.Validate();
  calibration.Validate();
  ResolvedAggregation().Validate();
  data.Validate();
}

aggregation::AggregationConfig FederationConfig::ResolvedAggregation() const {
  aggregation::AggregationConfig agg = aggregation;
  agg.mode = ProfileFor(algorithm, fedprox_mu).server_mode;
  if (agg.anneal_warmup_rounds == 0) {
    agg.anneal_warmup_rounds = std::max(1, rounds / 2);
  }
  return agg;
}

ModelShape FederationConfig::Shape() const {
  return ModelShape{static_cast<std::size_t>(data.num_classes),
                    static_cast<std::size_t>(data.feature_dim),
                    static_cast<std::size_t>(hidden_units)};
}

std::vector<int> SelectClients(int num_clients, double rho_online, Rng& rng) {
  if (num_clients < 1) throw ConfigError("num_clients must be >= 1");
  if (!(rho_online > 0.0 && rho_online <= 1.0)) {
    throw ConfigError("participation must be in (0, 1]");
  }
  std::vector<int> all(static_cast<std::size_t>(num_clients));
  for (int i = 0; i < num_clients; ++i) all[i] = i;
  if (rho_online == 1.0) return all;
  // The tolerance keeps 0.7 * 10 = 7.000000000000001 from rounding up to 8.
  const auto count = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(rho_online * num_clients - 1e-9)), 1,
      all.size());
  std::vector<int> chosen;
  chosen.reserve(count);
  std::sample(all.begin(), all.end(), std::back_inserter(chosen), count, rng);
  return chosen;
}

std::vector<int> SelectClientsForRound(int num_clients, double rho_online,
                                       int round, std::uint64_t master_seed) {
  Rng rng = MakeStream(master_seed, StreamTag::kSelection,
                       static_cast<std::uint64_t>(round));
  return SelectClients(num_clients, rho_online, rng);
}

std::uint64_t DataSeed(const FederationConfig& cfg) {
  Rng rng = MakeStream(cfg.master_seed, StreamTag::kData, cfg.data.seed);
  return rng();
}

metrics::MetricReport EvaluateModel(
    const ModelParams& model, std::span<const data::GroundTruthExample> eval) {
  metrics::MetricAverager avg;
  for (const data::GroundTruthExample& ex : eval) {
    avg.Add(metrics::Evaluate(ex.d_gt, Forward(model, ex.features).prediction));
  }
  return avg.Mean();
}

FederationResult RunFederation(const FederationConfig& cfg,
                               const RunOptions& options) {
  cfg.Validate();
  const data::FederatedDataset dataset =
      data::SynthesizeFederatedData(cfg.data, cfg.eval_fraction, DataSeed(cfg));
  return RunFederation(cfg, dataset, options);
}

namespace {

struct ClientJob {
  int client_id = 0;
  LocalTrainConfig local;
  ModelParams trained;
  double loss = 0.0;
  std::exception_ptr error;
};

void TrainClient(const ModelParams& global, const ClientShard& shard, int round,
                 std::uint64_t master_seed, ClientJob& job) {
  try {
    Rng rng = MakeStream(master_seed, StreamTag::kLocalTraining,
                         static_cast<std::uint64_t>(job.client_id),
                         static_cast<std::uint64_t>(round));
    job.trained = LocalTrain(global, global, shard, job.local, rng);
    job.loss = ShardLoss(job.trained, global, shard, job.local);
  } catch (...) {
    job.error = std::current_exception();
  }
}

}  // namespace

FederationResult RunFederation(const FederationConfig& cfg,
                               const data::FederatedDataset& dataset,
                               const RunOptions& options) {
  cfg.Validate();
  const int m = static_cast<int>(dataset.shards.size());
  if (m != cfg.data.num_clients) {
    throw ConfigError("dataset client count does not match the config");
  }
  const AlgorithmProfile profile = ProfileFor(cfg.algorithm, cfg.fedprox_mu);
  const aggregation::AggregationConfig agg = cfg.ResolvedAggregation();

  // Per-client local settings are fixed for the run: q is static.
  std::vector<LocalTrainConfig> local(static_cast<std::size_t>(m), cfg.local);
  for (int id = 0; id < m; ++id) {
    LocalTrainConfig& lc = local[id];
    lc.prox_mu = profile.prox_mu;
    if (cfg.alpha_override) {
      lc.alpha = *cfg.alpha_override;
    } else if (profile.uses_calibration) {
      lc.alpha = calibration::ComputeAlpha(dataset.shards[id].quality,
                                           cfg.calibration);
    } else {
      lc.alpha = 0.0;
    }
  }

  FederationResult result;
  result.num_clients = m;
  Rng init_rng = MakeStream(cfg.master_seed, StreamTag::kModelInit);
  result.initial_model = ModelParams::Initial(cfg.Shape(), init_rng);
  ModelParams global = result.initial_model;

  const int workers = std::max(1, options.workers);
  for (int t = 0; t < cfg.rounds; ++t) {
    const auto start = std::chrono::steady_clock::now();
    RoundReport report;
    report.round = t;
    report.selected =
        SelectClientsForRound(m, cfg.participation, t, cfg.master_seed);

    // One slot per selected client, in ascending id order.
    std::vector<ClientJob> jobs(report.selected.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      jobs[i].client_id = report.selected[i];
      jobs[i].local = local[report.selected[i]];
    }
    if (workers == 1 || jobs.size() == 1) {
      for (ClientJob& job : jobs) {
        TrainClient(global, dataset.shards[job.client_id], t, cfg.master_seed,
                    job);
      }
    } else {
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
          TrainClient(global, dataset.shards[jobs[i].client_id], t,
                      cfg.master_seed, jobs[i]);
        }
      };
      std::vector<std::jthread> pool;
      const int spawn = std::min<int>(workers, static_cast<int>(jobs.size()));
      for (int w = 0; w < spawn; ++w) pool.emplace_back(worker);
    }
    for (const ClientJob& job : jobs) {
      if (job.error) std::rethrow_exception(job.error);
    }

    std::vector<aggregation::ClientSummary> summaries;
    summaries.reserve(jobs.size());
    for (ClientJob& job : jobs) {
      const ClientShard& shard = dataset.shards[job.client_id];
      summaries.push_back({job.client_id, shard.sample_count(), shard.quality,
                           std::move(job.trained)});
      report.alphas.push_back(job.local.alpha);
      report.local_losses.push_back(job.loss);
    }
    report.rho = aggregation::EffectiveRho(t, agg);
    report.weights =
        aggregation::RoundWeights(summaries, t, agg, &report.warnings);
    global = aggregation::Aggregate(summaries, report.weights);
    if (!global.AllFinite()) {
      throw InputError(fmt::format("global model diverged in round {}", t));
    }

    report.metrics = EvaluateModel(global, dataset.eval);
    report.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    if (options.keep_trajectory) result.trajectory.push_back(global);
    result.reports.push_back(std::move(report));
  }
  result.final_model = std::move(global);
  return result;
}

}  // namespace fedldl
