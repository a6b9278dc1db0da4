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

#ifndef FEDLDL_DATA_SYNTHESIS_H_
#define FEDLDL_DATA_SYNTHESIS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fedldl/client_shard.h"
#include "fedldl/label_distribution.h"
#include "fedldl/random.h"

namespace fedldl::data {

// Synthetic task shape, partitioning and annotation noise for one run.
struct PartitionConfig {
  int num_clients = 10;
  double dirichlet_gamma = 0.5;
  int top_k = 1;
  double noise_ratio = 0.5;  // fraction of clients annotated by the noisy pool
  int clean_annotators = 10;
  int noisy_annotators = 2;
  std::uint64_t seed = 0;

  int num_samples = 2000;
  int num_classes = 5;
  int feature_dim = 16;
  double label_concentration = 0.7;     // d_gt ~ Dirichlet(a0 * 1_C)
  double feature_noise_variance = 0.1;  // x = E d_gt + N(0, v I)

  void Validate() const;
};

struct GroundTruthExample {
  std::vector<double> features;
  LabelDistribution d_gt;
  std::vector<int> primary_labels;  // Top-K support, ascending
};

// F x C embedding, row-major, entries ~ N(0, 1).
struct FeatureEmbedding {
  std::size_t feature_dim = 0;
  std::size_t num_classes = 0;
  std::vector<double> values;

  static FeatureEmbedding Draw(std::size_t feature_dim, std::size_t num_classes,
                               Rng& rng);
  static FeatureEmbedding Identity(std::size_t dim);
};

struct GroundTruthOptions {
  double label_concentration = 0.7;
  double feature_noise_variance = 0.1;
  int top_k = 1;
};

// d_gt ~ Dirichlet(a0 * 1_C), x = E d_gt + zeta with zeta ~ N(0, v I).
std::vector<GroundTruthExample> GenerateGroundTruth(
    std::size_t n, const FeatureEmbedding& embedding,
    const GroundTruthOptions& options, Rng& rng);

// Draws a fresh N(0,1) embedding from `rng` first, then n examples with the
// default options.
std::vector<GroundTruthExample> GenerateGroundTruth(std::size_t n,
                                                    std::size_t num_classes,
                                                    std::size_t feature_dim,
                                                    Rng& rng);

inline constexpr double kVoteEpsilon = 1e-8;

// v / (||v||_1 + eps), renormalized onto the simplex.
LabelDistribution VotesToDistribution(std::span<const double> votes);

// Each of `num_annotators` experts casts one categorical vote drawn from
// d_gt; the tally goes through VotesToDistribution.
LabelDistribution SimulateFerAnnotators(const LabelDistribution& d_gt,
                                        int num_annotators, Rng& rng);

inline constexpr int kIqaLevels = 5;

// Linear-interpolation soft vote of one expert score in [1, 5] over the five
// quality levels; entry l-1 holds max(0, 1 - |score - l|).
std::vector<double> IqaSoftVote(double score);

// Experts score s + N(0, score_noise), clipped to [1, 5]; soft votes are
// summed and normalized.
LabelDistribution SimulateIqaAnnotators(double true_score, int num_annotators,
                                        Rng& rng, double score_noise = 0.5);

// Indices of the K largest entries, ties to the lower index, returned in
// ascending order.
std::vector<int> TopKSupport(const LabelDistribution& d, int k);

// Per-class Dirichlet allocation keyed on each example's lowest primary
// label. Returns one ascending index list per client; every index appears
// exactly once and no list is empty. Throws ConfigError when there are
// fewer examples than clients.
std::vector<std::vector<std::size_t>> DirichletPartition(
    std::span<const GroundTruthExample> examples, const PartitionConfig& cfg,
    Rng& rng);

// floor(noise_ratio * M) clients chosen uniformly get noisy_annotators, the
// rest clean_annotators.
std::vector<double> AssignQuality(int num_clients, const PartitionConfig& cfg,
                                  Rng& rng);

// Annotates each client's examples at its own quality. Client m draws from
// the substream (seed, kAnnotation, m).
std::vector<ClientShard> BuildClientShards(
    std::span<const GroundTruthExample> examples,
    const std::vector<std::vector<std::size_t>>& partition,
    std::span<const double> qualities, std::uint64_t seed);

struct FederatedDataset {
  FeatureEmbedding embedding;
  std::vector<ClientShard> shards;
  std::vector<GroundTruthExample> eval;  // held out, scored on latent d_gt
};

// Full pipeline: embedding, ground truth, held-out split, partition, quality
// assignment, annotation. Every stage draws from its own substream of `seed`.
FederatedDataset SynthesizeFederatedData(const PartitionConfig& cfg,
                                         double eval_fraction,
                                         std::uint64_t seed);

// Line-oriented text form: a "# fedldl-shards" header line giving the
// dimensions, then one example per line:
//   client_id q x_1..x_F target_1..target_C latent_1..latent_C
void WriteShards(std::ostream& out, std::span<const ClientShard> shards);
std::vector<ClientShard> ReadShards(std::istream& in);

}  // namespace fedldl::data

#endif  // FEDLDL_DATA_SYNTHESIS_H_
