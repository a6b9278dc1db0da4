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

#include "fedldl/data_synthesis.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "fedldl/errors.h"

namespace fedldl::data {

void PartitionConfig::Validate() const {
  if (num_clients < 1) throw ConfigError("num_clients must be >= 1");
  if (!(dirichlet_gamma > 0.0)) throw ConfigError("dirichlet_gamma must be > 0");
  if (num_classes < 2) throw ConfigError("num_classes must be >= 2");
  if (top_k < 1 || top_k > num_classes) {
    throw ConfigError("top_k must be in [1, num_classes]");
  }
  if (!(noise_ratio >= 0.0 && noise_ratio <= 1.0)) {
    throw ConfigError("noise_ratio must be in [0, 1]");
  }
  if (clean_annotators < 1 || noisy_annotators < 1) {
    throw ConfigError("annotator counts must be >= 1");
  }
  if (num_samples < 1) throw ConfigError("num_samples must be >= 1");
  if (feature_dim < 1) throw ConfigError("feature_dim must be >= 1");
  if (!(label_concentration > 0.0)) {
    throw ConfigError("label_concentration must be > 0");
  }
  if (!(feature_noise_variance >= 0.0)) {
    throw ConfigError("feature_noise_variance must be >= 0");
  }
}

FeatureEmbedding FeatureEmbedding::Draw(std::size_t feature_dim,
                                        std::size_t num_classes, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  FeatureEmbedding e{feature_dim, num_classes,
                     std::vector<double>(feature_dim * num_classes)};
  for (double& v : e.values) v = normal(rng);
  return e;
}

FeatureEmbedding FeatureEmbedding::Identity(std::size_t dim) {
  FeatureEmbedding e{dim, dim, std::vector<double>(dim * dim, 0.0)};
  for (std::size_t i = 0; i < dim; ++i) e.values[i * dim + i] = 1.0;
  return e;
}

std::vector<GroundTruthExample> GenerateGroundTruth(
    std::size_t n, const FeatureEmbedding& embedding,
    const GroundTruthOptions& options, Rng& rng) {
  const std::size_t c_count = embedding.num_classes;
  const std::size_t f = embedding.feature_dim;
  if (c_count < 2) throw ConfigError("need at least two classes");
  if (options.top_k < 1 || options.top_k > static_cast<int>(c_count)) {
    throw ConfigError("top_k must be in [1, C]");
  }
  std::normal_distribution<double> noise(
      0.0, std::sqrt(options.feature_noise_variance));
  const bool noiseless = options.feature_noise_variance == 0.0;

  std::vector<GroundTruthExample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    LabelDistribution d(
        SampleSymmetricDirichlet(c_count, options.label_concentration, rng));
    std::vector<double> x(f, 0.0);
    for (std::size_t r = 0; r < f; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < c_count; ++c) {
        acc += embedding.values[r * c_count + c] * d[c];
      }
      x[r] = noiseless ? acc : acc + noise(rng);
    }
    std::vector<int> support = TopKSupport(d, options.top_k);
    out.push_back({std::move(x), std::move(d), std::move(support)});
  }
  return out;
}

std::vector<GroundTruthExample> GenerateGroundTruth(std::size_t n,
                                                    std::size_t num_classes,
                                                    std::size_t feature_dim,
                                                    Rng& rng) {
  const FeatureEmbedding embedding =
      FeatureEmbedding::Draw(feature_dim, num_classes, rng);
  return GenerateGroundTruth(n, embedding, GroundTruthOptions{}, rng);
}

LabelDistribution VotesToDistribution(std::span<const double> votes) {
  double l1 = 0.0;
  for (double v : votes) {
    if (!(v >= 0.0)) throw InputError("vote counts must be >= 0");
    l1 += v;
  }
  std::vector<double> d(votes.begin(), votes.end());
  for (double& v : d) v /= l1 + kVoteEpsilon;
  return LabelDistribution::Normalized(std::move(d));
}

LabelDistribution SimulateFerAnnotators(const LabelDistribution& d_gt,
                                        int num_annotators, Rng& rng) {
  if (num_annotators < 1) throw InputError("need at least one annotator");
  std::discrete_distribution<std::size_t> vote(d_gt.values().begin(),
                                               d_gt.values().end());
  std::vector<double> tally(d_gt.size(), 0.0);
  for (int a = 0; a < num_annotators; ++a) tally[vote(rng)] += 1.0;
  return VotesToDistribution(tally);
}

std::vector<double> IqaSoftVote(double score) {
  if (!(score >= 1.0 && score <= 5.0)) {
    throw InputError("IQA score must lie in [1, 5]");
  }
  std::vector<double> vote(kIqaLevels, 0.0);
  for (int level = 1; level <= kIqaLevels; ++level) {
    const double gap = std::abs(score - static_cast<double>(level));
    if (gap < 1.0) vote[level - 1] = 1.0 - gap;
  }
  return vote;
}

LabelDistribution SimulateIqaAnnotators(double true_score, int num_annotators,
                                        Rng& rng, double score_noise) {
  if (num_annotators < 1) throw InputError("need at least one annotator");
  if (!(true_score >= 1.0 && true_score <= 5.0)) {
    throw InputError("IQA score must lie in [1, 5]");
  }
  std::vector<double> total(kIqaLevels, 0.0);
  std::normal_distribution<double> jitter(0.0, score_noise);
  for (int a = 0; a < num_annotators; ++a) {
    const double s =
        score_noise > 0.0 ? std::clamp(true_score + jitter(rng), 1.0, 5.0)
                          : true_score;
    const std::vector<double> vote = IqaSoftVote(s);
    for (int l = 0; l < kIqaLevels; ++l) total[l] += vote[l];
  }
  return LabelDistribution::Normalized(std::move(total));
}

std::vector<int> TopKSupport(const LabelDistribution& d, int k) {
  if (k < 1 || k > static_cast<int>(d.size())) {
    throw InputError("K must be in [1, C]");
  }
  std::vector<int> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return d[a] > d[b]; });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

namespace {

// Splits `total` items by `proportions` with largest-remainder rounding; ties
// on the remainder go to the lower index.
std::vector<std::size_t> LargestRemainder(std::size_t total,
                                          std::span<const double> proportions) {
  const std::size_t m = proportions.size();
  std::vector<std::size_t> counts(m);
  std::vector<double> remainder(m);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double exact = static_cast<double>(total) * proportions[i];
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  // Floors can only undercount; guard against a proportion vector whose sum
  // rounds a hair above 1.
  for (std::size_t i = 0; assigned < total; i = (i + 1) % m) {
    ++counts[order[i]];
    ++assigned;
  }
  while (assigned > total) {
    auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --assigned;
  }
  return counts;
}

}  // namespace

std::vector<std::vector<std::size_t>> DirichletPartition(
    std::span<const GroundTruthExample> examples, const PartitionConfig& cfg,
    Rng& rng) {
  if (cfg.num_clients < 1) throw ConfigError("num_clients must be >= 1");
  if (!(cfg.dirichlet_gamma > 0.0)) {
    throw ConfigError("dirichlet_gamma must be > 0");
  }
  const std::size_t m = static_cast<std::size_t>(cfg.num_clients);
  if (examples.size() < m) {
    throw ConfigError(fmt::format("{} examples cannot fill {} clients",
                                  examples.size(), m));
  }

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].primary_labels.empty()) {
      throw InputError("example without primary labels");
    }
    by_class[examples[i].primary_labels.front()].push_back(i);
  }

  std::vector<std::vector<std::size_t>> clients(m);
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    const std::vector<double> share =
        SampleSymmetricDirichlet(m, cfg.dirichlet_gamma, rng);
    const std::vector<std::size_t> counts =
        LargestRemainder(members.size(), share);
    std::size_t cursor = 0;
    for (std::size_t client = 0; client < m; ++client) {
      for (std::size_t k = 0; k < counts[client]; ++k) {
        clients[client].push_back(members[cursor++]);
      }
    }
  }

  for (std::size_t client = 0; client < m; ++client) {
    while (clients[client].empty()) {
      auto largest = std::max_element(
          clients.begin(), clients.end(),
          [](const auto& a, const auto& b) { return a.size() < b.size(); });
      clients[client].push_back(largest->back());
      largest->pop_back();
    }
  }
  for (auto& list : clients) std::sort(list.begin(), list.end());
  return clients;
}

std::vector<double> AssignQuality(int num_clients, const PartitionConfig& cfg,
                                  Rng& rng) {
  if (num_clients < 1) throw ConfigError("num_clients must be >= 1");
  const auto noisy_count = static_cast<std::size_t>(
      std::floor(cfg.noise_ratio * num_clients + 1e-9));
  std::vector<int> ids(static_cast<std::size_t>(num_clients));
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<int> noisy;
  std::sample(ids.begin(), ids.end(), std::back_inserter(noisy), noisy_count,
              rng);
  std::vector<double> quality(ids.size(),
                              static_cast<double>(cfg.clean_annotators));
  for (int id : noisy) quality[id] = static_cast<double>(cfg.noisy_annotators);
  return quality;
}

std::vector<ClientShard> BuildClientShards(
    std::span<const GroundTruthExample> examples,
    const std::vector<std::vector<std::size_t>>& partition,
    std::span<const double> qualities, std::uint64_t seed) {
  if (partition.size() != qualities.size()) {
    throw DimensionError("partition and quality lists differ in length");
  }
  std::vector<ClientShard> shards(partition.size());
  for (std::size_t m = 0; m < partition.size(); ++m) {
    const double q = qualities[m];
    const double annotators = std::round(q);
    if (annotators < 1.0 || annotators != q) {
      throw ConfigError(fmt::format(
          "client {} quality {} is not a positive annotator count", m, q));
    }
    Rng rng = MakeStream(seed, StreamTag::kAnnotation, m);
    ClientShard& shard = shards[m];
    shard.client_id = static_cast<int>(m);
    shard.quality = q;
    shard.examples.reserve(partition[m].size());
    shard.latent.reserve(partition[m].size());
    for (std::size_t idx : partition[m]) {
      const GroundTruthExample& gt = examples[idx];
      shard.examples.push_back(
          {gt.features,
           SimulateFerAnnotators(gt.d_gt, static_cast<int>(annotators), rng)});
      shard.latent.push_back(gt.d_gt);
    }
  }
  return shards;
}

FederatedDataset SynthesizeFederatedData(const PartitionConfig& cfg,
                                         double eval_fraction,
                                         std::uint64_t seed) {
  cfg.Validate();
  if (!(eval_fraction > 0.0 && eval_fraction < 1.0)) {
    throw ConfigError("eval_fraction must be in (0, 1)");
  }
  const auto n = static_cast<std::size_t>(cfg.num_samples);
  const auto eval_count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(eval_fraction * n)));
  if (n < eval_count + static_cast<std::size_t>(cfg.num_clients)) {
    throw ConfigError(fmt::format(
        "{} samples leave fewer training examples than the {} clients", n,
        cfg.num_clients));
  }

  FederatedDataset out;
  Rng embed_rng = MakeStream(seed, StreamTag::kEmbedding);
  out.embedding = FeatureEmbedding::Draw(static_cast<std::size_t>(cfg.feature_dim),
                                         static_cast<std::size_t>(cfg.num_classes),
                                         embed_rng);
  Rng gt_rng = MakeStream(seed, StreamTag::kGroundTruth);
  std::vector<GroundTruthExample> all = GenerateGroundTruth(
      n, out.embedding,
      GroundTruthOptions{cfg.label_concentration, cfg.feature_noise_variance,
                         cfg.top_k},
      gt_rng);

  Rng split_rng = MakeStream(seed, StreamTag::kEvalSplit);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), split_rng);
  std::vector<std::size_t> eval_idx(order.begin(), order.begin() + eval_count);
  std::sort(eval_idx.begin(), eval_idx.end());
  std::vector<bool> is_eval(n, false);
  for (std::size_t i : eval_idx) is_eval[i] = true;

  std::vector<GroundTruthExample> train;
  train.reserve(n - eval_count);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_eval[i]) {
      out.eval.push_back(all[i]);
    } else {
      train.push_back(all[i]);
    }
  }

  Rng part_rng = MakeStream(seed, StreamTag::kPartition);
  const auto partition = DirichletPartition(train, cfg, part_rng);
  Rng quality_rng = MakeStream(seed, StreamTag::kQuality);
  const std::vector<double> quality =
      AssignQuality(cfg.num_clients, cfg, quality_rng);
  out.shards = BuildClientShards(train, partition, quality, seed);
  return out;
}

void WriteShards(std::ostream& out, std::span<const ClientShard> shards) {
  std::size_t classes = 0, features = 0;
  for (const ClientShard& s : shards) {
    if (!s.examples.empty()) {
      classes = s.examples.front().target.size();
      features = s.examples.front().features.size();
      break;
    }
  }
  out << fmt::format("# fedldl-shards v1 clients={} classes={} features={}\n",
                     shards.size(), classes, features);
  std::string line;
  for (const ClientShard& s : shards) {
    for (std::size_t j = 0; j < s.examples.size(); ++j) {
      const Example& ex = s.examples[j];
      line = fmt::format("{} {:.17g}", s.client_id, s.quality);
      for (double x : ex.features) fmt::format_to(std::back_inserter(line), " {:.17g}", x);
      for (double t : ex.target.values()) fmt::format_to(std::back_inserter(line), " {:.17g}", t);
      for (double g : s.latent.at(j).values()) fmt::format_to(std::back_inserter(line), " {:.17g}", g);
      line.push_back('\n');
      out << line;
    }
  }
}

std::vector<ClientShard> ReadShards(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw InputError("empty shard file");
  std::size_t clients = 0, classes = 0, features = 0;
  if (std::sscanf(header.c_str(),
                  "# fedldl-shards v1 clients=%zu classes=%zu features=%zu",
                  &clients, &classes, &features) != 3) {
    throw InputError("bad shard file header: " + header);
  }
  std::vector<ClientShard> shards(clients);
  for (std::size_t m = 0; m < clients; ++m) shards[m].client_id = static_cast<int>(m);

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::size_t id = 0;
    double q = 0.0;
    std::vector<double> x(features), t(classes), g(classes);
    fields >> id >> q;
    for (double& v : x) fields >> v;
    for (double& v : t) fields >> v;
    for (double& v : g) fields >> v;
    std::string extra;
    if (fields.fail() || (fields >> extra)) {
      throw InputError(fmt::format("malformed shard line {}", line_no));
    }
    if (id >= clients) {
      throw InputError(fmt::format("client id {} out of range on line {}", id,
                                   line_no));
    }
    ClientShard& shard = shards[id];
    shard.quality = q;
    shard.examples.push_back({std::move(x), LabelDistribution(std::move(t))});
    shard.latent.emplace_back(std::move(g));
  }
  return shards;
}

}  // namespace fedldl::data
