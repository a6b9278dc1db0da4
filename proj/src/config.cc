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

#include "fedldl/config.h"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "fedldl/errors.h"

namespace fedldl {
namespace {

using nlohmann::json;

// Reads fields out of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string section)
      : obj_(obj), section_(std::move(section)) {
    if (!obj_.is_object()) {
      throw ConfigError(fmt::format("'{}' must be a JSON object", Where()));
    }
  }

  template <typename T>
  void Read(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      if constexpr (std::is_unsigned_v<T>) {
        if (!it->is_number_unsigned()) {
          throw ConfigError("not a nonnegative integer");
        }
      } else if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw ConfigError("not an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) throw ConfigError("not a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw ConfigError("not a string");
      }
      out = it->template get<T>();
    } catch (const std::exception& e) {
      throw ConfigError(fmt::format("bad value for '{}{}': {}", Prefix(), key,
                                    e.what()));
    }
  }

  const json* Child(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void Finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) {
        throw ConfigError(fmt::format("unknown config key '{}{}'", Prefix(), key));
      }
    }
  }

 private:
  std::string Where() const { return section_.empty() ? "<root>" : section_; }
  std::string Prefix() const { return section_.empty() ? "" : section_ + "."; }

  const json& obj_;
  std::string section_;
  std::set<std::string> seen_;
};

std::string PenaltyName(AnchorPenalty p) {
  return p == AnchorPenalty::kSquaredLogits ? "squared_logits" : "softmax_kl";
}

AnchorPenalty ParsePenalty(const std::string& name) {
  if (name == "squared_logits") return AnchorPenalty::kSquaredLogits;
  if (name == "softmax_kl") return AnchorPenalty::kSoftmaxKl;
  throw ConfigError(fmt::format("unknown local.penalty '{}'", name));
}

std::string ScheduleName(aggregation::AnnealKind k) {
  return k == aggregation::AnnealKind::kLinear ? "linear" : "constant";
}

aggregation::AnnealKind ParseSchedule(const std::string& name) {
  if (name == "linear") return aggregation::AnnealKind::kLinear;
  if (name == "constant") return aggregation::AnnealKind::kConstant;
  throw ConfigError(fmt::format("unknown aggregation.schedule '{}'", name));
}

}  // namespace

FederationConfig ParseFederationConfig(const json& doc) {
  FederationConfig cfg;
  ObjectReader root(doc, "");
  root.Read("rounds", cfg.rounds);
  root.Read("participation", cfg.participation);
  std::string algorithm(AlgorithmName(cfg.algorithm));
  root.Read("algorithm", algorithm);
  cfg.algorithm = ParseAlgorithm(algorithm);
  root.Read("eval_fraction", cfg.eval_fraction);
  root.Read("master_seed", cfg.master_seed);
  root.Read("fedprox_mu", cfg.fedprox_mu);
  root.Read("hidden_units", cfg.hidden_units);
  if (const json* a = root.Child("alpha_override"); a && !a->is_null()) {
    if (!a->is_number()) throw ConfigError("alpha_override must be a number");
    cfg.alpha_override = a->get<double>();
  }

  if (const json* node = root.Child("local")) {
    ObjectReader r(*node, "local");
    r.Read("epochs", cfg.local.epochs);
    r.Read("batch_size", cfg.local.batch_size);
    r.Read("learning_rate", cfg.local.learning_rate);
    r.Read("momentum", cfg.local.momentum);
    r.Read("weight_decay", cfg.local.weight_decay);
    std::string penalty = PenaltyName(cfg.local.penalty);
    r.Read("penalty", penalty);
    cfg.local.penalty = ParsePenalty(penalty);
    r.Finish();
  }
  if (const json* node = root.Child("calibration")) {
    ObjectReader r(*node, "calibration");
    r.Read("beta", cfg.calibration.beta);
    r.Read("lambda0", cfg.calibration.lambda0);
    r.Read("tau", cfg.calibration.tau);
    r.Finish();
  }
  if (const json* node = root.Child("aggregation")) {
    ObjectReader r(*node, "aggregation");
    r.Read("gamma_temp", cfg.aggregation.gamma_temp);
    r.Read("anneal_warmup_rounds", cfg.aggregation.anneal_warmup_rounds);
    std::string schedule = ScheduleName(cfg.aggregation.schedule);
    r.Read("schedule", schedule);
    cfg.aggregation.schedule = ParseSchedule(schedule);
    r.Read("constant_rho", cfg.aggregation.constant_rho);
    r.Finish();
  }
  if (const json* node = root.Child("data")) {
    ObjectReader r(*node, "data");
    data::PartitionConfig& d = cfg.data;
    r.Read("num_clients", d.num_clients);
    r.Read("dirichlet_gamma", d.dirichlet_gamma);
    r.Read("top_k", d.top_k);
    r.Read("noise_ratio", d.noise_ratio);
    r.Read("clean_annotators", d.clean_annotators);
    r.Read("noisy_annotators", d.noisy_annotators);
    r.Read("seed", d.seed);
    r.Read("num_samples", d.num_samples);
    r.Read("num_classes", d.num_classes);
    r.Read("feature_dim", d.feature_dim);
    r.Read("label_concentration", d.label_concentration);
    r.Read("feature_noise_variance", d.feature_noise_variance);
    r.Finish();
  }
  root.Finish();
  cfg.Validate();
  return cfg;
}

FederationConfig LoadFederationConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config '{}' is not valid JSON: {}",
                                  path.string(), e.what()));
  }
  return ParseFederationConfig(doc);
}

json ToJson(const FederationConfig& cfg) {
  json doc;
  doc["rounds"] = cfg.rounds;
  doc["participation"] = cfg.participation;
  doc["algorithm"] = std::string(AlgorithmName(cfg.algorithm));
  doc["eval_fraction"] = cfg.eval_fraction;
  doc["master_seed"] = cfg.master_seed;
  doc["fedprox_mu"] = cfg.fedprox_mu;
  doc["hidden_units"] = cfg.hidden_units;
  doc["alpha_override"] =
      cfg.alpha_override ? json(*cfg.alpha_override) : json(nullptr);
  doc["local"] = {
      {"epochs", cfg.local.epochs},
      {"batch_size", cfg.local.batch_size},
      {"learning_rate", cfg.local.learning_rate},
      {"momentum", cfg.local.momentum},
      {"weight_decay", cfg.local.weight_decay},
      {"penalty", PenaltyName(cfg.local.penalty)},
  };
  doc["calibration"] = {
      {"beta", cfg.calibration.beta},
      {"lambda0", cfg.calibration.lambda0},
      {"tau", cfg.calibration.tau},
  };
  doc["aggregation"] = {
      {"gamma_temp", cfg.aggregation.gamma_temp},
      {"anneal_warmup_rounds", cfg.aggregation.anneal_warmup_rounds},
      {"schedule", ScheduleName(cfg.aggregation.schedule)},
      {"constant_rho", cfg.aggregation.constant_rho},
  };
  const data::PartitionConfig& d = cfg.data;
  doc["data"] = {
      {"num_clients", d.num_clients},
      {"dirichlet_gamma", d.dirichlet_gamma},
      {"top_k", d.top_k},
      {"noise_ratio", d.noise_ratio},
      {"clean_annotators", d.clean_annotators},
      {"noisy_annotators", d.noisy_annotators},
      {"seed", d.seed},
      {"num_samples", d.num_samples},
      {"num_classes", d.num_classes},
      {"feature_dim", d.feature_dim},
      {"label_concentration", d.label_concentration},
      {"feature_noise_variance", d.feature_noise_variance},
  };
  return doc;
}

}  // namespace fedldl
