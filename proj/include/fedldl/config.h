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

#ifndef FEDLDL_CONFIG_H_
#define FEDLDL_CONFIG_H_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "fedldl/federation.h"

namespace fedldl {

// JSON form of FederationConfig. Every key is optional and defaults to the
// FederationConfig default; unknown keys and wrongly typed values raise
// ConfigError. Layout:
//
//   {
//     "rounds": 50, "participation": 1.0, "algorithm": "fedqual",
//     "eval_fraction": 0.2, "master_seed": 1, "fedprox_mu": 0.01,
//     "hidden_units": 0, "alpha_override": null,
//     "local": {"epochs", "batch_size", "learning_rate", "momentum",
//               "weight_decay", "penalty": "squared_logits" | "softmax_kl"},
//     "calibration": {"beta", "lambda0", "tau"},
//     "aggregation": {"gamma_temp", "anneal_warmup_rounds",
//                     "schedule": "linear" | "constant", "constant_rho"},
//     "data": {"num_clients", "dirichlet_gamma", "top_k", "noise_ratio",
//              "clean_annotators", "noisy_annotators", "seed", "num_samples",
//              "num_classes", "feature_dim", "label_concentration",
//              "feature_noise_variance"}
//   }
FederationConfig ParseFederationConfig(const nlohmann::json& doc);
FederationConfig LoadFederationConfig(const std::filesystem::path& path);

// Inverse of ParseFederationConfig; round-trips every field.
nlohmann::json ToJson(const FederationConfig& cfg);

}  // namespace fedldl

#endif  // FEDLDL_CONFIG_H_
