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

#ifndef FEDLDL_THEORY_H_
#define FEDLDL_THEORY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fedldl/random.h"

// Numerical checks of the quadratic bias-variance surrogate for calibration
// strength: per-client tuning of lambda never loses to the best shared
// lambda, and strictly wins once the per-client optima differ.
namespace fedldl::theory {

struct ClientRiskProfile {
  double variance = 0.0;  // sigma^2: spread of the purely local solution
  double bias = 0.0;      // delta^2: squared distance from anchor to optimum

  // Throws InputError unless both are >= 0 and their sum is > 0.
  void Validate() const;
};

// (1 - lambda)^2 sigma^2 + lambda^2 delta^2, for lambda in [0, 1].
double SurrogateRisk(double lambda, const ClientRiskProfile& profile);

// sigma^2 / (sigma^2 + delta^2), clipped to [0, 1].
double LambdaStar(const ClientRiskProfile& profile);

// Minimizer over a shared lambda of the summed risk:
// sum sigma^2 / sum (sigma^2 + delta^2), clipped to [0, 1].
double UniformLambdaStar(std::span<const ClientRiskProfile> profiles);

struct TheoremGap {
  double j_adapt = 0.0;  // sum_m R_m(lambda*_m)
  double j_uni = 0.0;    // sum_m R_m(uniform lambda*)
  double gap = 0.0;      // j_uni - j_adapt
  // sum_m (sigma^2 + delta^2)(uniform lambda* - lambda*_m)^2
  double excess = 0.0;
};

TheoremGap ComputeTheoremGap(std::span<const ClientRiskProfile> profiles);

struct SweepReport {
  std::size_t trials = 0;
  std::size_t num_clients = 0;
  std::size_t negative_gaps = 0;
  // Trials whose lambda* values spread more than 1e-6 but whose gap was not
  // above 1e-12.
  std::size_t missed_strict_gaps = 0;
  double max_identity_residual = 0.0;  // relative |gap - excess|
  double min_gap = 0.0;
  double mean_gap = 0.0;
  double max_gap = 0.0;
  std::vector<double> gaps;

  bool ok() const;
};

inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kSpreadThreshold = 1e-6;
inline constexpr double kStrictGapFloor = 1e-12;

// Draws `trials` profile sets with sigma^2, delta^2 ~ U(0.01, 10) and checks
// the gap sign and decomposition on each. Throws InputError for fewer than
// two clients.
SweepReport EmpiricalProfileSweep(std::size_t num_clients, Rng& rng,
                                  std::size_t trials = 1000);

}  // namespace fedldl::theory

#endif  // FEDLDL_THEORY_H_
