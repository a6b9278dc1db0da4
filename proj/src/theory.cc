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

#include "fedldl/theory.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fedldl/errors.h"

namespace fedldl::theory {

void ClientRiskProfile::Validate() const {
  if (!(variance >= 0.0) || !(bias >= 0.0)) {
    throw InputError("risk profile entries must be >= 0");
  }
  if (!(variance + bias > 0.0)) {
    throw InputError("risk profile is degenerate (sigma^2 + delta^2 == 0)");
  }
}

double SurrogateRisk(double lambda, const ClientRiskProfile& profile) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DomainError("lambda must lie in [0, 1]");
  }
  const double keep = 1.0 - lambda;
  return keep * keep * profile.variance + lambda * lambda * profile.bias;
}

double LambdaStar(const ClientRiskProfile& profile) {
  profile.Validate();
  return std::clamp(profile.variance / (profile.variance + profile.bias), 0.0,
                    1.0);
}

double UniformLambdaStar(std::span<const ClientRiskProfile> profiles) {
  if (profiles.empty()) throw InputError("no risk profiles given");
  double variance = 0.0, total = 0.0;
  for (const ClientRiskProfile& p : profiles) {
    p.Validate();
    variance += p.variance;
    total += p.variance + p.bias;
  }
  return std::clamp(variance / total, 0.0, 1.0);
}

TheoremGap ComputeTheoremGap(std::span<const ClientRiskProfile> profiles) {
  const double shared = UniformLambdaStar(profiles);
  TheoremGap out;
  for (const ClientRiskProfile& p : profiles) {
    const double own = LambdaStar(p);
    out.j_adapt += SurrogateRisk(own, p);
    out.j_uni += SurrogateRisk(shared, p);
    const double diff = shared - own;
    out.excess += (p.variance + p.bias) * diff * diff;
  }
  out.gap = out.j_uni - out.j_adapt;
  return out;
}

bool SweepReport::ok() const {
  return negative_gaps == 0 && missed_strict_gaps == 0 &&
         max_identity_residual <= kIdentityTolerance;
}

SweepReport EmpiricalProfileSweep(std::size_t num_clients, Rng& rng,
                                  std::size_t trials) {
  if (num_clients < 2) throw InputError("sweep needs at least two clients");
  std::uniform_real_distribution<double> draw(0.01, 10.0);

  SweepReport report;
  report.trials = trials;
  report.num_clients = num_clients;
  report.gaps.reserve(trials);
  report.min_gap = std::numeric_limits<double>::infinity();
  report.max_gap = -std::numeric_limits<double>::infinity();

  std::vector<ClientRiskProfile> profiles(num_clients);
  double gap_sum = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    for (ClientRiskProfile& p : profiles) {
      p.variance = draw(rng);
      p.bias = draw(rng);
    }
    const TheoremGap result = ComputeTheoremGap(profiles);

    double lo = 1.0, hi = 0.0;
    for (const ClientRiskProfile& p : profiles) {
      const double l = LambdaStar(p);
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
    if (result.gap < 0.0) ++report.negative_gaps;
    if (hi - lo > kSpreadThreshold && !(result.gap > kStrictGapFloor)) {
      ++report.missed_strict_gaps;
    }
    // Relative to the size of the summed risk: the gap itself is a
    // difference of two O(j_uni) sums and carries their rounding error.
    const double residual =
        std::abs(result.gap - result.excess) / std::max(result.j_uni, 1e-300);
    report.max_identity_residual =
        std::max(report.max_identity_residual, residual);

    report.gaps.push_back(result.gap);
    report.min_gap = std::min(report.min_gap, result.gap);
    report.max_gap = std::max(report.max_gap, result.gap);
    gap_sum += result.gap;
  }
  report.mean_gap = trials > 0 ? gap_sum / static_cast<double>(trials) : 0.0;
  if (trials == 0) report.min_gap = report.max_gap = 0.0;
  return report;
}

}  // namespace fedldl::theory
