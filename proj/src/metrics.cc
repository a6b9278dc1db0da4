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

#include "fedldl/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fedldl/errors.h"

namespace fedldl::metrics {
namespace {

void CheckSameLength(const LabelDistribution& a, const LabelDistribution& b) {
  if (a.size() != b.size()) {
    throw DimensionError("metric arguments differ in length: " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

std::vector<double> Smoothed(const LabelDistribution& d) {
  const double total = 1.0 + kKlSmoothing * static_cast<double>(d.size());
  std::vector<double> out(d.size());
  for (std::size_t c = 0; c < d.size(); ++c) {
    out[c] = (d[c] + kKlSmoothing) / total;
  }
  return out;
}

}  // namespace

double KlDivergence(const LabelDistribution& target,
                    const LabelDistribution& prediction) {
  CheckSameLength(target, prediction);
  const std::vector<double> d = Smoothed(target);
  const std::vector<double> p = Smoothed(prediction);
  double kl = 0.0;
  for (std::size_t c = 0; c < d.size(); ++c) {
    kl += d[c] * (std::log(d[c]) - std::log(p[c]));
  }
  // Rounding can leave a -1e-17 residue for near-identical inputs.
  return std::max(kl, 0.0);
}

double Chebyshev(const LabelDistribution& target,
                 const LabelDistribution& prediction) {
  CheckSameLength(target, prediction);
  double worst = 0.0;
  for (std::size_t c = 0; c < target.size(); ++c) {
    worst = std::max(worst, std::abs(target[c] - prediction[c]));
  }
  return worst;
}

double Clark(const LabelDistribution& target,
             const LabelDistribution& prediction) {
  CheckSameLength(target, prediction);
  double sum = 0.0;
  for (std::size_t c = 0; c < target.size(); ++c) {
    const double denom = target[c] + prediction[c];
    if (denom == 0.0) continue;
    const double ratio = (target[c] - prediction[c]) / denom;
    sum += ratio * ratio;
  }
  return std::sqrt(sum);
}

double Canberra(const LabelDistribution& target,
                const LabelDistribution& prediction) {
  CheckSameLength(target, prediction);
  double sum = 0.0;
  for (std::size_t c = 0; c < target.size(); ++c) {
    const double denom = target[c] + prediction[c];
    if (denom == 0.0) continue;
    sum += std::abs(target[c] - prediction[c]) / denom;
  }
  return sum;
}

double Intersection(const LabelDistribution& target,
                    const LabelDistribution& prediction) {
  CheckSameLength(target, prediction);
  double sum = 0.0;
  for (std::size_t c = 0; c < target.size(); ++c) {
    sum += std::min(target[c], prediction[c]);
  }
  return sum;
}

double Cosine(const LabelDistribution& target,
              const LabelDistribution& prediction) {
  CheckSameLength(target, prediction);
  double dot = 0.0, nt = 0.0, np = 0.0;
  for (std::size_t c = 0; c < target.size(); ++c) {
    dot += target[c] * prediction[c];
    nt += target[c] * target[c];
    np += prediction[c] * prediction[c];
  }
  // Simplex vectors are never zero, so the norms are positive.
  return std::clamp(dot / (std::sqrt(nt) * std::sqrt(np)), 0.0, 1.0);
}

MetricReport Evaluate(const LabelDistribution& target,
                      const LabelDistribution& prediction) {
  return MetricReport{
      .kl = KlDivergence(target, prediction),
      .chebyshev = Chebyshev(target, prediction),
      .clark = Clark(target, prediction),
      .canberra = Canberra(target, prediction),
      .intersection = Intersection(target, prediction),
      .cosine = Cosine(target, prediction),
  };
}

void MetricAverager::Add(const MetricReport& report) {
  sum_.kl += report.kl;
  sum_.chebyshev += report.chebyshev;
  sum_.clark += report.clark;
  sum_.canberra += report.canberra;
  sum_.intersection += report.intersection;
  sum_.cosine += report.cosine;
  ++count_;
}

MetricReport MetricAverager::Mean() const {
  if (count_ == 0) return {};
  const double n = static_cast<double>(count_);
  return MetricReport{
      .kl = sum_.kl / n,
      .chebyshev = sum_.chebyshev / n,
      .clark = sum_.clark / n,
      .canberra = sum_.canberra / n,
      .intersection = sum_.intersection / n,
      .cosine = sum_.cosine / n,
  };
}

}  // namespace fedldl::metrics
