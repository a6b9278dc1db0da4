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

#ifndef FEDLDL_METRICS_H_
#define FEDLDL_METRICS_H_

#include <array>
#include <string_view>

#include "fedldl/label_distribution.h"

namespace fedldl::metrics {

// Floor added to every entry of both arguments of KlDivergence before the
// two are renormalized.
inline constexpr double kKlSmoothing = 1e-12;

// KL(target || prediction) after smoothing. Asymmetric.
double KlDivergence(const LabelDistribution& target,
                    const LabelDistribution& prediction);

// max_c |d_c - p_c|
double Chebyshev(const LabelDistribution& target,
                 const LabelDistribution& prediction);

// sqrt(sum_c (d_c - p_c)^2 / (d_c + p_c)^2); 0/0 terms count as 0.
double Clark(const LabelDistribution& target,
             const LabelDistribution& prediction);

// sum_c |d_c - p_c| / (d_c + p_c); 0/0 terms count as 0.
double Canberra(const LabelDistribution& target,
                const LabelDistribution& prediction);

// sum_c min(d_c, p_c)
double Intersection(const LabelDistribution& target,
                    const LabelDistribution& prediction);

// Cosine of the angle between the two vectors.
double Cosine(const LabelDistribution& target,
              const LabelDistribution& prediction);

// The six measures reported for every evaluation. Lower is better for the
// first four, higher for the last two.
struct MetricReport {
  double kl = 0.0;
  double chebyshev = 0.0;
  double clark = 0.0;
  double canberra = 0.0;
  double intersection = 0.0;
  double cosine = 0.0;

  static constexpr std::array<std::string_view, 6> kNames = {
      "kl", "chebyshev", "clark", "canberra", "intersection", "cosine"};

  std::array<double, 6> AsArray() const {
    return {kl, chebyshev, clark, canberra, intersection, cosine};
  }
};

MetricReport Evaluate(const LabelDistribution& target,
                      const LabelDistribution& prediction);

// Accumulates per-example reports into a running mean.
class MetricAverager {
 public:
  void Add(const MetricReport& report);
  MetricReport Mean() const;
  std::size_t count() const { return count_; }

 private:
  MetricReport sum_;
  std::size_t count_ = 0;
};

}  // namespace fedldl::metrics

#endif  // FEDLDL_METRICS_H_
