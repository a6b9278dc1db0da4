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

#include "fedldl/label_distribution.h"

#include <cmath>
#include <numeric>
#include <string>

#include "fedldl/errors.h"

namespace fedldl {
namespace {

void CheckEntries(const std::vector<double>& values) {
  if (values.size() < 2) {
    throw InputError("label distribution needs at least 2 labels, got " +
                     std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("label distribution has NaN/inf");
    if (v < 0.0) throw InputError("label distribution has a negative entry");
  }
}

}  // namespace

LabelDistribution::LabelDistribution(std::vector<double> values)
    : values_(std::move(values)) {
  CheckEntries(values_);
  const double total = std::accumulate(values_.begin(), values_.end(), 0.0);
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw InputError("label distribution sums to " + std::to_string(total));
  }
}

LabelDistribution LabelDistribution::Normalized(std::vector<double> values) {
  CheckEntries(values);
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  if (!(total > 0.0)) throw InputError("cannot normalize an all-zero vector");
  for (double& v : values) v /= total;
  return LabelDistribution(std::move(values));
}

LabelDistribution LabelDistribution::Uniform(std::size_t num_classes) {
  return LabelDistribution(std::vector<double>(
      num_classes, 1.0 / static_cast<double>(num_classes)));
}

}  // namespace fedldl
