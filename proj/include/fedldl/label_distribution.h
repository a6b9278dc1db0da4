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

#ifndef FEDLDL_LABEL_DISTRIBUTION_H_
#define FEDLDL_LABEL_DISTRIBUTION_H_

#include <cstddef>
#include <span>
#include <vector>

namespace fedldl {

// A point on the probability simplex over C >= 2 labels. Used both for
// supervision targets and for model predictions.
class LabelDistribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  // Throws InputError unless every entry is finite and >= 0, the entries sum
  // to 1 within kSumTolerance, and there are at least two of them.
  explicit LabelDistribution(std::vector<double> values);

  // Divides by the sum first. Throws InputError on negative/NaN entries or a
  // zero total.
  static LabelDistribution Normalized(std::vector<double> values);

  // Uniform 1/C.
  static LabelDistribution Uniform(std::size_t num_classes);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const LabelDistribution&,
                         const LabelDistribution&) = default;

 private:
  std::vector<double> values_;
};

}  // namespace fedldl

#endif  // FEDLDL_LABEL_DISTRIBUTION_H_
