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

#ifndef FEDLDL_CALIBRATION_H_
#define FEDLDL_CALIBRATION_H_

namespace fedldl::calibration {

struct CalibrationConfig {
  double beta = 5.0;     // sharpness of the sigmoid transition, > 0
  double lambda0 = 0.5;  // intervention offset
  double tau = 10.0;     // quality normalizer (maximum quality score), > 0

  // Throws ConfigError unless beta > 0 and tau > 0.
  void Validate() const;
};

// max(0, 1 - q / tau). Throws InputError for q < 0.
double InterventionLevel(double quality, const CalibrationConfig& cfg);

// sigmoid(beta * (InterventionLevel(q) - lambda0)): the weight a client puts
// on matching the anchor instead of its own labels. Low quality gives a large
// weight.
double ComputeAlpha(double quality, const CalibrationConfig& cfg);

// Numerically stable logistic function.
double Sigmoid(double x);

}  // namespace fedldl::calibration

#endif  // FEDLDL_CALIBRATION_H_
