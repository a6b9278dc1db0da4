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

#include "fedldl/calibration.h"

#include <algorithm>
#include <cmath>

#include "fedldl/errors.h"

namespace fedldl::calibration {

void CalibrationConfig::Validate() const {
  if (!(beta > 0.0)) throw ConfigError("calibration beta must be > 0");
  if (!(tau > 0.0)) throw ConfigError("calibration tau must be > 0");
  if (!std::isfinite(lambda0)) throw ConfigError("lambda0 must be finite");
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double InterventionLevel(double quality, const CalibrationConfig& cfg) {
  cfg.Validate();
  if (!(quality >= 0.0)) throw InputError("quality indicator must be >= 0");
  return std::max(0.0, 1.0 - quality / cfg.tau);
}

double ComputeAlpha(double quality, const CalibrationConfig& cfg) {
  return Sigmoid(cfg.beta * (InterventionLevel(quality, cfg) - cfg.lambda0));
}

}  // namespace fedldl::calibration
