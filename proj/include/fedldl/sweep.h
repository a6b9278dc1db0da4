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

#ifndef FEDLDL_SWEEP_H_
#define FEDLDL_SWEEP_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedldl/federation.h"
#include "fedldl/report.h"

namespace fedldl {

// Knobs a sweep can vary. kQuality sets the annotator count of the noisy
// clients; kPoolSize sets the number of clients M.
enum class SweepAxis {
  kQuality,
  kNoiseRatio,
  kDirichletGamma,
  kTopK,
  kPoolSize,
  kParticipation,
};

std::string_view SweepAxisName(SweepAxis axis);
// Accepts q, rho_noise, gamma_dirichlet, top_k, pool_size, rho_online.
SweepAxis ParseSweepAxis(std::string_view name);

// cfg with the axis set to `value`, validated. Throws ConfigError when the
// value is invalid for the knob (e.g. a fractional annotator count).
FederationConfig ApplySweepValue(FederationConfig cfg, SweepAxis axis,
                                 double value);

struct SweepPoint {
  double value = 0.0;
  FederationResult result;
};

// One RunFederation per value, all sharing cfg.master_seed.
std::vector<SweepPoint> RunSweep(const FederationConfig& cfg, SweepAxis axis,
                                 std::span<const double> values,
                                 const RunOptions& options = {});

// value, rounds, then the final-round metrics (blank when rounds == 0).
void WriteSweepSummary(std::ostream& out, SweepAxis axis,
                       std::span<const SweepPoint> points);

// Writes <dir>/<axis>_<value>.csv per point and <dir>/summary.csv.
void ExportSweep(const std::filesystem::path& dir, SweepAxis axis,
                 std::span<const SweepPoint> points,
                 const CsvOptions& options = {});

}  // namespace fedldl

#endif  // FEDLDL_SWEEP_H_
