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

#include "fedldl/sweep.h"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "fedldl/errors.h"

namespace fedldl {
namespace {

constexpr SweepAxis kAllAxes[] = {
    SweepAxis::kQuality,  SweepAxis::kNoiseRatio, SweepAxis::kDirichletGamma,
    SweepAxis::kTopK,     SweepAxis::kPoolSize,   SweepAxis::kParticipation,
};

int AsCount(SweepAxis axis, double value) {
  if (!std::isfinite(value) || value != std::round(value) || value < 1.0) {
    throw ConfigError(fmt::format("sweep axis '{}' needs positive integers, got {}",
                                  SweepAxisName(axis), value));
  }
  return static_cast<int>(value);
}

}  // namespace

std::string_view SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kQuality:
      return "q";
    case SweepAxis::kNoiseRatio:
      return "rho_noise";
    case SweepAxis::kDirichletGamma:
      return "gamma_dirichlet";
    case SweepAxis::kTopK:
      return "top_k";
    case SweepAxis::kPoolSize:
      return "pool_size";
    case SweepAxis::kParticipation:
      return "rho_online";
  }
  return "unknown";
}

SweepAxis ParseSweepAxis(std::string_view name) {
  for (SweepAxis axis : kAllAxes) {
    if (SweepAxisName(axis) == name) return axis;
  }
  throw ConfigError(fmt::format("unknown sweep axis '{}'", name));
}

FederationConfig ApplySweepValue(FederationConfig cfg, SweepAxis axis,
                                 double value) {
  switch (axis) {
    case SweepAxis::kQuality:
      cfg.data.noisy_annotators = AsCount(axis, value);
      break;
    case SweepAxis::kNoiseRatio:
      cfg.data.noise_ratio = value;
      break;
    case SweepAxis::kDirichletGamma:
      cfg.data.dirichlet_gamma = value;
      break;
    case SweepAxis::kTopK:
      cfg.data.top_k = AsCount(axis, value);
      break;
    case SweepAxis::kPoolSize:
      cfg.data.num_clients = AsCount(axis, value);
      break;
    case SweepAxis::kParticipation:
      cfg.participation = value;
      break;
  }
  cfg.Validate();
  return cfg;
}

std::vector<SweepPoint> RunSweep(const FederationConfig& cfg, SweepAxis axis,
                                 std::span<const double> values,
                                 const RunOptions& options) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  // Validate every point before spending time on any run.
  std::vector<FederationConfig> configs;
  configs.reserve(values.size());
  for (double v : values) configs.push_back(ApplySweepValue(cfg, axis, v));

  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    points.push_back({values[i], RunFederation(configs[i], options)});
  }
  return points;
}

void WriteSweepSummary(std::ostream& out, SweepAxis axis,
                       std::span<const SweepPoint> points) {
  std::string line = fmt::format("{},rounds", SweepAxisName(axis));
  for (auto name : metrics::MetricReport::kNames) {
    line += ',';
    line += name;
  }
  line += '\n';
  out << line;
  for (const SweepPoint& p : points) {
    line = fmt::format("{},{}", FormatCsvNumber(p.value), p.result.reports.size());
    if (p.result.reports.empty()) {
      line += std::string(metrics::MetricReport::kNames.size(), ',');
    } else {
      for (double v : p.result.reports.back().metrics.AsArray()) {
        line += ',';
        line += FormatCsvNumber(v);
      }
    }
    line += '\n';
    out << line;
  }
}

void ExportSweep(const std::filesystem::path& dir, SweepAxis axis,
                 std::span<const SweepPoint> points, const CsvOptions& options) {
  std::filesystem::create_directories(dir);
  for (const SweepPoint& p : points) {
    const auto file = dir / fmt::format("{}_{}.csv", SweepAxisName(axis),
                                        FormatCsvNumber(p.value));
    ExportCsv(p.result.reports, p.result.num_clients, file, options);
  }
  std::ofstream out(dir / "summary.csv", std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + (dir / "summary.csv").string());
  WriteSweepSummary(out, axis, points);
  if (!out) throw std::runtime_error("failed writing summary.csv");
}

}  // namespace fedldl
