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

// Command-line front end: federated runs, parameter sweeps, synthetic data
// export and the calibration-theory check.
//
// Exit codes: 0 success, 1 a checked property failed, 2 bad configuration.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fedldl/config.h"
#include "fedldl/data_synthesis.h"
#include "fedldl/errors.h"
#include "fedldl/federation.h"
#include "fedldl/report.h"
#include "fedldl/sweep.h"
#include "fedldl/theory.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

namespace fs = std::filesystem;
using fedldl::FederationConfig;

FederationConfig LoadWithSeed(const std::string& path,
                              std::optional<std::uint64_t> seed) {
  FederationConfig cfg = fedldl::LoadFederationConfig(path);
  if (seed) cfg.master_seed = *seed;
  return cfg;
}

void WriteResolvedConfig(const fs::path& dir, const FederationConfig& cfg) {
  std::ofstream out(dir / "config.json", std::ios::binary | std::ios::trunc);
  out << fedldl::ToJson(cfg).dump(2) << '\n';
}

std::vector<double> ParseValueList(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw fedldl::ConfigError(fmt::format("bad sweep value '{}'", item));
    }
    values.push_back(v);
  }
  if (values.empty()) throw fedldl::ConfigError("--values is empty");
  return values;
}

int RunCommand(const std::string& config, const std::string& out_dir,
               std::optional<std::uint64_t> seed, int threads, bool wall_time) {
  const FederationConfig cfg = LoadWithSeed(config, seed);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const fedldl::FederationResult result =
      fedldl::RunFederation(cfg, {.workers = threads});
  fedldl::ExportCsv(result.reports, result.num_clients, dir / "rounds.csv",
                    {.wall_time = wall_time});
  WriteResolvedConfig(dir, cfg);
  if (!result.reports.empty()) {
    const auto& last = result.reports.back().metrics;
    std::cout << fmt::format("{} rounds={} final kl={:.6f} intersection={:.6f}\n",
                             fedldl::AlgorithmName(cfg.algorithm),
                             result.reports.size(), last.kl, last.intersection);
  } else {
    std::cout << "no rounds run\n";
  }
  return kExitOk;
}

int SweepCommand(const std::string& config, const std::string& axis_name,
                 const std::string& values_text, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, int threads,
                 bool wall_time) {
  const FederationConfig cfg = LoadWithSeed(config, seed);
  const fedldl::SweepAxis axis = fedldl::ParseSweepAxis(axis_name);
  const std::vector<double> values = ParseValueList(values_text);
  const auto points = fedldl::RunSweep(cfg, axis, values, {.workers = threads});
  fedldl::ExportSweep(out_dir, axis, points, {.wall_time = wall_time});
  WriteResolvedConfig(out_dir, cfg);
  fedldl::WriteSweepSummary(std::cout, axis, points);
  return kExitOk;
}

int GenDataCommand(const std::string& config, const std::string& out_path,
                   std::optional<std::uint64_t> seed) {
  const FederationConfig cfg = LoadWithSeed(config, seed);
  const fedldl::data::FederatedDataset dataset = fedldl::data::SynthesizeFederatedData(
      cfg.data, cfg.eval_fraction, fedldl::DataSeed(cfg));
  const fs::path path(out_path);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  fedldl::data::WriteShards(out, dataset.shards);
  return kExitOk;
}

std::vector<fedldl::theory::ClientRiskProfile> LoadProfiles(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fedldl::ConfigError("cannot open profiles file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw fedldl::ConfigError(fmt::format("bad profiles JSON: {}", e.what()));
  }
  // [[sigma2, delta2], ...]
  if (!doc.is_array() || doc.empty()) {
    throw fedldl::ConfigError("profiles must be a non-empty array of pairs");
  }
  std::vector<fedldl::theory::ClientRiskProfile> profiles;
  for (const auto& pair : doc) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      throw fedldl::ConfigError("each profile must be [sigma2, delta2]");
    }
    fedldl::theory::ClientRiskProfile p{pair[0].get<double>(),
                                        pair[1].get<double>()};
    try {
      p.Validate();
    } catch (const fedldl::InputError& e) {
      throw fedldl::ConfigError(e.what());
    }
    profiles.push_back(p);
  }
  return profiles;
}

int TheoryCommand(int clients, std::uint64_t seed, int trials,
                  const std::string& profiles_path) {
  namespace th = fedldl::theory;
  if (clients < 2) throw fedldl::ConfigError("--clients must be >= 2");
  if (trials < 1) throw fedldl::ConfigError("--trials must be >= 1");

  std::vector<th::ClientRiskProfile> profiles;
  if (!profiles_path.empty()) {
    profiles = LoadProfiles(profiles_path);
  } else {
    fedldl::Rng rng = fedldl::MakeStream(seed, fedldl::StreamTag::kTheorySweep, 1);
    std::uniform_real_distribution<double> draw(0.01, 10.0);
    profiles.resize(static_cast<std::size_t>(clients));
    for (auto& p : profiles) {
      p.variance = draw(rng);
      p.bias = draw(rng);
    }
  }

  bool ok = true;
  const th::TheoremGap gap = th::ComputeTheoremGap(profiles);
  std::cout << fmt::format("profiles={}\n", profiles.size());
  for (const auto& p : profiles) {
    std::cout << fmt::format("  sigma2={:.9g} delta2={:.9g} lambda*={:.9g}\n",
                             p.variance, p.bias, th::LambdaStar(p));
  }
  std::cout << fmt::format("uniform_lambda*={:.9g}\n", th::UniformLambdaStar(profiles));
  std::cout << fmt::format("j_adapt={:.12g}\nj_uni={:.12g}\ngap={:.12g}\n",
                           gap.j_adapt, gap.j_uni, gap.gap);
  const double residual =
      std::abs(gap.gap - gap.excess) / std::max(gap.j_uni, 1e-300);
  if (gap.gap < 0.0 || residual > th::kIdentityTolerance) ok = false;

  fedldl::Rng sweep_rng = fedldl::MakeStream(seed, fedldl::StreamTag::kTheorySweep, 2);
  const th::SweepReport sweep = th::EmpiricalProfileSweep(
      static_cast<std::size_t>(clients), sweep_rng, static_cast<std::size_t>(trials));
  std::cout << fmt::format(
      "sweep trials={} clients={} negative_gaps={} missed_strict_gaps={} "
      "max_identity_residual={:.3g} gap[min/mean/max]={:.6g}/{:.6g}/{:.6g}\n",
      sweep.trials, sweep.num_clients, sweep.negative_gaps,
      sweep.missed_strict_gaps, sweep.max_identity_residual, sweep.min_gap,
      sweep.mean_gap, sweep.max_gap);
  ok = ok && sweep.ok();
  std::cout << (ok ? "PASS\n" : "FAIL\n");
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated label-distribution learning simulator"};
  app.require_subcommand(1);

  std::string config, out, axis, values, profiles;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  bool wall_time = false;

  auto* run = app.add_subcommand("run", "Run one federation and export per-round CSV");
  run->add_option("--config", config, "JSON config file")->required();
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--seed", seed, "Override master_seed");
  run->add_option("--threads", threads, "Client-training worker threads")
      ->check(CLI::PositiveNumber);
  run->add_flag("--wall-time", wall_time, "Record per-round wall time in the CSV");

  auto* sweep = app.add_subcommand("sweep", "Run one federation per axis value");
  sweep->add_option("--config", config, "JSON config file")->required();
  sweep->add_option("--axis", axis,
                    "q | rho_noise | gamma_dirichlet | top_k | pool_size | rho_online")
      ->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out, "Output directory")->required();
  sweep->add_option("--seed", seed, "Override master_seed");
  sweep->add_option("--threads", threads, "Client-training worker threads")
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--wall-time", wall_time, "Record per-round wall time in the CSVs");

  int clients = 4;
  std::uint64_t theory_seed = 0;
  int trials = 1000;
  auto* theory = app.add_subcommand("theory-check",
                                    "Check adaptive vs uniform calibration risk");
  theory->add_option("--clients", clients, "Clients per profile set");
  theory->add_option("--seed", theory_seed, "Random seed");
  theory->add_option("--trials", trials, "Randomized profile sets");
  theory->add_option("--profiles", profiles,
                     "JSON file [[sigma2, delta2], ...] (default: random)");

  auto* gen = app.add_subcommand("gen-data", "Write the synthetic client shards");
  gen->add_option("--config", config, "JSON config file")->required();
  gen->add_option("--out", out, "Output shard file")->required();
  gen->add_option("--seed", seed, "Override master_seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return RunCommand(config, out, seed, threads, wall_time);
    if (*sweep) {
      return SweepCommand(config, axis, values, out, seed, threads, wall_time);
    }
    if (*theory) return TheoryCommand(clients, theory_seed, trials, profiles);
    if (*gen) return GenDataCommand(config, out, seed);
  } catch (const fedldl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitConfig;
}
