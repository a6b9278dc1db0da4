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

#include "fedldl/report.h"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace fedldl {

std::string FormatCsvNumber(double value) { return fmt::format("{:.9g}", value); }

void WriteRoundsCsv(std::ostream& out, std::span<const RoundReport> reports,
                    int num_clients, const CsvOptions& options) {
  std::string line = "t,rho_t";
  for (auto name : metrics::MetricReport::kNames) {
    line += ',';
    line += name;
  }
  for (int m = 0; m < num_clients; ++m) line += fmt::format(",w_{}", m);
  line += ",seconds\n";
  out << line;

  std::vector<std::string> weight_cells(static_cast<std::size_t>(num_clients));
  for (const RoundReport& r : reports) {
    line = fmt::format("{},{}", r.round, FormatCsvNumber(r.rho));
    for (double v : r.metrics.AsArray()) {
      line += ',';
      line += FormatCsvNumber(v);
    }
    std::fill(weight_cells.begin(), weight_cells.end(), std::string());
    for (std::size_t i = 0; i < r.selected.size(); ++i) {
      weight_cells.at(static_cast<std::size_t>(r.selected[i])) =
          FormatCsvNumber(r.weights[i]);
    }
    for (const std::string& cell : weight_cells) {
      line += ',';
      line += cell;
    }
    line += ',';
    if (options.wall_time) line += FormatCsvNumber(r.seconds);
    line += '\n';
    out << line;
  }
}

void ExportCsv(std::span<const RoundReport> reports, int num_clients,
               const std::filesystem::path& path, const CsvOptions& options) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  WriteRoundsCsv(out, reports, num_clients, options);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace fedldl
