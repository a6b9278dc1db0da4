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

#ifndef FEDLDL_REPORT_H_
#define FEDLDL_REPORT_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fedldl/federation.h"

namespace fedldl {

struct CsvOptions {
  // Wall-clock seconds vary between runs; leaving the column blank keeps
  // repeated runs byte-identical.
  bool wall_time = false;
};

// Header then one row per round:
//   t, rho_t, kl, chebyshev, clark, canberra, intersection, cosine,
//   w_0 .. w_{M-1} (blank for clients not selected that round), seconds
// Numbers use 9 significant digits; rows end in '\n'.
void WriteRoundsCsv(std::ostream& out, std::span<const RoundReport> reports,
                    int num_clients, const CsvOptions& options = {});

// Throws std::runtime_error when the file cannot be written.
void ExportCsv(std::span<const RoundReport> reports, int num_clients,
               const std::filesystem::path& path,
               const CsvOptions& options = {});

// Format of every floating-point CSV cell.
std::string FormatCsvNumber(double value);

}  // namespace fedldl

#endif  // FEDLDL_REPORT_H_
