// Copyright 2026 The smatch Authors.
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

#ifndef SMATCH_IO_H_
#define SMATCH_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "smatch/market.h"

namespace smatch {

// Market files.
//
// CSV matrices carry a one-line header followed by one comma-separated row
// per object (features) or agent (preferences). Capacities are one integer
// per line, optionally preceded by a header line. The bundled JSON form is
//
//   {"features": [[...], ...], "preferences": [[...], ...],
//    "capacities": [...], "metadata": {...}}
//
// Malformed input raises smatch::Error(kParseError).

Matrix ParseMatrixCsv(std::string_view text);
std::vector<int> ParseCapacities(std::string_view text);
std::string FormatMatrixCsv(const Matrix& m, std::string_view column_prefix);

Market ParseMarketJson(std::string_view text);
std::string FormatMarketJson(const Market& market);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

Matrix ReadMatrixCsv(const std::string& path);
std::vector<int> ReadCapacities(const std::string& path);

// Loads a market from three CSV files and validates it.
Market LoadMarketCsv(const std::string& features_path,
                     const std::string& preferences_path,
                     const std::string& capacities_path);
Market LoadMarketJson(const std::string& path);

}  // namespace smatch

#endif  // SMATCH_IO_H_
