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

#include "smatch/io.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "smatch/error.h"

namespace smatch {
namespace {

using nlohmann::json;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(
        start, end == std::string_view::npos ? std::string_view::npos : end - start);
    line = Trim(line);
    if (!line.empty()) lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

bool ParseDouble(std::string_view token, double& out) {
  token = Trim(token);
  if (token.empty()) return false;
  // std::from_chars for double is available in libstdc++ 11.
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

bool ParseInt(std::string_view token, int& out) {
  token = Trim(token);
  if (token.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

Matrix JsonToMatrix(const json& rows, std::string_view field) {
  if (!rows.is_array() || rows.empty()) {
    throw Error(ErrorCode::kParseError,
                std::string(field) + " must be a non-empty array of rows");
  }
  const std::size_t cols = rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != cols) {
      throw Error(ErrorCode::kParseError,
                  std::string(field) + " row " + std::to_string(r) +
                      " has the wrong length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!rows[r][c].is_number()) {
        throw Error(ErrorCode::kParseError,
                    std::string(field) + " entries must be numbers");
      }
      m(r, c) = rows[r][c].get<double>();
    }
  }
  return m;
}

json MatrixToJson(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Matrix ParseMatrixCsv(std::string_view text) {
  const std::vector<std::string_view> lines = SplitLines(text);
  if (lines.size() < 2) {
    throw Error(ErrorCode::kParseError,
                "CSV matrix needs a header line and at least one row");
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    std::vector<double> row;
    std::size_t start = 0;
    const std::string_view line = lines[l];
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view token = line.substr(
          start, comma == std::string_view::npos ? std::string_view::npos
                                                 : comma - start);
      double value;
      if (!ParseDouble(token, value)) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(l + 1) + ": bad number '" +
                        std::string(token) + "'");
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(l + 1) + " has " +
                      std::to_string(row.size()) + " fields, expected " +
                      std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<int> ParseCapacities(std::string_view text) {
  const std::vector<std::string_view> lines = SplitLines(text);
  std::vector<int> caps;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    int value;
    if (!ParseInt(lines[l], value)) {
      if (l == 0) continue;  // header
      throw Error(ErrorCode::kParseError,
                  "capacity line " + std::to_string(l + 1) + " is not an integer");
    }
    caps.push_back(value);
  }
  if (caps.empty()) {
    throw Error(ErrorCode::kParseError, "capacity file has no entries");
  }
  return caps;
}

std::string FormatMatrixCsv(const Matrix& m, std::string_view column_prefix) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    out << (c ? "," : "") << column_prefix << (c + 1);
  }
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << (c ? "," : "") << m(r, c);
    }
    out << '\n';
  }
  return out.str();
}

Market ParseMarketJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  for (const char* key : {"features", "preferences", "capacities"}) {
    if (!doc.contains(key)) {
      throw Error(ErrorCode::kParseError,
                  std::string("market JSON lacks '") + key + "'");
    }
  }
  std::vector<int> caps;
  for (const json& c : doc["capacities"]) {
    if (!c.is_number_integer()) {
      throw Error(ErrorCode::kParseError, "capacities must be integers");
    }
    caps.push_back(c.get<int>());
  }
  return ValidateMarket(JsonToMatrix(doc["features"], "features"),
                        JsonToMatrix(doc["preferences"], "preferences"),
                        std::move(caps));
}

std::string FormatMarketJson(const Market& market) {
  json doc;
  doc["features"] = MatrixToJson(market.features());
  doc["preferences"] = MatrixToJson(market.preferences());
  doc["capacities"] = std::vector<int>(market.capacities().begin(),
                                       market.capacities().end());
  doc["metadata"] = {{"agents", market.num_agents()},
                     {"objects", market.num_objects()},
                     {"features", market.num_features()}};
  return doc.dump(2) + "\n";
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << contents;
}

Matrix ReadMatrixCsv(const std::string& path) {
  return ParseMatrixCsv(ReadFile(path));
}

std::vector<int> ReadCapacities(const std::string& path) {
  return ParseCapacities(ReadFile(path));
}

Market LoadMarketCsv(const std::string& features_path,
                     const std::string& preferences_path,
                     const std::string& capacities_path) {
  return ValidateMarket(ReadMatrixCsv(features_path),
                        ReadMatrixCsv(preferences_path),
                        ReadCapacities(capacities_path));
}

Market LoadMarketJson(const std::string& path) {
  return ParseMarketJson(ReadFile(path));
}

}  // namespace smatch
