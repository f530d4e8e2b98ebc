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

#include <filesystem>

#include <gtest/gtest.h>

#include "smatch/error.h"
#include "smatch/io.h"
#include "test_support.h"

namespace smatch {
namespace {

using testing::PedagogicalMarketForTest;
using testing::RandomMatrix;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

TEST(MatrixCsv, ParsesWithHeaderAndWhitespace) {
  const Matrix m = ParseMatrixCsv("a,b\n1, 2.5\r\n-3,4e1\n\n");
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_DOUBLE_EQ(m(0, 1), 2.5);
  EXPECT_DOUBLE_EQ(m(1, 0), -3.0);
  EXPECT_DOUBLE_EQ(m(1, 1), 40.0);
}

TEST(MatrixCsv, RejectsMalformedInput) {
  EXPECT_EQ(CodeOf([] { ParseMatrixCsv("a,b\n1,x\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseMatrixCsv("a,b\n1,2\n3\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseMatrixCsv("a,b\n"); }), ErrorCode::kParseError);
}

TEST(MatrixCsv, RoundTripsExactly) {
  Rng rng(71);
  const Matrix m = RandomMatrix(5, 3, rng, -100, 100);
  EXPECT_EQ(ParseMatrixCsv(FormatMatrixCsv(m, "x")), m);
}

TEST(Capacities, OptionalHeader) {
  EXPECT_EQ(ParseCapacities("capacity\n1\n2\n"), (std::vector<int>{1, 2}));
  EXPECT_EQ(ParseCapacities("3\n0\n"), (std::vector<int>{3, 0}));
  EXPECT_EQ(CodeOf([] { ParseCapacities("c\n1\nfoo\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseCapacities("c\n"); }), ErrorCode::kParseError);
}

TEST(MarketJson, RoundTrip) {
  const Market m = PedagogicalMarketForTest();
  const Market back = ParseMarketJson(FormatMarketJson(m));
  EXPECT_EQ(back.features(), m.features());
  EXPECT_EQ(back.preferences(), m.preferences());
  EXPECT_TRUE(std::ranges::equal(back.capacities(), m.capacities()));
}

TEST(MarketJson, ValidationErrorsPropagate) {
  EXPECT_EQ(CodeOf([] { ParseMarketJson("{"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseMarketJson(R"({"features": [[1]], "preferences": [[1]]})"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ParseMarketJson(
                  R"({"features": [[1]], "preferences": [[1],[2]], "capacities": [1]})");
            }),
            ErrorCode::kCapacityMismatch);
}

TEST(Files, LoadCsvTriple) {
  const auto dir = std::filesystem::temp_directory_path() / "smatch_io_test";
  std::filesystem::create_directories(dir);
  const Market m = PedagogicalMarketForTest();
  WriteFile((dir / "f.csv").string(), FormatMatrixCsv(m.features(), "x"));
  WriteFile((dir / "w.csv").string(), FormatMatrixCsv(m.preferences(), "x"));
  WriteFile((dir / "c.csv").string(), "capacity\n1\n1\n1\n");
  const Market loaded = LoadMarketCsv((dir / "f.csv").string(), (dir / "w.csv").string(),
                                      (dir / "c.csv").string());
  EXPECT_EQ(loaded.features(), m.features());
  EXPECT_THROW(ReadFile((dir / "missing.csv").string()), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace smatch
