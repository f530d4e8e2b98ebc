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

#include <gtest/gtest.h>

#include "smatch/error.h"
#include "smatch/market.h"
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
  ADD_FAILURE() << "expected smatch::Error";
  return ErrorCode::kInvalidArgument;
}

TEST(ValidateMarket, AcceptsWorkedExample) {
  const Market m = PedagogicalMarketForTest();
  EXPECT_EQ(m.num_agents(), 3);
  EXPECT_EQ(m.num_objects(), 3);
  EXPECT_EQ(m.num_features(), 3);
}

TEST(ValidateMarket, AcceptsZeroCapacityObject) {
  Rng rng(1);
  const Market m = ValidateMarket(RandomMatrix(3, 2, rng),
                                  RandomMatrix(2, 2, rng), {1, 0, 1});
  EXPECT_EQ(m.capacities()[1], 0);
}

TEST(ValidateMarket, RejectsBadInputs) {
  Rng rng(2);
  const Matrix f = RandomMatrix(3, 2, rng);
  const Matrix w = RandomMatrix(3, 2, rng);
  EXPECT_EQ(CodeOf([&] { ValidateMarket(f, w, {1, 1, 0}); }),
            ErrorCode::kCapacityMismatch);
  EXPECT_EQ(CodeOf([&] { ValidateMarket(f, w, {2, 2, -1}); }),
            ErrorCode::kCapacityMismatch);
  EXPECT_EQ(CodeOf([&] { ValidateMarket(f, RandomMatrix(3, 4, rng), {1, 1, 1}); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([&] { ValidateMarket(f, w, {3, 0}); }),
            ErrorCode::kDimensionMismatch);
  Matrix bad = f;
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(CodeOf([&] { ValidateMarket(bad, w, {1, 1, 1}); }),
            ErrorCode::kNonFinite);
  EXPECT_EQ(CodeOf([&] { ValidateMarket(Matrix(0, 2), Matrix(0, 2), {}); }),
            ErrorCode::kEmptyMarket);
}

TEST(UtilityMatrix, WorkedExampleValues) {
  const UtilityMatrix u = ComputeUtilityMatrix(PedagogicalMarketForTest());
  const double expected[3][3] = {
      {127.0, 81.5, 118.0}, {85.0, 123.5, 118.0}, {114.0, 110.0, 127.0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(u(i, j), expected[i][j], 1e-12);
  }
}

TEST(UtilityMatrix, BasisPreferencePicksFeatureColumn) {
  Rng rng(3);
  const Matrix f = RandomMatrix(4, 3, rng);
  Matrix w = Matrix::Zero(2, 3);
  w(0, 2) = 1.0;
  w(1, 0) = 1.0;
  const UtilityMatrix u = ComputeUtilityMatrix(ValidateMarket(f, w, {1, 1, 0, 0}));
  for (int j = 0; j < 4; ++j) {
    EXPECT_DOUBLE_EQ(u(0, j), f(j, 2));
    EXPECT_DOUBLE_EQ(u(1, j), f(j, 0));
  }
}

TEST(UtilityMatrix, MatchesDoubleLoop) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix f = RandomMatrix(3, 5, rng, -10, 10);
    const Matrix w = RandomMatrix(4, 5, rng, -10, 10);
    const UtilityMatrix u = ComputeUtilityMatrix(ValidateMarket(f, w, {2, 1, 1}));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 3; ++j) {
        double dot = 0.0;
        for (int x = 0; x < 5; ++x) dot += w(i, x) * f(j, x);
        EXPECT_NEAR(u(i, j), dot, 1e-12);
      }
    }
  }
}

TEST(UtilityMatrix, IsLinearInPreferences) {
  Rng rng(5);
  const Matrix f = RandomMatrix(3, 4, rng);
  const Matrix w = RandomMatrix(3, 4, rng);
  const UtilityMatrix base = ComputeUtilityMatrix(ValidateMarket(f, w, {1, 1, 1}));
  const UtilityMatrix scaled =
      ComputeUtilityMatrix(ValidateMarket(f, 2.5 * w, {1, 1, 1}));
  EXPECT_LT((scaled.values - 2.5 * base.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DisagreementPoints, Examples) {
  const Vector o = DisagreementPoints(ComputeUtilityMatrix(PedagogicalMarketForTest()));
  EXPECT_NEAR(o(0), 108.83, 0.01);
  EXPECT_NEAR(o(1), 108.83, 0.01);
  EXPECT_NEAR(o(2), 117.00, 0.01);

  UtilityMatrix u{Matrix(2, 2)};
  u.values << 1, 3, 0, 0;
  const Vector small = DisagreementPoints(u);
  EXPECT_DOUBLE_EQ(small(0), 2.0);
  EXPECT_DOUBLE_EQ(small(1), 0.0);

  UtilityMatrix c{Matrix::Constant(3, 4, 7.25)};
  EXPECT_TRUE(DisagreementPoints(c).isApprox(Vector::Constant(3, 7.25)));
}

TEST(DisagreementPoints, ShiftsWithConstant) {
  Rng rng(6);
  UtilityMatrix u{RandomMatrix(5, 4, rng)};
  UtilityMatrix shifted{u.values.array() + 3.0};
  const Vector diff = DisagreementPoints(shifted) - DisagreementPoints(u);
  EXPECT_LT((diff.array() - 3.0).abs().maxCoeff(), 1e-12);
}

TEST(Allocation, MatrixFormHasUnitRowsAndCapacityColumns) {
  const Allocation a({2, 0, 2, 1}, {1, 1, 2});
  const Eigen::MatrixXi m = a.ToMatrix();
  EXPECT_EQ(m.rows(), 4);
  EXPECT_EQ(m.cols(), 3);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(m.row(i).sum(), 1);
  EXPECT_EQ(m.col(0).sum(), 1);
  EXPECT_EQ(m.col(1).sum(), 1);
  EXPECT_EQ(m.col(2).sum(), 2);
}

TEST(Allocation, RejectsInfeasibleVectors) {
  EXPECT_EQ(CodeOf([] { Allocation({0, 0}, {1, 1}); }),
            ErrorCode::kCapacityMismatch);
  EXPECT_EQ(CodeOf([] { Allocation({0, 3}, {1, 1}); }),
            ErrorCode::kDimensionMismatch);
}

TEST(RealizedUtilities, LookupMatchesOracle) {
  const UtilityMatrix u = ComputeUtilityMatrix(PedagogicalMarketForTest());
  const Vector r = RealizedUtilities(Allocation({0, 1, 2}, {1, 1, 1}), u);
  EXPECT_DOUBLE_EQ(r(0), 127.0);
  EXPECT_DOUBLE_EQ(r(1), 123.5);
  EXPECT_DOUBLE_EQ(r(2), 127.0);

  Rng rng(7);
  UtilityMatrix big{RandomMatrix(5, 5, rng)};
  std::vector<int> perm = {3, 1, 4, 0, 2};
  const Vector got = RealizedUtilities(Allocation(perm, {1, 1, 1, 1, 1}), big);
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(got(i), big.values(i, perm[i]));

  UtilityMatrix flat{Matrix::Constant(3, 2, 4.0)};
  EXPECT_TRUE(RealizedUtilities(Allocation({1, 1, 0}, {1, 2}), flat)
                  .isApprox(Vector::Constant(3, 4.0)));
}

}  // namespace
}  // namespace smatch
