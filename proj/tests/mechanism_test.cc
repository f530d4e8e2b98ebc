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

#include <algorithm>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "smatch/assignment.h"
#include "smatch/error.h"
#include "smatch/mechanism.h"
#include "smatch/welfare.h"
#include "test_support.h"

namespace smatch {
namespace {

using testing::AllFeasibleAssignments;
using testing::PedagogicalMarketForTest;
using testing::RandomCapacities;
using testing::RandomMatrix;

std::vector<int> Vec(std::span<const int> s) { return {s.begin(), s.end()}; }

void ExpectFeasible(const Allocation& a, const std::vector<int>& caps) {
  const Eigen::MatrixXi m = a.ToMatrix();
  for (int i = 0; i < m.rows(); ++i) EXPECT_EQ(m.row(i).sum(), 1);
  for (int j = 0; j < m.cols(); ++j) EXPECT_EQ(m.col(j).sum(), caps[j]);
}

TEST(SvdMatch, WorkedExampleIsIdentity) {
  const SvdMatchResult r = SvdMatch(PedagogicalMarketForTest());
  EXPECT_EQ(Vec(r.allocation.assignment()), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(r.trace.object_order, (std::vector<int>{2, 0, 1}));
  EXPECT_EQ(r.trace.agent_order, (std::vector<int>{2, 0, 1}));
  EXPECT_EQ(r.diagnostics.band, DeploymentBand::kProceed);
}

TEST(SvdMatch, TotalDegeneracyFollowsIndexOrder) {
  const Matrix f = Matrix::Constant(3, 2, 4.0);
  const Matrix w = Matrix::Constant(5, 2, 1.5);
  const Allocation a = SvdMatch(ValidateMarket(f, w, {2, 1, 2})).allocation;
  EXPECT_EQ(Vec(a.assignment()), (std::vector<int>{0, 0, 1, 2, 2}));
}

TEST(SvdMatch, SingleObjectTakesEveryone) {
  Rng rng(21);
  const Market m = ValidateMarket(RandomMatrix(1, 3, rng), RandomMatrix(4, 3, rng), {4});
  EXPECT_EQ(Vec(SvdMatch(m).allocation.assignment()), (std::vector<int>(4, 0)));
}

TEST(SvdMatch, ZeroFeaturesAreDegenerate) {
  const Market m = ValidateMarket(Matrix::Zero(2, 2), Matrix::Ones(2, 2), {1, 1});
  try {
    SvdMatch(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateSpectrum);
  }
}

TEST(SvdMatch, AllocationsAreAlwaysFeasible) {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int agents = 1 + trial % 12;
    const int objects = 1 + trial % 5;
    const std::vector<int> caps = RandomCapacities(agents, objects, rng);
    const Market m = ValidateMarket(RandomMatrix(objects, 3, rng, 0, 10),
                                    RandomMatrix(agents, 3, rng, 0, 10), caps);
    ExpectFeasible(SvdMatch(m).allocation, caps);
  }
}

TEST(SvdMatch, ComonotoneAssignment) {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<int> caps = RandomCapacities(9, 4, rng);
    const Market m = ValidateMarket(RandomMatrix(4, 3, rng, 0, 10),
                                    RandomMatrix(9, 3, rng, 0, 10), caps);
    const SvdMatchResult r = SvdMatch(m);
    // The k-th agent in score order sits in the k-th slot in score order.
    std::vector<int> slots;
    for (int j : r.trace.object_order) {
      for (int s = 0; s < caps[j]; ++s) slots.push_back(j);
    }
    for (int k = 0; k < 9; ++k) {
      EXPECT_EQ(r.allocation.object_of(r.trace.agent_order[k]), slots[k]);
    }
  }
}

TEST(SvdMatch, ScalingReportsLeavesAllocationUnchanged) {
  Rng rng(24);
  const Matrix f = RandomMatrix(4, 3, rng, 0, 10);
  const Matrix w = RandomMatrix(8, 3, rng, 0, 10);
  const std::vector<int> caps = {3, 1, 2, 2};
  EXPECT_EQ(SvdMatch(ValidateMarket(f, w, caps)).allocation,
            SvdMatch(ValidateMarket(f, 7.0 * w, caps)).allocation);
}

TEST(SvdMatch, MaximizesProjectedTotal) {
  Rng rng(25);
  for (int trial = 0; trial < 40; ++trial) {
    const int agents = 2 + trial % 5;
    const int objects = 1 + trial % 4;
    const std::vector<int> caps = RandomCapacities(agents, objects, rng);
    const Market m = ValidateMarket(RandomMatrix(objects, 3, rng, 0, 10),
                                    RandomMatrix(agents, 3, rng, 0, 10), caps);
    const SvdMatchResult r = SvdMatch(m);
    auto total = [&](std::span<const int> a) {
      double t = 0.0;
      for (int i = 0; i < agents; ++i) {
        t += r.trace.projected_agent_scores(i) * r.trace.projected_object_scores(a[i]);
      }
      return t;
    };
    const double ours = total(r.allocation.assignment());
    for (const auto& a : AllFeasibleAssignments(caps)) {
      EXPECT_LE(total(a), ours + 1e-9);
    }
  }
}

TEST(SvdMatch, DuplicatedAgentsShareProjectedScore) {
  Rng rng(26);
  Matrix w = RandomMatrix(6, 3, rng, 0, 10);
  w.row(4) = w.row(1);
  const Market m = ValidateMarket(RandomMatrix(3, 3, rng, 0, 10), w, {2, 2, 2});
  const SvdMatchResult r = SvdMatch(m);
  EXPECT_EQ(r.trace.projected_agent_scores(1), r.trace.projected_agent_scores(4));
  const auto& order = r.trace.agent_order;
  const auto p1 = std::find(order.begin(), order.end(), 1);
  const auto p4 = std::find(order.begin(), order.end(), 4);
  EXPECT_EQ(p4 - p1, 1);
}

TEST(SvdMatch2D, RankOneFeaturesReproduceRankOneMatch) {
  Rng rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector v = RandomMatrix(3, 1, rng, 0.1, 1).col(0).normalized();
    const Vector c = RandomMatrix(4, 1, rng, 1, 10).col(0);
    const Market m = ValidateMarket(c * v.transpose(),
                                    RandomMatrix(6, 3, rng, 0, 10), {2, 1, 2, 1});
    EXPECT_EQ(SvdMatch2D(m), SvdMatch(m).allocation);
  }
}

TEST(SvdMatch2D, WorkedExampleIsSurrogateOptimal) {
  const Market m = PedagogicalMarketForTest();
  const SpectralSummary s = ComputeSvd(m.features());
  const Matrix surrogate = RankTwoSurrogate(m, s);
  const double two_d = SurrogateTotal(surrogate, SvdMatch2D(m));
  EXPECT_GE(two_d, SurrogateTotal(surrogate, SvdMatch(m).allocation) - 1e-9);
  std::vector<int> perm = {0, 1, 2};
  double best = -1e300;
  do {
    best = std::max(best, SurrogateTotal(surrogate, Allocation(perm, {1, 1, 1})));
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_NEAR(two_d, best, 1e-9);
}

TEST(SvdMatch2D, StrictlyImprovesSomeFourByFour) {
  bool found = false;
  for (std::uint64_t seed = 0; seed < 500 && !found; ++seed) {
    Rng rng(seed);
    const Market m = ValidateMarket(RandomMatrix(4, 2, rng, -5, 5),
                                    RandomMatrix(4, 2, rng, -5, 5), {1, 1, 1, 1});
    const Matrix surrogate = RankTwoSurrogate(m, ComputeSvd(m.features()));
    const double rank1 = SurrogateTotal(surrogate, SvdMatch(m).allocation);
    const double two_d = SurrogateTotal(surrogate, SvdMatch2D(m));
    if (two_d > rank1 + 1e-6) {
      found = true;
      std::vector<int> perm = {0, 1, 2, 3};
      double best = -1e300;
      do {
        best = std::max(best,
                        SurrogateTotal(surrogate, Allocation(perm, {1, 1, 1, 1})));
      } while (std::next_permutation(perm.begin(), perm.end()));
      EXPECT_NEAR(two_d, best, 1e-9);
    }
  }
  EXPECT_TRUE(found);
}

TEST(SvdMatch2D, NeedsTwoFeatures) {
  const Market m = ValidateMarket(Matrix::Ones(2, 1), Matrix::Ones(2, 1), {1, 1});
  EXPECT_THROW(SvdMatch2D(m), Error);
}

TEST(SolveMaxAssignment, MatchesPermutationSearch) {
  Rng rng(28);
  for (int n = 1; n <= 6; ++n) {
    const Matrix profit = RandomMatrix(n, n, rng, -10, 10);
    const std::vector<int> got = SolveMaxAssignment(profit);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1e300;
    do {
      double t = 0.0;
      for (int i = 0; i < n; ++i) t += profit(i, perm[i]);
      best = std::max(best, t);
    } while (std::next_permutation(perm.begin(), perm.end()));
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += profit(i, got[i]);
    EXPECT_NEAR(t, best, 1e-9);
    EXPECT_EQ(std::set<int>(got.begin(), got.end()).size(),
              static_cast<std::size_t>(n));
  }
}

TEST(IrRepair, NoViolatorsMeansNoChange) {
  const Market m = PedagogicalMarketForTest();
  const Allocation a({0, 1, 2}, {1, 1, 1});
  Rng rng(29);
  EXPECT_EQ(IrRepair(a, ComputeUtilityMatrix(m), rng), a);
}

TEST(IrRepair, TwoViolatorsArePermutedBetweenThemselves) {
  UtilityMatrix u{Matrix(3, 3)};
  // Agents 0 and 1 sit on objects worth less than their row mean.
  u.values << 0, 10, 5,  //
      10, 0, 5,          //
      1, 1, 1;
  const Allocation a({0, 1, 2}, {1, 1, 1});
  std::set<std::vector<int>> seen;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const Allocation r = IrRepair(a, u, rng);
    EXPECT_EQ(r.object_of(2), 2);
    ExpectFeasible(r, {1, 1, 1});
    seen.insert(Vec(r.assignment()));
  }
  EXPECT_EQ(seen, (std::set<std::vector<int>>{{0, 1, 2}, {1, 0, 2}}));
}

TEST(IrRepair, OnlyViolatorRowsChange) {
  Rng rng(30);
  const std::vector<int> caps = RandomCapacities(100, 20, rng);
  const Market m = ValidateMarket(RandomMatrix(20, 5, rng, 0, 10),
                                  RandomMatrix(100, 5, rng, 0, 10), caps);
  const UtilityMatrix u = ComputeUtilityMatrix(m);
  const Allocation before = RandomPriority(m, rng);
  const WelfareReport w = ComputeWelfare(before, u);
  ASSERT_GT(w.ir_violation_count, 0);
  const Allocation after = IrRepair(before, u, rng);
  ExpectFeasible(after, caps);
  for (int i = 0; i < 100; ++i) {
    if (after.object_of(i) != before.object_of(i)) {
      EXPECT_LT(w.gains(i), 0.0);
    }
  }
}

TEST(RandomPriority, SingleObjectAndDeterminism) {
  Rng rng(31);
  const Market single = ValidateMarket(Matrix::Ones(1, 2), RandomMatrix(5, 2, rng), {5});
  EXPECT_EQ(Vec(RandomPriority(single, rng).assignment()), std::vector<int>(5, 0));

  const std::vector<int> caps = {2, 0, 3, 1};
  const Market m = ValidateMarket(RandomMatrix(4, 2, rng), RandomMatrix(6, 2, rng), caps);
  Rng a(99), b(99);
  const Allocation x = RandomPriority(m, a);
  EXPECT_EQ(x, RandomPriority(m, b));
  ExpectFeasible(x, caps);
}

TEST(RandomPriority, ExpectedUtilityMatchesDisagreementPoints) {
  const Market m = PedagogicalMarketForTest();
  const UtilityMatrix u = ComputeUtilityMatrix(m);
  Rng rng(32);
  double total = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    total += RealizedUtilities(RandomPriority(m, rng), u).mean();
  }
  const double target = DisagreementPoints(u).mean();
  EXPECT_NEAR(total / trials, target, 0.02 * target);
}

TEST(SerialDictatorship, WorkedExampleAndContention) {
  const Market m = PedagogicalMarketForTest();
  const std::vector<int> order = {0, 1, 2};
  EXPECT_EQ(Vec(SerialDictatorship(m, order).assignment()),
            (std::vector<int>{0, 1, 2}));

  // Both agents prefer object 0; whoever moves first gets it.
  Matrix f(2, 1);
  f << 2, 1;
  const Market contested = ValidateMarket(f, Matrix::Ones(2, 1), {1, 1});
  const std::vector<int> forward = {0, 1};
  const std::vector<int> reverse = {1, 0};
  EXPECT_EQ(Vec(SerialDictatorship(contested, forward).assignment()),
            (std::vector<int>{0, 1}));
  EXPECT_EQ(Vec(SerialDictatorship(contested, reverse).assignment()),
            (std::vector<int>{1, 0}));
}

TEST(SerialDictatorship, FirstMoverTakesArgmaxWithLowestIndexTie) {
  Matrix f(3, 2);
  f << 1, 0, 2, 2, 2, 2;
  Matrix w(2, 2);
  w << 1, 1, 1, 1;
  const Market m = ValidateMarket(f, w, {0, 1, 1});
  const std::vector<int> order = {1, 0};
  const Allocation a = SerialDictatorship(m, order);
  EXPECT_EQ(a.object_of(1), 1);
  EXPECT_EQ(a.object_of(0), 2);

  Matrix one(1, 2);
  one << 3, 1;
  const std::vector<int> solo = {0};
  EXPECT_EQ(SerialDictatorship(ValidateMarket(f, one, {0, 0, 1}), solo).object_of(0), 2);
}

TEST(SerialDictatorship, RejectsNonPermutation) {
  const Market m = PedagogicalMarketForTest();
  const std::vector<int> bad = {0, 0, 2};
  EXPECT_THROW(SerialDictatorship(m, bad), Error);
}

}  // namespace
}  // namespace smatch
