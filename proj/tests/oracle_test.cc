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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "smatch/error.h"
#include "smatch/mechanism.h"
#include "smatch/oracle.h"
#include "smatch/welfare.h"
#include "test_support.h"

namespace smatch {
namespace {

using testing::AllFeasibleAssignments;
using testing::PedagogicalMarketForTest;
using testing::RandomCapacities;
using testing::RandomMatrix;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Plain recursive backtracking with no pruning.
struct Backtracker {
  const UtilityMatrix& u;
  Vector o;
  std::vector<int> caps;
  std::vector<int> current;
  std::vector<int> best;
  double best_value = kNegInf;

  void Visit(int agent) {
    if (agent == u.num_agents()) {
      double total = 0.0;
      for (int i = 0; i < agent; ++i) {
        const double g = u(i, current[i]) - o(i);
        total += g > 0.0 ? std::log(g) : kNegInf;
      }
      if (best.empty() || total > best_value) {
        best_value = total;
        best = current;
      }
      return;
    }
    for (int j = 0; j < static_cast<int>(caps.size()); ++j) {
      if (caps[j] == 0) continue;
      --caps[j];
      current[agent] = j;
      Visit(agent + 1);
      ++caps[j];
    }
  }
};

TEST(Oracle, WorkedExampleIsUniqueIdentity) {
  const OracleResult r = OptimalNswBruteforce(PedagogicalMarketForTest());
  EXPECT_EQ(r.best_allocation, Allocation({0, 1, 2}, {1, 1, 1}));
  EXPECT_NEAR(std::exp(r.best_log_nsw), 2664.44, 0.005 * 2664.44);
  EXPECT_TRUE(r.unique);
  EXPECT_EQ(r.enumerated_count, 6);
}

TEST(Oracle, TwoByTwoDiagonal) {
  UtilityMatrix u{Matrix::Identity(2, 2)};
  const std::vector<int> caps = {1, 1};
  const OracleResult r = OptimalNswBruteforce(u, caps);
  EXPECT_EQ(r.best_allocation, Allocation({0, 1}, {1, 1}));
  EXPECT_NEAR(r.best_log_nsw, 2 * std::log(0.5), 1e-12);
}

TEST(Oracle, AgreesWithBacktrackingOnSixByThree) {
  Rng rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const Market m = ValidateMarket(RandomMatrix(3, 3, rng, 0, 10),
                                    RandomMatrix(6, 3, rng, 0, 10), {2, 2, 2});
    const UtilityMatrix u = ComputeUtilityMatrix(m);
    Backtracker bt{u, DisagreementPoints(u), {2, 2, 2}, std::vector<int>(6), {}};
    bt.Visit(0);
    const OracleResult r = OptimalNswBruteforce(u, m.capacities());
    EXPECT_EQ(r.enumerated_count, 90);
    if (std::isinf(bt.best_value)) {
      EXPECT_TRUE(std::isinf(r.best_log_nsw));
    } else {
      EXPECT_NEAR(r.best_log_nsw, bt.best_value, 1e-9);
      EXPECT_NEAR(ComputeWelfare(r.best_allocation, u).log_nsw_strict,
                  bt.best_value, 1e-9);
    }
  }
}

TEST(Oracle, DominatesEveryFeasibleAllocation) {
  Rng rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const int agents = 2 + trial % 4;
    const int objects = 1 + trial % 3;
    const std::vector<int> caps = RandomCapacities(agents, objects, rng);
    UtilityMatrix u{RandomMatrix(agents, objects, rng, 0, 10)};
    const OracleResult r = OptimalNswBruteforce(u, caps);
    for (const auto& a : AllFeasibleAssignments(caps)) {
      EXPECT_LE(ComputeWelfare(Allocation(a, caps), u).log_nsw_strict,
                r.best_log_nsw + 1e-12);
    }
  }
}

TEST(Oracle, NoPositiveAllocationReturnsFirstFeasible) {
  UtilityMatrix u{Matrix::Constant(3, 2, 1.0)};
  const std::vector<int> caps = {1, 2};
  const OracleResult r = OptimalNswBruteforce(u, caps);
  EXPECT_EQ(r.best_log_nsw, kNegInf);
  EXPECT_FALSE(r.unique);
  EXPECT_EQ(r.best_allocation, Allocation({0, 1, 1}, caps));
}

TEST(Oracle, CountsAndBudget) {
  EXPECT_EQ(CountFeasibleAllocations(std::vector<int>{1, 1, 1}), 6);
  EXPECT_EQ(CountFeasibleAllocations(std::vector<int>{2, 2, 2}), 90);
  EXPECT_EQ(CountFeasibleAllocations(std::vector<int>{5, 0}), 1);
  EXPECT_EQ(CountFeasibleAllocations(std::vector<int>(12, 1)), 479001600);
  UtilityMatrix u{Matrix::Identity(12, 12)};
  try {
    OptimalNswBruteforce(u, std::vector<int>(12, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(GreedyBound, WorkedExampleIsTight) {
  const UtilityMatrix u = ComputeUtilityMatrix(PedagogicalMarketForTest());
  EXPECT_NEAR(GreedyLogNswUpperBound(u, 0.01), 7.888, 5e-3);
}

TEST(GreedyBound, SingleObjectEqualsClippedFloor) {
  Rng rng(53);
  const Market m = ValidateMarket(RandomMatrix(1, 2, rng), RandomMatrix(4, 2, rng), {4});
  const UtilityMatrix u = ComputeUtilityMatrix(m);
  const double bound = GreedyLogNswUpperBound(u, 0.01);
  EXPECT_NEAR(bound, 4 * std::log(0.01), 1e-12);
  EXPECT_NEAR(bound, ComputeWelfare(SvdMatch(m).allocation, u).log_nsw_clipped, 1e-12);
}

TEST(GreedyBound, BoundsOracleOnRandomInstances) {
  Rng rng(54);
  for (int trial = 0; trial < 40; ++trial) {
    UtilityMatrix u{RandomMatrix(5, 5, rng, 0, 10)};
    const std::vector<int> caps(5, 1);
    const OracleResult r = OptimalNswBruteforce(u, caps);
    const double bound = GreedyLogNswUpperBound(u, 0.01);
    EXPECT_GE(bound, r.best_log_nsw);
    EXPECT_GE(bound,
              ComputeWelfare(r.best_allocation, u, 0.01).log_nsw_clipped - 1e-12);
  }
}

}  // namespace
}  // namespace smatch
