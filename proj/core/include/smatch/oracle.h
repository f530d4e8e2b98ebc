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

#ifndef SMATCH_ORACLE_H_
#define SMATCH_ORACLE_H_

#include <cstdint>
#include <span>

#include "smatch/market.h"

namespace smatch {

inline constexpr std::int64_t kDefaultEnumerationBudget = 10'000'000;

struct OracleResult {
  Allocation best_allocation;
  // -infinity when no feasible allocation gives every agent a positive gain.
  double best_log_nsw;
  // Whether the maximizer among NSW > 0 allocations is unique (values within
  // 1e-12 count as ties).
  bool unique;
  // Size of the search space, I! / prod_j M_j!.
  std::int64_t enumerated_count;
  // Leaves actually evaluated after pruning.
  std::int64_t leaves_visited;
};

// Number of distinct capacity-feasible 0/1 allocations.
std::int64_t CountFeasibleAllocations(std::span<const int> capacities);

// Exact maximizer of strict NSW by depth-first enumeration of multiset
// permutations with branch-and-bound on the log gains. Among ties the
// lexicographically smallest assignment vector is returned; if no allocation
// has NSW > 0 the lexicographically smallest feasible allocation comes back
// with best_log_nsw = -infinity. Throws kTooLarge beyond `budget`.
OracleResult OptimalNswBruteforce(const UtilityMatrix& utilities,
                                  std::span<const int> capacities,
                                  std::int64_t budget = kDefaultEnumerationBudget);
OracleResult OptimalNswBruteforce(const Market& market,
                                  std::int64_t budget = kDefaultEnumerationBudget);

// sum_i log max(max_j U_ij - o_i, epsilon): every agent gets its favourite
// object regardless of capacity, so this bounds the clipped log-NSW of any
// feasible allocation from above.
double GreedyLogNswUpperBound(const UtilityMatrix& utilities, double epsilon);

}  // namespace smatch

#endif  // SMATCH_ORACLE_H_
