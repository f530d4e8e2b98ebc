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

#include "smatch/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "smatch/error.h"

namespace smatch {
namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class NswSearch {
 public:
  NswSearch(const UtilityMatrix& utilities, std::span<const int> capacities)
      : utilities_(utilities),
        outside_(DisagreementPoints(utilities)),
        remaining_(capacities.begin(), capacities.end()),
        current_(utilities.num_agents(), -1) {
    const int n = utilities.num_agents();
    // suffix_bound_[i]: best conceivable log-gain of agents i..I-1.
    suffix_bound_.assign(n + 1, 0.0);
    for (int i = n - 1; i >= 0; --i) {
      double best = kNegInf;
      for (int j = 0; j < utilities.num_objects(); ++j) {
        if (remaining_[j] == 0) continue;
        const double g = utilities(i, j) - outside_(i);
        if (g > 0.0) best = std::max(best, std::log(g));
      }
      suffix_bound_[i] = suffix_bound_[i + 1] + best;
    }
  }

  void Run() { Descend(0, 0.0); }

  double best() const { return best_; }
  bool unique() const { return unique_; }
  const std::vector<int>& best_assignment() const { return best_assignment_; }
  std::int64_t leaves() const { return leaves_; }

 private:
  void Descend(int agent, double partial) {
    const int n = utilities_.num_agents();
    if (agent == n) {
      ++leaves_;
      if (partial > best_ + kTieTolerance || best_ == kNegInf) {
        best_ = partial;
        best_assignment_ = current_;
        unique_ = true;
      } else if (partial >= best_ - kTieTolerance) {
        unique_ = false;
      }
      return;
    }
    if (suffix_bound_[agent] == kNegInf) return;
    if (best_ != kNegInf &&
        partial + suffix_bound_[agent] < best_ - kTieTolerance) {
      return;
    }
    for (int j = 0; j < utilities_.num_objects(); ++j) {
      if (remaining_[j] == 0) continue;
      const double g = utilities_(agent, j) - outside_(agent);
      if (!(g > 0.0)) continue;
      --remaining_[j];
      current_[agent] = j;
      Descend(agent + 1, partial + std::log(g));
      ++remaining_[j];
    }
  }

  const UtilityMatrix& utilities_;
  Vector outside_;
  std::vector<int> remaining_;
  std::vector<int> current_;
  std::vector<double> suffix_bound_;
  double best_ = kNegInf;
  bool unique_ = false;
  std::vector<int> best_assignment_;
  std::int64_t leaves_ = 0;
};

std::vector<int> LexicographicallyFirst(std::span<const int> capacities,
                                        int num_agents) {
  std::vector<int> assignment;
  assignment.reserve(num_agents);
  for (std::size_t j = 0; j < capacities.size(); ++j) {
    assignment.insert(assignment.end(), capacities[j], static_cast<int>(j));
  }
  return assignment;
}

}  // namespace

std::int64_t CountFeasibleAllocations(std::span<const int> capacities) {
  // Product of binomials C(filled + M_j, M_j); saturates at int64 max.
  std::int64_t count = 1;
  std::int64_t filled = 0;
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  for (int m : capacities) {
    for (int k = 1; k <= m; ++k) {
      ++filled;
      // count * filled / k stays integral at every step.
      const std::int64_t g = std::gcd(count, static_cast<std::int64_t>(k));
      const std::int64_t num = count / g;
      const std::int64_t den = k / g;
      const std::int64_t f = filled / den;
      if (f != 0 && num > kMax / f) return kMax;
      count = num * f;
    }
  }
  return count;
}

OracleResult OptimalNswBruteforce(const UtilityMatrix& utilities,
                                  std::span<const int> capacities,
                                  std::int64_t budget) {
  if (static_cast<int>(capacities.size()) != utilities.num_objects()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "capacities do not match the utility matrix");
  }
  const std::int64_t count = CountFeasibleAllocations(capacities);
  if (count > budget) {
    throw Error(ErrorCode::kTooLarge,
                std::to_string(count) + " feasible allocations exceed the "
                "enumeration budget of " + std::to_string(budget));
  }
  NswSearch search(utilities, capacities);
  search.Run();

  std::vector<int> caps(capacities.begin(), capacities.end());
  std::vector<int> assignment =
      search.best() == kNegInf
          ? LexicographicallyFirst(capacities, utilities.num_agents())
          : search.best_assignment();
  return OracleResult{Allocation(std::move(assignment), std::move(caps)),
                      search.best(), search.best() != kNegInf && search.unique(),
                      count, search.leaves()};
}

OracleResult OptimalNswBruteforce(const Market& market, std::int64_t budget) {
  return OptimalNswBruteforce(ComputeUtilityMatrix(market), market.capacities(),
                              budget);
}

double GreedyLogNswUpperBound(const UtilityMatrix& utilities, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
  const Vector outside = DisagreementPoints(utilities);
  double bound = 0.0;
  for (int i = 0; i < utilities.num_agents(); ++i) {
    const double best_gain = utilities.values.row(i).maxCoeff() - outside(i);
    bound += std::log(std::max(best_gain, epsilon));
  }
  return bound;
}

}  // namespace smatch
