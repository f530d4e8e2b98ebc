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

#include "smatch/mechanism.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "smatch/assignment.h"
#include "smatch/error.h"

namespace smatch {
namespace {

std::vector<int> CapacityVector(const Market& market) {
  return {market.capacities().begin(), market.capacities().end()};
}

// Object index of every unit slot, objects taken in `object_order`.
std::vector<int> ExpandSlots(std::span<const int> capacities,
                             std::span<const int> object_order) {
  std::vector<int> slots;
  for (int object : object_order) {
    slots.insert(slots.end(), capacities[object], object);
  }
  return slots;
}

}  // namespace

std::vector<int> DescendingOrder(const Vector& scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores(a) > scores(b); });
  return order;
}

std::pair<Allocation, MatchTrace> MatchAlongDirection(const Market& market,
                                                      const Vector& direction) {
  MatchTrace trace;
  trace.projected_object_scores = Project(market.features(), direction);
  trace.projected_agent_scores = Project(market.preferences(), direction);
  trace.object_order = DescendingOrder(trace.projected_object_scores);
  trace.agent_order = DescendingOrder(trace.projected_agent_scores);

  const std::vector<int> slots =
      ExpandSlots(market.capacities(), trace.object_order);
  std::vector<int> assignment(market.num_agents());
  for (std::size_t rank = 0; rank < trace.agent_order.size(); ++rank) {
    assignment[trace.agent_order[rank]] = slots[rank];
  }
  return {Allocation(std::move(assignment), CapacityVector(market)),
          std::move(trace)};
}

SvdMatchResult SvdMatch(const Market& market) {
  const SpectralSummary summary = ComputeSvd(market.features());
  PrincipalDirection direction = ExtractPrincipalDirection(summary);
  auto [allocation, trace] = MatchAlongDirection(market, direction.direction);
  return SvdMatchResult{std::move(allocation), std::move(trace),
                        DiagnoseSpectrum(summary), std::move(direction)};
}

Matrix RankTwoSurrogate(const Market& market, const SpectralSummary& summary) {
  if (market.num_features() < 2) {
    throw Error(ErrorCode::kDimensionMismatch,
                "the two-dimensional variant needs at least two features");
  }
  const Vector& sigma = summary.singular_values;
  if (!(sigma(0) > 0.0)) {
    throw Error(ErrorCode::kDegenerateSpectrum, "sigma_1 is zero");
  }
  const Vector v1 = summary.right_vectors.col(0);
  const Vector v2 = summary.right_vectors.col(1);
  const Vector f1 = market.features() * v1;
  const Vector w1 = market.preferences() * v1;
  Matrix surrogate = w1 * f1.transpose();
  if (sigma(1) > 1e-12 * sigma(0)) {
    const Vector f2 = market.features() * v2;
    const Vector w2 = market.preferences() * v2;
    surrogate += w2 * f2.transpose();
  }
  return surrogate;
}

double SurrogateTotal(const Matrix& surrogate, const Allocation& allocation) {
  double total = 0.0;
  for (int i = 0; i < allocation.num_agents(); ++i) {
    total += surrogate(i, allocation.object_of(i));
  }
  return total;
}

Allocation SvdMatch2D(const Market& market) {
  const SpectralSummary summary = ComputeSvd(market.features());
  const Matrix surrogate = RankTwoSurrogate(market, summary);

  std::vector<int> object_ids(market.num_objects());
  std::iota(object_ids.begin(), object_ids.end(), 0);
  const std::vector<int> slots = ExpandSlots(market.capacities(), object_ids);

  const int n = market.num_agents();
  Matrix profit(n, n);
  for (int s = 0; s < n; ++s) profit.col(s) = surrogate.col(slots[s]);
  const std::vector<int> agent_to_slot = SolveMaxAssignment(profit);

  std::vector<int> assignment(n);
  for (int i = 0; i < n; ++i) assignment[i] = slots[agent_to_slot[i]];
  return Allocation(std::move(assignment), CapacityVector(market));
}

Allocation IrRepair(const Allocation& allocation,
                    const UtilityMatrix& utilities, Rng& rng) {
  const Vector outside = DisagreementPoints(utilities);
  const Vector realized = RealizedUtilities(allocation, utilities);
  std::vector<int> violators;
  std::vector<int> freed;
  for (int i = 0; i < allocation.num_agents(); ++i) {
    if (realized(i) < outside(i)) {
      violators.push_back(i);
      freed.push_back(allocation.object_of(i));
    }
  }
  std::vector<int> assignment(allocation.assignment().begin(),
                              allocation.assignment().end());
  std::shuffle(freed.begin(), freed.end(), rng);
  for (std::size_t k = 0; k < violators.size(); ++k) {
    assignment[violators[k]] = freed[k];
  }
  return Allocation(std::move(assignment),
                    {allocation.capacities().begin(),
                     allocation.capacities().end()});
}

Allocation RandomPriority(const Market& market, Rng& rng) {
  std::vector<int> order(market.num_agents());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<int> remaining = CapacityVector(market);
  std::vector<int> open;
  for (int j = 0; j < market.num_objects(); ++j) {
    if (remaining[j] > 0) open.push_back(j);
  }
  std::vector<int> assignment(market.num_agents());
  for (int agent : order) {
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    const std::size_t slot = pick(rng);
    const int object = open[slot];
    assignment[agent] = object;
    if (--remaining[object] == 0) open.erase(open.begin() + slot);
  }
  return Allocation(std::move(assignment), CapacityVector(market));
}

Allocation SerialDictatorship(const Market& market,
                              std::span<const int> agent_order) {
  const int n = market.num_agents();
  std::vector<bool> seen(n, false);
  if (static_cast<int>(agent_order.size()) != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "agent order must list every agent exactly once");
  }
  for (int agent : agent_order) {
    if (agent < 0 || agent >= n || seen[agent]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "agent order is not a permutation (bad entry " +
                      std::to_string(agent) + ")");
    }
    seen[agent] = true;
  }

  const UtilityMatrix utilities = ComputeUtilityMatrix(market);
  std::vector<int> remaining = CapacityVector(market);
  std::vector<int> assignment(n);
  for (int agent : agent_order) {
    int best = -1;
    for (int j = 0; j < market.num_objects(); ++j) {
      if (remaining[j] == 0) continue;
      if (best < 0 || utilities(agent, j) > utilities(agent, best)) best = j;
    }
    assignment[agent] = best;
    --remaining[best];
  }
  return Allocation(std::move(assignment), CapacityVector(market));
}

}  // namespace smatch
