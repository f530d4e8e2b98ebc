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

#ifndef SMATCH_MECHANISM_H_
#define SMATCH_MECHANISM_H_

#include <span>
#include <utility>
#include <vector>

#include "smatch/market.h"
#include "smatch/random.h"
#include "smatch/spectral.h"

namespace smatch {

// Audit trail of the rank-1 mechanism. Orders are sorted by descending
// projected score with ascending original index as the tie-breaker.
struct MatchTrace {
  std::vector<int> object_order;
  std::vector<int> agent_order;
  Vector projected_object_scores;
  Vector projected_agent_scores;
};

struct SvdMatchResult {
  Allocation allocation;
  MatchTrace trace;
  DiagnosticReport diagnostics;
  PrincipalDirection direction;
};

// Descending stable order of `scores` (ties -> lower index first).
std::vector<int> DescendingOrder(const Vector& scores);

// Steps 3-6 of the rank-1 mechanism for an arbitrary unit direction: project
// both sides, sort, expand object j into M_j consecutive slots and zip the
// sorted agents onto the slots.
std::pair<Allocation, MatchTrace> MatchAlongDirection(const Market& market,
                                                      const Vector& direction);

// Full rank-1 spectral mechanism. Throws kDegenerateSpectrum for an all-zero
// feature matrix; RandomPriority() is the suggested fallback.
SvdMatchResult SvdMatch(const Market& market);

// Rank-2 surrogate utility (w.v1)(f.v1) + (w.v2)(f.v2), I x J. The second
// term is dropped when sigma_2 <= 1e-12 sigma_1 so that an exactly rank-1
// feature matrix yields the rank-1 surrogate without rounding noise.
Matrix RankTwoSurrogate(const Market& market, const SpectralSummary& summary);

// Sum over agents of surrogate(i, a(i)).
double SurrogateTotal(const Matrix& surrogate, const Allocation& allocation);

// Exact maximizer of the rank-2 surrogate over capacity-feasible
// allocations (Hungarian method on the slot-expanded problem). Requires
// X >= 2 (kDimensionMismatch otherwise) and sigma_1 > 0.
Allocation SvdMatch2D(const Market& market);

// Agents strictly below their disagreement point give up their objects and
// the freed objects are dealt back to them in uniformly random order.
// Everyone else keeps their assignment, so capacities remain exact.
Allocation IrRepair(const Allocation& allocation,
                    const UtilityMatrix& utilities, Rng& rng);

// Uniformly random agent order; each agent draws uniformly among the objects
// that still have capacity.
Allocation RandomPriority(const Market& market, Rng& rng);

// Each agent in `agent_order` takes its best remaining object under the
// reported linear utilities (lowest index on ties). Throws kInvalidArgument
// if `agent_order` is not a permutation of the agents.
Allocation SerialDictatorship(const Market& market,
                              std::span<const int> agent_order);

}  // namespace smatch

#endif  // SMATCH_MECHANISM_H_
