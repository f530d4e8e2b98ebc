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

#ifndef SMATCH_WELFARE_H_
#define SMATCH_WELFARE_H_

#include <functional>
#include <span>

#include "smatch/market.h"
#include "smatch/random.h"

namespace smatch {

inline constexpr double kDefaultEpsilon = 0.01;

struct WelfareReport {
  Vector realized;  // utility of each agent's assigned object
  Vector gains;     // realized - disagreement point
  // sum_i log g_i, or -infinity as soon as some gain is <= 0.
  double log_nsw_strict = 0.0;
  // sum_i log max(g_i, epsilon); always finite.
  double log_nsw_clipped = 0.0;
  // Agents strictly below their disagreement point.
  int ir_violation_count = 0;
  double ir_violation_rate = 0.0;
  double mean_utility = 0.0;
  double median_utility = 0.0;
  double min_utility = 0.0;
  double max_utility = 0.0;
  double std_dev = 0.0;  // population standard deviation
};

// Throws kInvalidArgument unless epsilon > 0.
WelfareReport ComputeWelfare(const Allocation& allocation,
                             const UtilityMatrix& utilities,
                             double epsilon = kDefaultEpsilon);

// prod_i g_i, or 0 when some gain is not strictly positive. Only sensible
// for a handful of agents; use the log forms otherwise.
double NswProduct(const Vector& gains);

// Two-sample Kolmogorov-Smirnov statistic sup_t |F_a(t) - F_b(t)|,
// evaluated exactly on the pooled jump points. Throws kEmptySample.
double KsDistance(std::span<const double> sample_a,
                  std::span<const double> sample_b);

// One-sample statistic sup_t |F_n(t) - F(t)| against a continuous CDF.
double KsDistanceToCdf(std::span<const double> sample,
                       const std::function<double(double)>& cdf);

// lambda = sqrt(log(2 / delta) / (2 X)), the deviation at which the
// Dvoretzky-Kiefer-Wolfowitz-Massart tail 2 exp(-2 lambda^2 X) equals delta.
// Throws kInvalidArgument unless X >= 1 and 0 < delta < 1.
double DkwmLambda(int num_features, double delta);
double DkwmTail(int num_features, double lambda);

// Kendall tau-b with tie correction in numerator and denominator. Throws
// kDegenerateAllTies when either vector is constant, kDimensionMismatch for
// unequal lengths and kInvalidArgument for fewer than two entries.
double KendallTau(std::span<const double> scores_a,
                  std::span<const double> scores_b);

struct TruthfulnessTrial {
  Vector reported;
  double ks = 0.0;
};

// reported = truth + N(0, noise_sigma^2) per coordinate; ks compares the
// reported and true weight samples of the agent.
TruthfulnessTrial RunTruthfulnessTrial(const Vector& truth, double noise_sigma,
                                       Rng& rng);

}  // namespace smatch

#endif  // SMATCH_WELFARE_H_
