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

#include "smatch/welfare.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "smatch/error.h"

namespace smatch {
namespace {

double Median(std::vector<double> values) {
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

int Sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

WelfareReport ComputeWelfare(const Allocation& allocation,
                             const UtilityMatrix& utilities, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
  WelfareReport report;
  report.realized = RealizedUtilities(allocation, utilities);
  report.gains = report.realized - DisagreementPoints(utilities);

  const int n = allocation.num_agents();
  bool all_positive = true;
  double strict = 0.0;
  double clipped = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = report.gains(i);
    if (g > 0.0) {
      strict += std::log(g);
    } else {
      all_positive = false;
    }
    if (g < 0.0) ++report.ir_violation_count;
    clipped += std::log(std::max(g, epsilon));
  }
  report.log_nsw_strict =
      all_positive ? strict : -std::numeric_limits<double>::infinity();
  report.log_nsw_clipped = clipped;
  report.ir_violation_rate = static_cast<double>(report.ir_violation_count) / n;

  report.mean_utility = report.realized.mean();
  report.min_utility = report.realized.minCoeff();
  report.max_utility = report.realized.maxCoeff();
  report.median_utility = Median(
      std::vector<double>(report.realized.begin(), report.realized.end()));
  report.std_dev = std::sqrt(
      (report.realized.array() - report.mean_utility).square().mean());
  return report;
}

double NswProduct(const Vector& gains) {
  double product = 1.0;
  for (double g : gains) {
    if (!(g > 0.0)) return 0.0;
    product *= g;
  }
  return product;
}

double KsDistance(std::span<const double> sample_a,
                  std::span<const double> sample_b) {
  if (sample_a.empty() || sample_b.empty()) {
    throw Error(ErrorCode::kEmptySample, "KS distance needs two non-empty samples");
  }
  std::vector<double> a(sample_a.begin(), sample_a.end());
  std::vector<double> b(sample_b.begin(), sample_b.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double best = 0.0;
  // Walk the pooled jump points; both CDFs are right-continuous so all copies
  // of a value are consumed before comparing.
  while (ia < a.size() || ib < b.size()) {
    double t;
    if (ib == b.size() || (ia < a.size() && a[ia] <= b[ib])) {
      t = a[ia];
    } else {
      t = b[ib];
    }
    while (ia < a.size() && a[ia] <= t) ++ia;
    while (ib < b.size() && b[ib] <= t) ++ib;
    best = std::max(best, std::abs(ia / na - ib / nb));
  }
  return best;
}

double KsDistanceToCdf(std::span<const double> sample,
                       const std::function<double(double)>& cdf) {
  if (sample.empty()) {
    throw Error(ErrorCode::kEmptySample, "KS distance needs a non-empty sample");
  }
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double best = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double f = cdf(x[k]);
    best = std::max({best, (k + 1) / n - f, f - k / n});
  }
  return best;
}

double DkwmLambda(int num_features, double delta) {
  if (num_features < 1 || !(delta > 0.0) || !(delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "DKWM lambda needs X >= 1 and 0 < delta < 1");
  }
  return std::sqrt(std::log(2.0 / delta) / (2.0 * num_features));
}

double DkwmTail(int num_features, double lambda) {
  return 2.0 * std::exp(-2.0 * lambda * lambda * num_features);
}

double KendallTau(std::span<const double> scores_a,
                  std::span<const double> scores_b) {
  if (scores_a.size() != scores_b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Kendall tau needs equal-length score vectors");
  }
  const std::size_t n = scores_a.size();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "Kendall tau needs two or more items");
  }
  long long score = 0;
  long long ties_a = 0;
  long long ties_b = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int da = Sign(scores_a[i] - scores_a[j]);
      const int db = Sign(scores_b[i] - scores_b[j]);
      if (da == 0) ++ties_a;
      if (db == 0) ++ties_b;
      score += da * db;
    }
  }
  const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
  if (ties_a == pairs || ties_b == pairs) {
    throw Error(ErrorCode::kDegenerateAllTies,
                "Kendall tau is undefined for a constant score vector");
  }
  return static_cast<double>(score) /
         std::sqrt(static_cast<double>(pairs - ties_a) *
                   static_cast<double>(pairs - ties_b));
}

TruthfulnessTrial RunTruthfulnessTrial(const Vector& truth, double noise_sigma,
                                       Rng& rng) {
  if (noise_sigma < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "noise sigma must be >= 0");
  }
  TruthfulnessTrial trial;
  trial.reported = truth;
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (double& w : trial.reported) w += noise(rng);
  }
  trial.ks = KsDistance(std::span<const double>(trial.reported.data(),
                                                trial.reported.size()),
                        std::span<const double>(truth.data(), truth.size()));
  return trial;
}

}  // namespace smatch
