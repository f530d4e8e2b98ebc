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

#ifndef SMATCH_SYNTH_H_
#define SMATCH_SYNTH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smatch/market.h"
#include "smatch/random.h"
#include "smatch/welfare.h"

namespace smatch {

// Independent N(mean_x, std_dev_x^2) draws for every object feature.
struct FeatureGenSpec {
  std::vector<double> means;
  std::vector<double> std_devs;

  // Five-feature medium-scale setup: feature 1 varies most, feature 5 least.
  static FeatureGenSpec MediumScale();
};

enum class PreferenceDist {
  kNormal,
  kUniform,
  kPareto,
  kLogNormal,
  kBimodal,
  kBeta25,
  kExponential,
};

inline constexpr PreferenceDist kAllPreferenceDists[] = {
    PreferenceDist::kNormal,  PreferenceDist::kUniform,
    PreferenceDist::kPareto,  PreferenceDist::kLogNormal,
    PreferenceDist::kBimodal, PreferenceDist::kBeta25,
    PreferenceDist::kExponential,
};

std::string_view PreferenceDistName(PreferenceDist dist);
std::optional<PreferenceDist> ParsePreferenceDist(std::string_view name);

// Every draw is clamped into [lower, upper] after sampling.
struct PreferenceDistSpec {
  PreferenceDist kind = PreferenceDist::kNormal;
  double lower = 0.0;
  double upper = 10.0;

  double normal_mean = 5.0;
  double normal_sd = 2.0;
  // Pareto(scale, shape) multiplied by pareto_multiplier (mean 5 with the
  // defaults).
  double pareto_shape = 2.0;
  double pareto_scale = 1.0;
  double pareto_multiplier = 2.5;
  double lognormal_mu = 1.3;
  double lognormal_sigma = 0.5;
  // Equal mixture of N(mode_low, sd^2) and N(mode_high, sd^2).
  double bimodal_low = 3.0;
  double bimodal_high = 7.0;
  double bimodal_sd = 1.0;
  // beta_scale * Beta(beta_a, beta_b).
  double beta_a = 2.0;
  double beta_b = 5.0;
  double beta_scale = 10.0;
  double exponential_mean = 5.0;

  static PreferenceDistSpec Of(PreferenceDist kind);
};

Matrix GenerateFeatures(int num_objects, const FeatureGenSpec& spec, Rng& rng);
Matrix GeneratePreferences(int num_agents, int num_features,
                           const PreferenceDistSpec& spec, Rng& rng);

// Adds N(0, sigma^2) to every reported weight (no clamping).
Matrix AddReportingNoise(const Matrix& preferences, double sigma, Rng& rng);

// Capacities of `num_objects` objects summing to `num_agents` as evenly as
// possible (the first I mod J objects get one extra seat).
std::vector<int> EvenCapacities(int num_agents, int num_objects);

struct SyntheticMarketSpec {
  int num_agents = 100;
  int num_objects = 20;
  FeatureGenSpec features = FeatureGenSpec::MediumScale();
  PreferenceDistSpec preferences;
};

Market GenerateMarket(const SyntheticMarketSpec& spec, Rng& rng);

// Ground-truth utility families used to stress the linear proxy.
enum class UtilityModel {
  kLinear = 1,
  kQuadratic = 2,
  kCobbDouglas = 3,
  kThreshold = 4,
  kConcave = 5,
  kConvex = 6,
  kMaxFeature = 7,
  kMlp = 8,
  kRankBased = 9,
  kRbf = 10,
};

inline constexpr UtilityModel kAllUtilityModels[] = {
    UtilityModel::kLinear,     UtilityModel::kQuadratic,
    UtilityModel::kCobbDouglas, UtilityModel::kThreshold,
    UtilityModel::kConcave,    UtilityModel::kConvex,
    UtilityModel::kMaxFeature, UtilityModel::kMlp,
    UtilityModel::kRankBased,  UtilityModel::kRbf,
};

std::string_view UtilityModelName(UtilityModel model);
// Accepts the short name ("concave") or the model number ("5").
std::optional<UtilityModel> ParseUtilityModel(std::string_view name);

// Strength meaning per model:
//   quadratic    alpha, U = u.f + alpha (u.f)^2
//   threshold    beta,  U = u.f + beta * #{x : f_x > tau_x}
//   max-feature  the common threshold, U = sum_x u_x max(f_x - strength, 0)
//   rbf          gamma, U = u.f + gamma exp(-|u - f|^2 / (2 bw^2))
// The remaining models have no knob and ignore it.
struct UtilityModelSpec {
  UtilityModel kind = UtilityModel::kLinear;
  double strength = 0.0;
  std::uint64_t seed = 0;
  int mlp_hidden = 16;
  // MLP inputs are (u, f) scaled by mlp_input_scale and u*f scaled by its
  // square, keeping tanh out of saturation on a 0-10 rating scale.
  double mlp_input_scale = 0.1;
  double cobb_douglas_epsilon = 0.1;
  // Zero means 2 * sqrt(X).
  double rbf_bandwidth = 0.0;

  static double MaxStrength(UtilityModel kind);
  static UtilityModelSpec AtMaxStrength(UtilityModel kind,
                                        std::uint64_t seed = 0);
};

// A utility model bound to a feature dimension and thresholds. Thresholds
// default to zero; BindToFeatures() sets them to the per-feature medians of
// a concrete feature matrix, or to the strength for max-feature.
class TrueUtility {
 public:
  TrueUtility(const UtilityModelSpec& spec, int num_features,
              std::vector<double> thresholds = {});

  static TrueUtility BindToFeatures(const UtilityModelSpec& spec,
                                    const Matrix& features);

  // Negative feature values are clamped at zero before square roots and in
  // the Cobb-Douglas factors.
  double operator()(const Vector& u, const Vector& f) const;

  // I x J matrix of true utilities.
  UtilityMatrix Evaluate(const Matrix& preferences,
                         const Matrix& features) const;

  const UtilityModelSpec& spec() const { return spec_; }
  std::span<const double> thresholds() const { return thresholds_; }

 private:
  double Mlp(const Vector& u, const Vector& f) const;

  UtilityModelSpec spec_;
  int num_features_;
  std::vector<double> thresholds_;
  Matrix hidden_weights_;  // hidden x 3X
  Vector hidden_bias_;
  Vector output_weights_;
  double output_bias_ = 0.0;
};

// Column-wise medians.
std::vector<double> FeatureMedians(const Matrix& features);

// Average ranks 1..n of the entries of `values` (ties share their mean rank).
Vector AverageRanks(const Vector& values);

struct NonlinearTrialResult {
  Allocation proxy_allocation;
  Allocation random_allocation;
  WelfareReport true_welfare;
  WelfareReport random_welfare;
  // Relative to the mean absolute true utility under the random allocation.
  double gain_over_random_pct = 0.0;
  // Mean per-agent Kendall tau-b between linear-proxy and true object scores,
  // over agents whose true scores are not all tied.
  double mean_tau = 0.0;
  int tau_agents = 0;
};

// Runs the spectral mechanism on the reported linear view of `market`,
// evaluates it (and a random-priority baseline drawn from `rng`) under the
// true utility `model`, with the market's preferences as true weights.
NonlinearTrialResult RunNonlinearTrial(const Market& market,
                                       const UtilityModelSpec& model, Rng& rng);

}  // namespace smatch

#endif  // SMATCH_SYNTH_H_
