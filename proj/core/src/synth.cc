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

#include "smatch/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "smatch/error.h"
#include "smatch/mechanism.h"

namespace smatch {
namespace {

double SamplePreference(const PreferenceDistSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case PreferenceDist::kNormal:
      return std::normal_distribution<double>(spec.normal_mean,
                                              spec.normal_sd)(rng);
    case PreferenceDist::kUniform:
      return std::uniform_real_distribution<double>(spec.lower,
                                                    spec.upper)(rng);
    case PreferenceDist::kPareto: {
      // Inverse CDF; 1 - U lies in (0, 1].
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const double x = spec.pareto_scale / std::pow(1.0 - u, 1.0 / spec.pareto_shape);
      return spec.pareto_multiplier * x;
    }
    case PreferenceDist::kLogNormal:
      return std::lognormal_distribution<double>(spec.lognormal_mu,
                                                 spec.lognormal_sigma)(rng);
    case PreferenceDist::kBimodal: {
      const bool high = std::bernoulli_distribution(0.5)(rng);
      return std::normal_distribution<double>(
          high ? spec.bimodal_high : spec.bimodal_low, spec.bimodal_sd)(rng);
    }
    case PreferenceDist::kBeta25: {
      const double x = std::gamma_distribution<double>(spec.beta_a, 1.0)(rng);
      const double y = std::gamma_distribution<double>(spec.beta_b, 1.0)(rng);
      return spec.beta_scale * x / (x + y);
    }
    case PreferenceDist::kExponential:
      return std::exponential_distribution<double>(1.0 /
                                                   spec.exponential_mean)(rng);
  }
  return 0.0;
}

double Dot(const Vector& a, const Vector& b) { return a.dot(b); }

}  // namespace

FeatureGenSpec FeatureGenSpec::MediumScale() {
  return {{7.0, 5.5, 6.0, 4.5, 5.0}, {2.0, 1.5, 1.0, 0.8, 0.5}};
}

std::string_view PreferenceDistName(PreferenceDist dist) {
  switch (dist) {
    case PreferenceDist::kNormal:
      return "normal";
    case PreferenceDist::kUniform:
      return "uniform";
    case PreferenceDist::kPareto:
      return "pareto";
    case PreferenceDist::kLogNormal:
      return "lognormal";
    case PreferenceDist::kBimodal:
      return "bimodal";
    case PreferenceDist::kBeta25:
      return "beta25";
    case PreferenceDist::kExponential:
      return "exponential";
  }
  return "unknown";
}

std::optional<PreferenceDist> ParsePreferenceDist(std::string_view name) {
  for (PreferenceDist d : kAllPreferenceDists) {
    if (PreferenceDistName(d) == name) return d;
  }
  return std::nullopt;
}

PreferenceDistSpec PreferenceDistSpec::Of(PreferenceDist kind) {
  PreferenceDistSpec spec;
  spec.kind = kind;
  return spec;
}

Matrix GenerateFeatures(int num_objects, const FeatureGenSpec& spec, Rng& rng) {
  if (spec.means.size() != spec.std_devs.size() || spec.means.empty()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature means and standard deviations must have equal, "
                "non-zero length");
  }
  for (double sd : spec.std_devs) {
    if (!(sd > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "feature standard deviations must be positive");
    }
  }
  if (num_objects < 1) {
    throw Error(ErrorCode::kEmptyMarket, "need at least one object");
  }
  const int x = static_cast<int>(spec.means.size());
  Matrix features(num_objects, x);
  for (int j = 0; j < num_objects; ++j) {
    for (int k = 0; k < x; ++k) {
      features(j, k) =
          std::normal_distribution<double>(spec.means[k], spec.std_devs[k])(rng);
    }
  }
  return features;
}

Matrix GeneratePreferences(int num_agents, int num_features,
                           const PreferenceDistSpec& spec, Rng& rng) {
  if (num_agents < 1 || num_features < 1) {
    throw Error(ErrorCode::kEmptyMarket, "need at least one agent and feature");
  }
  Matrix prefs(num_agents, num_features);
  for (int i = 0; i < num_agents; ++i) {
    for (int k = 0; k < num_features; ++k) {
      prefs(i, k) =
          std::clamp(SamplePreference(spec, rng), spec.lower, spec.upper);
    }
  }
  return prefs;
}

Matrix AddReportingNoise(const Matrix& preferences, double sigma, Rng& rng) {
  if (sigma < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "noise sigma must be >= 0");
  }
  Matrix reported = preferences;
  if (sigma == 0.0) return reported;
  std::normal_distribution<double> noise(0.0, sigma);
  for (Eigen::Index i = 0; i < reported.rows(); ++i) {
    for (Eigen::Index k = 0; k < reported.cols(); ++k) {
      reported(i, k) += noise(rng);
    }
  }
  return reported;
}

std::vector<int> EvenCapacities(int num_agents, int num_objects) {
  if (num_objects < 1) {
    throw Error(ErrorCode::kEmptyMarket, "need at least one object");
  }
  std::vector<int> caps(num_objects, num_agents / num_objects);
  for (int j = 0; j < num_agents % num_objects; ++j) ++caps[j];
  return caps;
}

Market GenerateMarket(const SyntheticMarketSpec& spec, Rng& rng) {
  Matrix features = GenerateFeatures(spec.num_objects, spec.features, rng);
  Matrix prefs = GeneratePreferences(
      spec.num_agents, static_cast<int>(features.cols()), spec.preferences, rng);
  return ValidateMarket(std::move(features), std::move(prefs),
                        EvenCapacities(spec.num_agents, spec.num_objects));
}

std::string_view UtilityModelName(UtilityModel model) {
  switch (model) {
    case UtilityModel::kLinear:
      return "linear";
    case UtilityModel::kQuadratic:
      return "quadratic";
    case UtilityModel::kCobbDouglas:
      return "cobb-douglas";
    case UtilityModel::kThreshold:
      return "threshold";
    case UtilityModel::kConcave:
      return "concave";
    case UtilityModel::kConvex:
      return "convex";
    case UtilityModel::kMaxFeature:
      return "max-feature";
    case UtilityModel::kMlp:
      return "mlp";
    case UtilityModel::kRankBased:
      return "rank";
    case UtilityModel::kRbf:
      return "rbf";
  }
  return "unknown";
}

std::optional<UtilityModel> ParseUtilityModel(std::string_view name) {
  for (UtilityModel m : kAllUtilityModels) {
    if (UtilityModelName(m) == name ||
        std::to_string(static_cast<int>(m)) == name) {
      return m;
    }
  }
  return std::nullopt;
}

double UtilityModelSpec::MaxStrength(UtilityModel kind) {
  switch (kind) {
    case UtilityModel::kQuadratic:
      return 0.01;
    case UtilityModel::kThreshold:
      return 20.0;
    case UtilityModel::kMaxFeature:
      return 4.0;
    case UtilityModel::kRbf:
      return 50.0;
    default:
      return 1.0;
  }
}

UtilityModelSpec UtilityModelSpec::AtMaxStrength(UtilityModel kind,
                                                 std::uint64_t seed) {
  UtilityModelSpec spec;
  spec.kind = kind;
  spec.strength = MaxStrength(kind);
  spec.seed = seed;
  return spec;
}

std::vector<double> FeatureMedians(const Matrix& features) {
  std::vector<double> medians(features.cols());
  for (Eigen::Index k = 0; k < features.cols(); ++k) {
    std::vector<double> col(features.col(k).begin(), features.col(k).end());
    std::sort(col.begin(), col.end());
    const std::size_t n = col.size();
    medians[k] = n % 2 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
  }
  return medians;
}

Vector AverageRanks(const Vector& values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return values(a) < values(b);
  });
  Vector ranks(n);
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && values(order[end]) == values(order[start])) ++end;
    // Positions start..end-1 share ranks start+1..end.
    const double rank = 0.5 * static_cast<double>(start + 1 + end);
    for (Eigen::Index k = start; k < end; ++k) ranks(order[k]) = rank;
    start = end;
  }
  return ranks;
}

TrueUtility::TrueUtility(const UtilityModelSpec& spec, int num_features,
                         std::vector<double> thresholds)
    : spec_(spec),
      num_features_(num_features),
      thresholds_(std::move(thresholds)) {
  if (num_features < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one feature");
  }
  if (spec.strength < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "strength must be >= 0");
  }
  if (thresholds_.empty()) thresholds_.assign(num_features, 0.0);
  if (static_cast<int>(thresholds_.size()) != num_features) {
    throw Error(ErrorCode::kDimensionMismatch,
                "one threshold per feature is required");
  }
  if (spec_.kind == UtilityModel::kMlp) {
    if (spec_.mlp_hidden < 1) {
      throw Error(ErrorCode::kInvalidArgument, "MLP needs a hidden layer");
    }
    Rng rng(spec_.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    hidden_weights_.resize(spec_.mlp_hidden, 3 * num_features);
    hidden_bias_.resize(spec_.mlp_hidden);
    output_weights_.resize(spec_.mlp_hidden);
    for (Eigen::Index r = 0; r < hidden_weights_.rows(); ++r) {
      for (Eigen::Index c = 0; c < hidden_weights_.cols(); ++c) {
        hidden_weights_(r, c) = gauss(rng);
      }
    }
    for (double& b : hidden_bias_) b = gauss(rng);
    for (double& w : output_weights_) w = gauss(rng);
    output_bias_ = gauss(rng);
  }
}

TrueUtility TrueUtility::BindToFeatures(const UtilityModelSpec& spec,
                                        const Matrix& features) {
  std::vector<double> thresholds = FeatureMedians(features);
  if (spec.kind == UtilityModel::kMaxFeature) {
    thresholds.assign(thresholds.size(), spec.strength);
  }
  return TrueUtility(spec, static_cast<int>(features.cols()),
                     std::move(thresholds));
}

double TrueUtility::Mlp(const Vector& u, const Vector& f) const {
  const double s = spec_.mlp_input_scale;
  Vector input(3 * num_features_);
  input.segment(0, num_features_) = s * u;
  input.segment(num_features_, num_features_) = s * f;
  input.segment(2 * num_features_, num_features_) = s * s * u.cwiseProduct(f);
  const Vector hidden =
      (hidden_weights_ * input + hidden_bias_).array().tanh().matrix();
  return output_weights_.dot(hidden) + output_bias_;
}

double TrueUtility::operator()(const Vector& u, const Vector& f) const {
  if (u.size() != num_features_ || f.size() != num_features_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "utility model expects vectors of length " +
                    std::to_string(num_features_));
  }
  const double linear = Dot(u, f);
  switch (spec_.kind) {
    case UtilityModel::kLinear:
      return linear;
    case UtilityModel::kQuadratic:
      // (u (x) u) . (f (x) f) == (u . f)^2
      return linear + spec_.strength * linear * linear;
    case UtilityModel::kCobbDouglas: {
      const double total = u.sum();
      double log_u = 0.0;
      for (int x = 0; x < num_features_; ++x) {
        const double weight = total > 0.0 ? u(x) / total : 1.0 / num_features_;
        const double base = std::max(u(x) * f(x), 0.0) + spec_.cobb_douglas_epsilon;
        log_u += weight * std::log(base);
      }
      return std::exp(log_u);
    }
    case UtilityModel::kThreshold: {
      int above = 0;
      for (int x = 0; x < num_features_; ++x) above += f(x) > thresholds_[x];
      return linear + spec_.strength * above;
    }
    case UtilityModel::kConcave:
      return u.dot(f.cwiseMax(0.0).cwiseSqrt());
    case UtilityModel::kConvex:
      return u.dot(f.cwiseProduct(f));
    case UtilityModel::kMaxFeature: {
      double total = 0.0;
      for (int x = 0; x < num_features_; ++x) {
        total += u(x) * std::max(f(x) - thresholds_[x], 0.0);
      }
      return total;
    }
    case UtilityModel::kMlp:
      return Mlp(u, f);
    case UtilityModel::kRankBased:
      return u.dot(AverageRanks(f));
    case UtilityModel::kRbf: {
      const double bw = spec_.rbf_bandwidth > 0.0
                            ? spec_.rbf_bandwidth
                            : 2.0 * std::sqrt(static_cast<double>(num_features_));
      return linear +
             spec_.strength * std::exp(-(u - f).squaredNorm() / (2.0 * bw * bw));
    }
  }
  return linear;
}

UtilityMatrix TrueUtility::Evaluate(const Matrix& preferences,
                                    const Matrix& features) const {
  UtilityMatrix out{Matrix(preferences.rows(), features.rows())};
  for (Eigen::Index i = 0; i < preferences.rows(); ++i) {
    const Vector u = preferences.row(i).transpose();
    for (Eigen::Index j = 0; j < features.rows(); ++j) {
      out.values(i, j) = (*this)(u, features.row(j).transpose());
    }
  }
  return out;
}

NonlinearTrialResult RunNonlinearTrial(const Market& market,
                                       const UtilityModelSpec& model, Rng& rng) {
  const TrueUtility truth = TrueUtility::BindToFeatures(model, market.features());
  const UtilityMatrix true_utils =
      truth.Evaluate(market.preferences(), market.features());
  const UtilityMatrix proxy = ComputeUtilityMatrix(market);

  SvdMatchResult matched = SvdMatch(market);
  Allocation random = RandomPriority(market, rng);

  NonlinearTrialResult result{matched.allocation, random,
                              ComputeWelfare(matched.allocation, true_utils),
                              ComputeWelfare(random, true_utils)};
  const double scale =
      RealizedUtilities(random, true_utils).cwiseAbs().mean();
  result.gain_over_random_pct =
      scale > 0.0 ? 100.0 *
                        (result.true_welfare.mean_utility -
                         result.random_welfare.mean_utility) /
                        scale
                  : 0.0;

  double tau_sum = 0.0;
  for (int i = 0; i < market.num_agents(); ++i) {
    const Vector a = proxy.values.row(i).transpose();
    const Vector b = true_utils.values.row(i).transpose();
    try {
      tau_sum += KendallTau({a.data(), static_cast<std::size_t>(a.size())},
                            {b.data(), static_cast<std::size_t>(b.size())});
      ++result.tau_agents;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateAllTies) throw;
    }
  }
  result.mean_tau = result.tau_agents > 0 ? tau_sum / result.tau_agents : 0.0;
  return result;
}

}  // namespace smatch
