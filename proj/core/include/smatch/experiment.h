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

#ifndef SMATCH_EXPERIMENT_H_
#define SMATCH_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smatch/market.h"
#include "smatch/mechanism.h"
#include "smatch/oracle.h"
#include "smatch/random.h"
#include "smatch/spectral.h"
#include "smatch/synth.h"
#include "smatch/welfare.h"

namespace smatch {

enum class MechanismKind { kSvd, kSvd2D, kRandom, kSerial, kOracle };

std::string_view MechanismName(MechanismKind kind);
std::optional<MechanismKind> ParseMechanism(std::string_view name);

enum class OutputFormat { kCsv, kJson };

// Either a bundled JSON market or the three CSV files.
struct MarketFiles {
  std::string bundle;
  std::string features;
  std::string preferences;
  std::string capacities;
};

struct ExperimentConfig {
  std::optional<MarketFiles> files;
  std::optional<SyntheticMarketSpec> synthetic;
  std::vector<MechanismKind> mechanisms = {
      MechanismKind::kSvd, MechanismKind::kRandom, MechanismKind::kSerial};
  std::vector<double> noise = {0.0};
  std::vector<PreferenceDist> distributions = {PreferenceDist::kNormal};
  std::vector<UtilityModel> models;
  // Unset means each model's maximum strength.
  std::optional<double> strength;
  std::vector<std::uint64_t> seeds = {0};
  double epsilon = kDefaultEpsilon;
  OutputFormat format = OutputFormat::kCsv;
  std::string out;  // empty: standard output
  int timing_repetitions = 5;

  // Throws kInvalidArgument unless exactly one market source is set, seeds
  // are non-empty, epsilon > 0 and every noise level is >= 0.
  void Validate() const;
};

// JSON config file; see README for the schema. Unknown keys are rejected.
ExperimentConfig ParseExperimentConfig(std::string_view text);
std::string FormatExperimentConfig(const ExperimentConfig& config);

// Independent, reproducible engine for (seed, stream).
Rng StreamRng(std::uint64_t seed, std::uint64_t stream);

struct PhaseTimings {
  double decomposition_us = 0.0;
  double projection_us = 0.0;
  double sort_us = 0.0;
  double match_us = 0.0;
  double total_us = 0.0;
};

struct TimedSvdMatch {
  SvdMatchResult result;
  PhaseTimings timings;  // per-phase medians over the repetitions
};

// The rank-1 mechanism run phase by phase under a monotonic clock.
TimedSvdMatch RunTimedSvdMatch(const Market& market, int repetitions);

struct MechanismOutcome {
  MechanismKind kind = MechanismKind::kSvd;
  std::vector<int> assignment;
  WelfareReport welfare;
  // 100 * exp((clipped log-NSW - greedy bound) / I): the clipped geometric
  // mean gain as a share of the greedy ceiling.
  double pct_of_upper_bound = 0.0;
  double time_us = 0.0;
};

struct RunRecord {
  std::string config_echo;  // JSON text
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::string distribution;
  std::vector<MechanismOutcome> outcomes;
  DiagnosticReport diagnostics;
  PhaseTimings timings;
  double mean_ks = 0.0;
  std::optional<double> mean_tau;
  double greedy_upper_bound = 0.0;
};

std::string RunRecordToJson(const RunRecord& record);
RunRecord RunRecordFromJson(std::string_view text);
bool operator==(const RunRecord& a, const RunRecord& b);

// Runs the configured mechanisms on one market whose reported preferences
// are also the true ones. Throws kDegenerateSpectrum for an all-zero feature
// matrix and kTooLarge when the oracle is selected on a big instance.
RunRecord RunMatch(const Market& market, const ExperimentConfig& config,
                   std::uint64_t seed = 0);

// Evaluates `reported_market` allocations under `true_utilities`.
RunRecord RunMatchAgainstTruth(const Market& reported_market,
                               const UtilityMatrix& true_utilities,
                               const Matrix& true_preferences,
                               const ExperimentConfig& config,
                               std::uint64_t seed);

struct BenchRow {
  MechanismKind mechanism = MechanismKind::kSvd;
  double noise = 0.0;
  int seeds = 0;
  double mean_utility = 0.0;
  double median_utility = 0.0;
  double min_utility = 0.0;
  double max_utility = 0.0;
  double std_dev = 0.0;
  double log_nsw_strict = 0.0;  // -inf if any seed had -inf
  double log_nsw_clipped = 0.0;
  double ir_violation_rate = 0.0;
  double mean_ks = 0.0;
  double pct_of_upper_bound = 0.0;
  double time_us = 0.0;
};

struct BenchResult {
  std::vector<RunRecord> records;  // one per (seed, noise), canonical order
  std::vector<BenchRow> rows;      // one per (mechanism, noise)
};

// Synthetic sweep: for every seed a fresh market is drawn from the first
// configured distribution; every noise level perturbs the same true
// weights with the same standard-normal draws scaled by sigma.
BenchResult RunBench(const ExperimentConfig& config);

struct DistributionNoiseRow {
  PreferenceDist distribution = PreferenceDist::kNormal;
  double noise = 0.0;
  double pct_gain_over_random = 0.0;
  double log_nsw_clipped = 0.0;
  double pct_of_upper_bound = 0.0;
  double ir_violation_rate = 0.0;
  double mean_ks = 0.0;
};

struct ModelRow {
  UtilityModel model = UtilityModel::kLinear;
  double strength = 0.0;
  double pct_gain_over_random = 0.0;
  // 100 * (gain_linear - gain_model) / |gain_linear|; positive when the
  // mechanism gains less over random than it does under linear utilities.
  double loss_vs_linear_pct = 0.0;
  double mean_tau = 0.0;
};

struct RobustnessResult {
  std::vector<DistributionNoiseRow> grid;
  std::vector<ModelRow> models;
};

// Per-seed outcome of one distribution/noise cell.
struct RobustnessCell {
  double pct_gain_over_random = 0.0;
  double log_nsw_clipped = 0.0;
  double pct_of_upper_bound = 0.0;
  double ir_violation_rate = 0.0;
  double mean_ks = 0.0;
  double svd_mean_true_utility = 0.0;
};

RobustnessCell RunRobustnessCell(const SyntheticMarketSpec& spec,
                                 double noise, double epsilon,
                                 std::uint64_t seed);

RobustnessResult RunRobustness(const ExperimentConfig& config);

std::string FormatRunRecordCsv(const RunRecord& record);
std::string FormatBenchCsv(const BenchResult& result);
std::string FormatBenchJson(const BenchResult& result);
std::string FormatRobustnessCsv(const RobustnessResult& result);
std::string FormatRobustnessJson(const RobustnessResult& result);

// The three-agent, three-product worked example.
Market PedagogicalMarket();

struct PedagogicalReport {
  Market market;
  UtilityMatrix utilities;
  SpectralSummary svd;
  PrincipalDirection direction;
  MatchTrace trace;
  Allocation allocation;
  Vector disagreement;
  WelfareReport welfare;
  double nsw_product = 0.0;
  double sigma_ratio = 0.0;
  double rho1 = 0.0;
  double effective_rank = 0.0;
  OracleResult oracle;
  double elapsed_ms = 0.0;
};

PedagogicalReport RunPedagogical();
std::string FormatPedagogical(const PedagogicalReport& report);

}  // namespace smatch

#endif  // SMATCH_EXPERIMENT_H_
