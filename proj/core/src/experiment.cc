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

#include "smatch/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"
#include "smatch/error.h"

namespace smatch {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

enum Stream : std::uint64_t {
  kMarketStream = 1,
  kNoiseStream = 2,
  kRandomStream = 3,
  kSerialStream = 4,
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double MicrosSince(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string Cell(double x) { return fmt::format("{:.10g}", x); }

json Num(double x) {
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  return x;
}

double NumFrom(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "-inf") return kNegInf;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::kParseError, "bad numeric token '" + s + "'");
  }
  return j.get<double>();
}

json VectorToJson(const Vector& v) {
  json out = json::array();
  for (double x : v) out.push_back(Num(x));
  return out;
}

Vector VectorFromJson(const json& j) {
  Vector v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v(k) = NumFrom(j[k]);
  return v;
}

double PctOfUpperBound(double clipped, double bound, int agents) {
  return 100.0 * std::exp((clipped - bound) / agents);
}

std::vector<int> RandomOrder(int n, Rng rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

double MeanKs(const Matrix& reported, const Matrix& truth) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < truth.rows(); ++i) {
    const Vector a = reported.row(i).transpose();
    const Vector b = truth.row(i).transpose();
    total += KsDistance({a.data(), static_cast<std::size_t>(a.size())},
                        {b.data(), static_cast<std::size_t>(b.size())});
  }
  return total / static_cast<double>(truth.rows());
}

json WelfareToJson(const WelfareReport& w) {
  return {{"realized", VectorToJson(w.realized)},
          {"gains", VectorToJson(w.gains)},
          {"log_nsw_strict", Num(w.log_nsw_strict)},
          {"log_nsw_clipped", Num(w.log_nsw_clipped)},
          {"ir_violation_count", w.ir_violation_count},
          {"ir_violation_rate", Num(w.ir_violation_rate)},
          {"mean_utility", Num(w.mean_utility)},
          {"median_utility", Num(w.median_utility)},
          {"min_utility", Num(w.min_utility)},
          {"max_utility", Num(w.max_utility)},
          {"std_dev", Num(w.std_dev)}};
}

WelfareReport WelfareFromJson(const json& j) {
  WelfareReport w;
  w.realized = VectorFromJson(j.at("realized"));
  w.gains = VectorFromJson(j.at("gains"));
  w.log_nsw_strict = NumFrom(j.at("log_nsw_strict"));
  w.log_nsw_clipped = NumFrom(j.at("log_nsw_clipped"));
  w.ir_violation_count = j.at("ir_violation_count").get<int>();
  w.ir_violation_rate = NumFrom(j.at("ir_violation_rate"));
  w.mean_utility = NumFrom(j.at("mean_utility"));
  w.median_utility = NumFrom(j.at("median_utility"));
  w.min_utility = NumFrom(j.at("min_utility"));
  w.max_utility = NumFrom(j.at("max_utility"));
  w.std_dev = NumFrom(j.at("std_dev"));
  return w;
}

bool SameWelfare(const WelfareReport& a, const WelfareReport& b) {
  auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return a.realized == b.realized && a.gains == b.gains &&
         same(a.log_nsw_strict, b.log_nsw_strict) &&
         same(a.log_nsw_clipped, b.log_nsw_clipped) &&
         a.ir_violation_count == b.ir_violation_count &&
         a.ir_violation_rate == b.ir_violation_rate &&
         a.mean_utility == b.mean_utility &&
         a.median_utility == b.median_utility &&
         a.min_utility == b.min_utility && a.max_utility == b.max_utility &&
         a.std_dev == b.std_dev;
}

json DiagnosticsToJson(const DiagnosticReport& d) {
  return {{"rho1", Num(d.rho1)},
          {"effective_rank", Num(d.effective_rank)},
          {"band", std::string(DeploymentBandName(d.band))},
          {"approx_ratio_note", d.approx_ratio_note},
          {"tie_warning", d.tie_warning},
          {"singular_values", VectorToJson(d.singular_values)},
          {"component_ratios", VectorToJson(d.component_ratios)}};
}

DiagnosticReport DiagnosticsFromJson(const json& j) {
  DiagnosticReport d;
  d.rho1 = NumFrom(j.at("rho1"));
  d.effective_rank = NumFrom(j.at("effective_rank"));
  d.band = BandForRho1(d.rho1);
  if (j.at("band").get<std::string>() != DeploymentBandName(d.band)) {
    throw Error(ErrorCode::kParseError, "band does not match rho1");
  }
  d.approx_ratio_note = j.at("approx_ratio_note").get<std::string>();
  d.tie_warning = j.at("tie_warning").get<bool>();
  d.singular_values = VectorFromJson(j.at("singular_values"));
  d.component_ratios = VectorFromJson(j.at("component_ratios"));
  return d;
}

json TimingsToJson(const PhaseTimings& t) {
  return {{"decomposition_us", t.decomposition_us},
          {"projection_us", t.projection_us},
          {"sort_us", t.sort_us},
          {"match_us", t.match_us},
          {"total_us", t.total_us}};
}

PhaseTimings TimingsFromJson(const json& j) {
  return {j.at("decomposition_us").get<double>(),
          j.at("projection_us").get<double>(), j.at("sort_us").get<double>(),
          j.at("match_us").get<double>(), j.at("total_us").get<double>()};
}

template <typename F>
auto TimeMedian(int repetitions, F&& run, double& median_us) {
  std::vector<double> times;
  auto result = run();
  for (int r = 0; r < std::max(1, repetitions); ++r) {
    const auto start = Clock::now();
    result = run();
    times.push_back(MicrosSince(start));
  }
  median_us = Median(times);
  return result;
}

SyntheticMarketSpec WithDistribution(SyntheticMarketSpec spec,
                                     PreferenceDist dist) {
  spec.preferences = PreferenceDistSpec::Of(dist);
  return spec;
}

}  // namespace

std::string_view MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kSvd:
      return "svd";
    case MechanismKind::kSvd2D:
      return "svd2d";
    case MechanismKind::kRandom:
      return "random";
    case MechanismKind::kSerial:
      return "serial";
    case MechanismKind::kOracle:
      return "oracle";
  }
  return "unknown";
}

std::optional<MechanismKind> ParseMechanism(std::string_view name) {
  for (MechanismKind k : {MechanismKind::kSvd, MechanismKind::kSvd2D,
                          MechanismKind::kRandom, MechanismKind::kSerial,
                          MechanismKind::kOracle}) {
    if (MechanismName(k) == name) return k;
  }
  return std::nullopt;
}

void ExperimentConfig::Validate() const {
  if (files.has_value() == synthetic.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "exactly one market source (files or synthetic) is required");
  }
  if (files && files->bundle.empty() &&
      (files->features.empty() || files->preferences.empty() ||
       files->capacities.empty())) {
    throw Error(ErrorCode::kInvalidArgument,
                "file source needs a bundle or features, preferences and "
                "capacities");
  }
  if (seeds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one seed is required");
  }
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
  for (double n : noise) {
    if (!(n >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "noise levels must be >= 0");
    }
  }
  if (strength && *strength < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "strength must be >= 0");
  }
}

ExperimentConfig ParseExperimentConfig(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  static const char* kKeys[] = {"market", "synthetic", "mechanisms", "noise",
                                "distributions", "models", "strength", "seeds",
                                "epsilon", "format", "out",
                                "timing_repetitions"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* k) {
          return key == k;
        }) == std::end(kKeys)) {
      throw Error(ErrorCode::kParseError, "unknown config key '" + key + "'");
    }
  }

  ExperimentConfig config;
  try {
    if (doc.contains("market")) {
      const json& m = doc["market"];
      MarketFiles files;
      files.bundle = m.value("bundle", "");
      files.features = m.value("features", "");
      files.preferences = m.value("preferences", "");
      files.capacities = m.value("capacities", "");
      config.files = files;
    }
    if (doc.contains("synthetic")) {
      const json& s = doc["synthetic"];
      SyntheticMarketSpec spec;
      spec.num_agents = s.value("agents", spec.num_agents);
      spec.num_objects = s.value("objects", spec.num_objects);
      if (s.contains("feature_means")) {
        spec.features.means = s["feature_means"].get<std::vector<double>>();
      }
      if (s.contains("feature_std_devs")) {
        spec.features.std_devs = s["feature_std_devs"].get<std::vector<double>>();
      }
      config.synthetic = spec;
    }
    if (doc.contains("mechanisms")) {
      config.mechanisms.clear();
      for (const auto& name : doc["mechanisms"].get<std::vector<std::string>>()) {
        const auto kind = ParseMechanism(name);
        if (!kind) throw Error(ErrorCode::kParseError, "unknown mechanism " + name);
        config.mechanisms.push_back(*kind);
      }
    }
    if (doc.contains("noise")) config.noise = doc["noise"].get<std::vector<double>>();
    if (doc.contains("distributions")) {
      config.distributions.clear();
      for (const auto& name :
           doc["distributions"].get<std::vector<std::string>>()) {
        const auto d = ParsePreferenceDist(name);
        if (!d) throw Error(ErrorCode::kParseError, "unknown distribution " + name);
        config.distributions.push_back(*d);
      }
    }
    if (doc.contains("models")) {
      for (const json& m : doc["models"]) {
        const std::string name =
            m.is_number_integer() ? std::to_string(m.get<int>()) : m.get<std::string>();
        const auto model = ParseUtilityModel(name);
        if (!model) throw Error(ErrorCode::kParseError, "unknown model " + name);
        config.models.push_back(*model);
      }
    }
    if (doc.contains("strength")) config.strength = doc["strength"].get<double>();
    if (doc.contains("seeds")) {
      const json& s = doc["seeds"];
      config.seeds.clear();
      if (s.is_number_integer()) {
        for (std::uint64_t k = 0; k < s.get<std::uint64_t>(); ++k) {
          config.seeds.push_back(k);
        }
      } else {
        config.seeds = s.get<std::vector<std::uint64_t>>();
      }
    }
    config.epsilon = doc.value("epsilon", config.epsilon);
    if (doc.contains("format")) {
      const std::string f = doc["format"].get<std::string>();
      if (f == "csv") {
        config.format = OutputFormat::kCsv;
      } else if (f == "json") {
        config.format = OutputFormat::kJson;
      } else {
        throw Error(ErrorCode::kParseError, "format must be csv or json");
      }
    }
    config.out = doc.value("out", config.out);
    config.timing_repetitions =
        doc.value("timing_repetitions", config.timing_repetitions);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return config;
}

std::string FormatExperimentConfig(const ExperimentConfig& config) {
  json doc;
  if (config.files) {
    doc["market"] = {{"bundle", config.files->bundle},
                     {"features", config.files->features},
                     {"preferences", config.files->preferences},
                     {"capacities", config.files->capacities}};
  }
  if (config.synthetic) {
    doc["synthetic"] = {{"agents", config.synthetic->num_agents},
                        {"objects", config.synthetic->num_objects},
                        {"feature_means", config.synthetic->features.means},
                        {"feature_std_devs", config.synthetic->features.std_devs}};
  }
  json mechanisms = json::array();
  for (MechanismKind k : config.mechanisms) {
    mechanisms.push_back(std::string(MechanismName(k)));
  }
  doc["mechanisms"] = mechanisms;
  doc["noise"] = config.noise;
  json dists = json::array();
  for (PreferenceDist d : config.distributions) {
    dists.push_back(std::string(PreferenceDistName(d)));
  }
  doc["distributions"] = dists;
  json models = json::array();
  for (UtilityModel m : config.models) {
    models.push_back(std::string(UtilityModelName(m)));
  }
  doc["models"] = models;
  if (config.strength) doc["strength"] = *config.strength;
  doc["seeds"] = config.seeds;
  doc["epsilon"] = config.epsilon;
  doc["format"] = config.format == OutputFormat::kCsv ? "csv" : "json";
  doc["out"] = config.out;
  doc["timing_repetitions"] = config.timing_repetitions;
  return doc.dump();
}

Rng StreamRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x5eedu};
  return Rng(seq);
}

TimedSvdMatch RunTimedSvdMatch(const Market& market, int repetitions) {
  std::vector<double> decomposition, projection, sorting, matching, total;
  std::optional<SvdMatchResult> last;
  for (int r = 0; r < std::max(1, repetitions); ++r) {
    const auto start = Clock::now();
    SpectralSummary summary = ComputeSvd(market.features());
    PrincipalDirection direction = ExtractPrincipalDirection(summary);
    const auto t1 = Clock::now();

    MatchTrace trace;
    trace.projected_object_scores = Project(market.features(), direction.direction);
    trace.projected_agent_scores =
        Project(market.preferences(), direction.direction);
    const auto t2 = Clock::now();

    trace.object_order = DescendingOrder(trace.projected_object_scores);
    trace.agent_order = DescendingOrder(trace.projected_agent_scores);
    const auto t3 = Clock::now();

    std::vector<int> assignment(market.num_agents());
    std::size_t rank = 0;
    for (int object : trace.object_order) {
      for (int seat = 0; seat < market.capacities()[object]; ++seat) {
        assignment[trace.agent_order[rank++]] = object;
      }
    }
    Allocation allocation(std::move(assignment),
                          {market.capacities().begin(), market.capacities().end()});
    const auto t4 = Clock::now();

    using std::chrono::duration;
    decomposition.push_back(duration<double, std::micro>(t1 - start).count());
    projection.push_back(duration<double, std::micro>(t2 - t1).count());
    sorting.push_back(duration<double, std::micro>(t3 - t2).count());
    matching.push_back(duration<double, std::micro>(t4 - t3).count());
    total.push_back(duration<double, std::micro>(t4 - start).count());
    last.emplace(SvdMatchResult{std::move(allocation), std::move(trace),
                                DiagnoseSpectrum(summary), std::move(direction)});
  }
  return TimedSvdMatch{std::move(*last),
                       PhaseTimings{Median(decomposition), Median(projection),
                                    Median(sorting), Median(matching),
                                    Median(total)}};
}

RunRecord RunMatchAgainstTruth(const Market& reported_market,
                               const UtilityMatrix& true_utilities,
                               const Matrix& true_preferences,
                               const ExperimentConfig& config,
                               std::uint64_t seed) {
  if (reported_market.features().isZero(0.0)) {
    throw Error(ErrorCode::kDegenerateSpectrum,
                "feature matrix is identically zero; use random priority");
  }
  RunRecord record;
  record.config_echo = FormatExperimentConfig(config);
  record.seed = seed;
  record.diagnostics = Diagnose(reported_market.features());
  record.greedy_upper_bound =
      GreedyLogNswUpperBound(true_utilities, config.epsilon);
  const int reps = config.timing_repetitions;

  for (MechanismKind kind : config.mechanisms) {
    MechanismOutcome outcome;
    outcome.kind = kind;
    std::optional<Allocation> allocation;
    switch (kind) {
      case MechanismKind::kSvd: {
        TimedSvdMatch timed = RunTimedSvdMatch(reported_market, reps);
        record.timings = timed.timings;
        outcome.time_us = timed.timings.total_us;
        allocation = std::move(timed.result.allocation);
        break;
      }
      case MechanismKind::kSvd2D:
        allocation = TimeMedian(
            reps, [&] { return SvdMatch2D(reported_market); }, outcome.time_us);
        break;
      case MechanismKind::kRandom: {
        const Rng base = StreamRng(seed, kRandomStream);
        allocation = TimeMedian(
            reps,
            [&] {
              Rng rng = base;
              return RandomPriority(reported_market, rng);
            },
            outcome.time_us);
        break;
      }
      case MechanismKind::kSerial: {
        const std::vector<int> order = RandomOrder(
            reported_market.num_agents(), StreamRng(seed, kSerialStream));
        allocation = TimeMedian(
            reps, [&] { return SerialDictatorship(reported_market, order); },
            outcome.time_us);
        break;
      }
      case MechanismKind::kOracle:
        allocation = TimeMedian(
            1,
            [&] {
              return OptimalNswBruteforce(true_utilities,
                                          reported_market.capacities())
                  .best_allocation;
            },
            outcome.time_us);
        break;
    }
    outcome.assignment.assign(allocation->assignment().begin(),
                              allocation->assignment().end());
    outcome.welfare = ComputeWelfare(*allocation, true_utilities, config.epsilon);
    outcome.pct_of_upper_bound =
        PctOfUpperBound(outcome.welfare.log_nsw_clipped,
                        record.greedy_upper_bound, allocation->num_agents());
    record.outcomes.push_back(std::move(outcome));
  }
  record.mean_ks = MeanKs(reported_market.preferences(), true_preferences);
  return record;
}

RunRecord RunMatch(const Market& market, const ExperimentConfig& config,
                   std::uint64_t seed) {
  return RunMatchAgainstTruth(market, ComputeUtilityMatrix(market),
                              market.preferences(), config, seed);
}

std::string RunRecordToJson(const RunRecord& record) {
  json doc;
  doc["config"] = record.config_echo;
  doc["seed"] = record.seed;
  doc["noise"] = record.noise;
  doc["distribution"] = record.distribution;
  json outcomes = json::array();
  for (const MechanismOutcome& o : record.outcomes) {
    outcomes.push_back({{"mechanism", std::string(MechanismName(o.kind))},
                        {"assignment", o.assignment},
                        {"welfare", WelfareToJson(o.welfare)},
                        {"pct_of_upper_bound", Num(o.pct_of_upper_bound)},
                        {"time_us", o.time_us}});
  }
  doc["outcomes"] = outcomes;
  doc["diagnostics"] = DiagnosticsToJson(record.diagnostics);
  doc["timings"] = TimingsToJson(record.timings);
  doc["mean_ks"] = record.mean_ks;
  doc["mean_tau"] = record.mean_tau ? json(*record.mean_tau) : json(nullptr);
  doc["greedy_upper_bound"] = Num(record.greedy_upper_bound);
  return doc.dump(2);
}

RunRecord RunRecordFromJson(std::string_view text) {
  RunRecord record;
  try {
    const json doc = json::parse(text);
    record.config_echo = doc.at("config").get<std::string>();
    record.seed = doc.at("seed").get<std::uint64_t>();
    record.noise = doc.at("noise").get<double>();
    record.distribution = doc.at("distribution").get<std::string>();
    for (const json& o : doc.at("outcomes")) {
      MechanismOutcome outcome;
      const auto kind = ParseMechanism(o.at("mechanism").get<std::string>());
      if (!kind) throw Error(ErrorCode::kParseError, "unknown mechanism");
      outcome.kind = *kind;
      outcome.assignment = o.at("assignment").get<std::vector<int>>();
      outcome.welfare = WelfareFromJson(o.at("welfare"));
      outcome.pct_of_upper_bound = NumFrom(o.at("pct_of_upper_bound"));
      outcome.time_us = o.at("time_us").get<double>();
      record.outcomes.push_back(std::move(outcome));
    }
    record.diagnostics = DiagnosticsFromJson(doc.at("diagnostics"));
    record.timings = TimingsFromJson(doc.at("timings"));
    record.mean_ks = doc.at("mean_ks").get<double>();
    if (!doc.at("mean_tau").is_null()) {
      record.mean_tau = doc.at("mean_tau").get<double>();
    }
    record.greedy_upper_bound = NumFrom(doc.at("greedy_upper_bound"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return record;
}

bool operator==(const RunRecord& a, const RunRecord& b) {
  if (a.config_echo != b.config_echo || a.seed != b.seed ||
      a.noise != b.noise || a.distribution != b.distribution ||
      a.outcomes.size() != b.outcomes.size() || a.mean_ks != b.mean_ks ||
      a.mean_tau != b.mean_tau ||
      a.greedy_upper_bound != b.greedy_upper_bound) {
    return false;
  }
  for (std::size_t k = 0; k < a.outcomes.size(); ++k) {
    const MechanismOutcome& x = a.outcomes[k];
    const MechanismOutcome& y = b.outcomes[k];
    if (x.kind != y.kind || x.assignment != y.assignment ||
        !SameWelfare(x.welfare, y.welfare) ||
        x.pct_of_upper_bound != y.pct_of_upper_bound || x.time_us != y.time_us) {
      return false;
    }
  }
  const DiagnosticReport& d = a.diagnostics;
  const DiagnosticReport& e = b.diagnostics;
  const PhaseTimings& t = a.timings;
  const PhaseTimings& u = b.timings;
  return d.rho1 == e.rho1 && d.effective_rank == e.effective_rank &&
         d.band == e.band && d.approx_ratio_note == e.approx_ratio_note &&
         d.tie_warning == e.tie_warning &&
         d.singular_values == e.singular_values &&
         d.component_ratios == e.component_ratios &&
         t.decomposition_us == u.decomposition_us &&
         t.projection_us == u.projection_us && t.sort_us == u.sort_us &&
         t.match_us == u.match_us && t.total_us == u.total_us;
}

BenchResult RunBench(const ExperimentConfig& config) {
  config.Validate();
  if (!config.synthetic) {
    throw Error(ErrorCode::kInvalidArgument, "bench needs a synthetic market spec");
  }
  const PreferenceDist dist = config.distributions.empty()
                                  ? PreferenceDist::kNormal
                                  : config.distributions.front();
  const SyntheticMarketSpec spec = WithDistribution(*config.synthetic, dist);

  BenchResult result;
  for (std::uint64_t seed : config.seeds) {
    Rng market_rng = StreamRng(seed, kMarketStream);
    const Market truth = GenerateMarket(spec, market_rng);
    const UtilityMatrix true_utils = ComputeUtilityMatrix(truth);
    for (double noise : config.noise) {
      Rng noise_rng = StreamRng(seed, kNoiseStream);
      const Market reported = ValidateMarket(
          truth.features(), AddReportingNoise(truth.preferences(), noise, noise_rng),
          {truth.capacities().begin(), truth.capacities().end()});
      RunRecord record = RunMatchAgainstTruth(reported, true_utils,
                                              truth.preferences(), config, seed);
      record.noise = noise;
      record.distribution = std::string(PreferenceDistName(dist));
      result.records.push_back(std::move(record));
    }
  }

  for (MechanismKind kind : config.mechanisms) {
    for (double noise : config.noise) {
      BenchRow row;
      row.mechanism = kind;
      row.noise = noise;
      for (const RunRecord& record : result.records) {
        if (record.noise != noise) continue;
        for (const MechanismOutcome& o : record.outcomes) {
          if (o.kind != kind) continue;
          ++row.seeds;
          row.mean_utility += o.welfare.mean_utility;
          row.median_utility += o.welfare.median_utility;
          row.min_utility += o.welfare.min_utility;
          row.max_utility += o.welfare.max_utility;
          row.std_dev += o.welfare.std_dev;
          row.log_nsw_strict += o.welfare.log_nsw_strict;
          row.log_nsw_clipped += o.welfare.log_nsw_clipped;
          row.ir_violation_rate += o.welfare.ir_violation_rate;
          row.mean_ks += record.mean_ks;
          row.pct_of_upper_bound += o.pct_of_upper_bound;
          row.time_us += o.time_us;
        }
      }
      if (row.seeds > 0) {
        const double n = row.seeds;
        for (double* field :
             {&row.mean_utility, &row.median_utility, &row.min_utility,
              &row.max_utility, &row.std_dev, &row.log_nsw_strict,
              &row.log_nsw_clipped, &row.ir_violation_rate, &row.mean_ks,
              &row.pct_of_upper_bound, &row.time_us}) {
          *field /= n;
        }
      }
      result.rows.push_back(row);
    }
  }
  return result;
}

RobustnessCell RunRobustnessCell(const SyntheticMarketSpec& spec, double noise,
                                 double epsilon, std::uint64_t seed) {
  Rng market_rng = StreamRng(seed, kMarketStream);
  const Market truth = GenerateMarket(spec, market_rng);
  const UtilityMatrix true_utils = ComputeUtilityMatrix(truth);
  Rng noise_rng = StreamRng(seed, kNoiseStream);
  const Market reported = ValidateMarket(
      truth.features(), AddReportingNoise(truth.preferences(), noise, noise_rng),
      {truth.capacities().begin(), truth.capacities().end()});

  const Allocation svd = SvdMatch(reported).allocation;
  Rng random_rng = StreamRng(seed, kRandomStream);
  const Allocation random = RandomPriority(truth, random_rng);
  const WelfareReport svd_welfare = ComputeWelfare(svd, true_utils, epsilon);
  const WelfareReport random_welfare = ComputeWelfare(random, true_utils, epsilon);

  RobustnessCell cell;
  cell.svd_mean_true_utility = svd_welfare.mean_utility;
  cell.pct_gain_over_random =
      100.0 * (svd_welfare.mean_utility - random_welfare.mean_utility) /
      std::abs(random_welfare.mean_utility);
  cell.log_nsw_clipped = svd_welfare.log_nsw_clipped;
  cell.pct_of_upper_bound = PctOfUpperBound(
      svd_welfare.log_nsw_clipped, GreedyLogNswUpperBound(true_utils, epsilon),
      truth.num_agents());
  cell.ir_violation_rate = svd_welfare.ir_violation_rate;
  cell.mean_ks = MeanKs(reported.preferences(), truth.preferences());
  return cell;
}

RobustnessResult RunRobustness(const ExperimentConfig& config) {
  config.Validate();
  if (!config.synthetic) {
    throw Error(ErrorCode::kInvalidArgument,
                "robustness needs a synthetic market spec");
  }
  RobustnessResult result;
  const double seeds = static_cast<double>(config.seeds.size());
  for (PreferenceDist dist : config.distributions) {
    const SyntheticMarketSpec spec = WithDistribution(*config.synthetic, dist);
    for (double noise : config.noise) {
      DistributionNoiseRow row;
      row.distribution = dist;
      row.noise = noise;
      for (std::uint64_t seed : config.seeds) {
        const RobustnessCell cell =
            RunRobustnessCell(spec, noise, config.epsilon, seed);
        row.pct_gain_over_random += cell.pct_gain_over_random;
        row.log_nsw_clipped += cell.log_nsw_clipped;
        row.pct_of_upper_bound += cell.pct_of_upper_bound;
        row.ir_violation_rate += cell.ir_violation_rate;
        row.mean_ks += cell.mean_ks;
      }
      row.pct_gain_over_random /= seeds;
      row.log_nsw_clipped /= seeds;
      row.pct_of_upper_bound /= seeds;
      row.ir_violation_rate /= seeds;
      row.mean_ks /= seeds;
      result.grid.push_back(row);
    }
  }

  if (config.models.empty()) return result;
  const SyntheticMarketSpec spec = WithDistribution(
      *config.synthetic, config.distributions.empty()
                             ? PreferenceDist::kNormal
                             : config.distributions.front());
  auto run_model = [&](UtilityModel model, ModelRow& row) {
    row.model = model;
    row.strength = config.strength.value_or(UtilityModelSpec::MaxStrength(model));
    for (std::uint64_t seed : config.seeds) {
      Rng market_rng = StreamRng(seed, kMarketStream);
      const Market market = GenerateMarket(spec, market_rng);
      UtilityModelSpec model_spec = UtilityModelSpec::AtMaxStrength(model, seed);
      model_spec.strength = row.strength;
      Rng rng = StreamRng(seed, kRandomStream);
      const NonlinearTrialResult trial = RunNonlinearTrial(market, model_spec, rng);
      row.pct_gain_over_random += trial.gain_over_random_pct;
      row.mean_tau += trial.mean_tau;
    }
    // Sum first and divide once so identical per-seed values average exactly.
    row.pct_gain_over_random /= seeds;
    row.mean_tau /= seeds;
  };
  ModelRow linear;
  run_model(UtilityModel::kLinear, linear);
  for (UtilityModel model : config.models) {
    ModelRow row;
    if (model == UtilityModel::kLinear) {
      row = linear;
    } else {
      run_model(model, row);
    }
    row.loss_vs_linear_pct =
        linear.pct_gain_over_random != 0.0
            ? 100.0 * (linear.pct_gain_over_random - row.pct_gain_over_random) /
                  std::abs(linear.pct_gain_over_random)
            : 0.0;
    result.models.push_back(row);
  }
  return result;
}

std::string FormatRunRecordCsv(const RunRecord& record) {
  std::ostringstream out;
  out << "mechanism,seed,mean_utility,median_utility,min_utility,max_utility,"
         "std_dev,log_nsw_strict,log_nsw_clipped,ir_violation_count,"
         "ir_violation_rate,pct_of_upper_bound,time_us,rho1,effective_rank,band,"
         "assignment\n";
  for (const MechanismOutcome& o : record.outcomes) {
    const WelfareReport& w = o.welfare;
    std::string assignment;
    for (std::size_t i = 0; i < o.assignment.size(); ++i) {
      assignment += (i ? " " : "") + std::to_string(o.assignment[i]);
    }
    out << MechanismName(o.kind) << ',' << record.seed << ','
        << Cell(w.mean_utility) << ',' << Cell(w.median_utility) << ','
        << Cell(w.min_utility) << ',' << Cell(w.max_utility) << ','
        << Cell(w.std_dev) << ',' << Cell(w.log_nsw_strict) << ','
        << Cell(w.log_nsw_clipped) << ',' << w.ir_violation_count << ','
        << Cell(w.ir_violation_rate) << ',' << Cell(o.pct_of_upper_bound) << ','
        << Cell(o.time_us) << ',' << Cell(record.diagnostics.rho1) << ','
        << Cell(record.diagnostics.effective_rank) << ','
        << DeploymentBandName(record.diagnostics.band) << ',' << assignment
        << '\n';
  }
  return out.str();
}

std::string FormatBenchCsv(const BenchResult& result) {
  std::ostringstream out;
  out << "mechanism,noise,seeds,mean_utility,median_utility,min_utility,"
         "max_utility,std_dev,log_nsw_strict,log_nsw_clipped,"
         "ir_violation_rate,mean_ks,pct_of_upper_bound,time_us\n";
  for (const BenchRow& r : result.rows) {
    out << MechanismName(r.mechanism) << ',' << Cell(r.noise) << ',' << r.seeds
        << ',' << Cell(r.mean_utility) << ',' << Cell(r.median_utility) << ','
        << Cell(r.min_utility) << ',' << Cell(r.max_utility) << ','
        << Cell(r.std_dev) << ',' << Cell(r.log_nsw_strict) << ','
        << Cell(r.log_nsw_clipped) << ',' << Cell(r.ir_violation_rate) << ','
        << Cell(r.mean_ks) << ',' << Cell(r.pct_of_upper_bound) << ','
        << Cell(r.time_us) << '\n';
  }
  return out.str();
}

std::string FormatBenchJson(const BenchResult& result) {
  json rows = json::array();
  for (const BenchRow& r : result.rows) {
    rows.push_back({{"mechanism", std::string(MechanismName(r.mechanism))},
                    {"noise", r.noise},
                    {"seeds", r.seeds},
                    {"mean_utility", Num(r.mean_utility)},
                    {"median_utility", Num(r.median_utility)},
                    {"min_utility", Num(r.min_utility)},
                    {"max_utility", Num(r.max_utility)},
                    {"std_dev", Num(r.std_dev)},
                    {"log_nsw_strict", Num(r.log_nsw_strict)},
                    {"log_nsw_clipped", Num(r.log_nsw_clipped)},
                    {"ir_violation_rate", Num(r.ir_violation_rate)},
                    {"mean_ks", Num(r.mean_ks)},
                    {"pct_of_upper_bound", Num(r.pct_of_upper_bound)},
                    {"time_us", r.time_us}});
  }
  json records = json::array();
  for (const RunRecord& rec : result.records) {
    records.push_back(json::parse(RunRecordToJson(rec)));
  }
  return json{{"rows", rows}, {"records", records}}.dump(2) + "\n";
}

std::string FormatRobustnessCsv(const RobustnessResult& result) {
  std::ostringstream out;
  out << "# distribution_noise\n"
         "distribution,noise_sigma,pct_gain_over_random,log_nsw_clipped,"
         "pct_of_upper_bound,ir_violation_rate,mean_ks\n";
  for (const DistributionNoiseRow& r : result.grid) {
    out << PreferenceDistName(r.distribution) << ',' << Cell(r.noise) << ','
        << Cell(r.pct_gain_over_random) << ',' << Cell(r.log_nsw_clipped) << ','
        << Cell(r.pct_of_upper_bound) << ',' << Cell(r.ir_violation_rate) << ','
        << Cell(r.mean_ks) << '\n';
  }

  // Pivot of the same grid: gain over random by distribution and noise.
  std::vector<double> levels;
  for (const DistributionNoiseRow& r : result.grid) {
    if (std::find(levels.begin(), levels.end(), r.noise) == levels.end()) {
      levels.push_back(r.noise);
    }
  }
  out << "\n# noise_sensitivity\ndistribution";
  for (double level : levels) out << ",noise_" << Cell(level);
  out << '\n';
  std::vector<PreferenceDist> dists;
  for (const DistributionNoiseRow& r : result.grid) {
    if (std::find(dists.begin(), dists.end(), r.distribution) == dists.end()) {
      dists.push_back(r.distribution);
    }
  }
  for (PreferenceDist d : dists) {
    out << PreferenceDistName(d);
    for (double level : levels) {
      for (const DistributionNoiseRow& r : result.grid) {
        if (r.distribution == d && r.noise == level) {
          out << ',' << Cell(r.pct_gain_over_random);
        }
      }
    }
    out << '\n';
  }

  out << "\n# nonlinear\nmodel,strength,pct_gain_over_random,"
         "loss_vs_linear_pct,mean_kendall_tau\n";
  for (const ModelRow& r : result.models) {
    out << UtilityModelName(r.model) << ',' << Cell(r.strength) << ','
        << Cell(r.pct_gain_over_random) << ',' << Cell(r.loss_vs_linear_pct)
        << ',' << Cell(r.mean_tau) << '\n';
  }
  return out.str();
}

std::string FormatRobustnessJson(const RobustnessResult& result) {
  json grid = json::array();
  for (const DistributionNoiseRow& r : result.grid) {
    grid.push_back({{"distribution", std::string(PreferenceDistName(r.distribution))},
                    {"noise_sigma", r.noise},
                    {"pct_gain_over_random", Num(r.pct_gain_over_random)},
                    {"log_nsw_clipped", Num(r.log_nsw_clipped)},
                    {"pct_of_upper_bound", Num(r.pct_of_upper_bound)},
                    {"ir_violation_rate", Num(r.ir_violation_rate)},
                    {"mean_ks", Num(r.mean_ks)}});
  }
  json models = json::array();
  for (const ModelRow& r : result.models) {
    models.push_back({{"model", std::string(UtilityModelName(r.model))},
                      {"strength", r.strength},
                      {"pct_gain_over_random", Num(r.pct_gain_over_random)},
                      {"loss_vs_linear_pct", Num(r.loss_vs_linear_pct)},
                      {"mean_kendall_tau", Num(r.mean_tau)}});
  }
  return json{{"distribution_noise", grid}, {"nonlinear", models}}.dump(2) + "\n";
}

Market PedagogicalMarket() {
  Matrix features(3, 3);
  features << 8.5, 1.5, 8.0,  //
      1.5, 8.5, 7.5,          //
      5.5, 5.5, 9.0;
  Matrix prefs(3, 3);
  prefs << 8, 2, 7,  //
      2, 8, 7,       //
      5, 5, 8;
  return ValidateMarket(std::move(features), std::move(prefs), {1, 1, 1});
}

PedagogicalReport RunPedagogical() {
  const auto start = Clock::now();
  Market market = PedagogicalMarket();
  UtilityMatrix utilities = ComputeUtilityMatrix(market);
  SpectralSummary svd = ComputeSvd(market.features());
  PrincipalDirection direction = ExtractPrincipalDirection(svd);
  auto [allocation, trace] = MatchAlongDirection(market, direction.direction);
  Vector disagreement = DisagreementPoints(utilities);
  WelfareReport welfare = ComputeWelfare(allocation, utilities);
  OracleResult oracle = OptimalNswBruteforce(utilities, market.capacities());
  const double nsw = NswProduct(welfare.gains);
  const double ratio = svd.singular_values(0) / svd.singular_values(1);
  const double rho1 = ExplainedVarianceRatio(svd.singular_values, 1);
  const double reff = EffectiveRank(svd.singular_values);
  const double elapsed = MicrosSince(start) / 1000.0;
  return PedagogicalReport{std::move(market),   std::move(utilities),
                           std::move(svd),      std::move(direction),
                           std::move(trace),    std::move(allocation),
                           std::move(disagreement), std::move(welfare),
                           nsw,                 ratio,
                           rho1,                reff,
                           std::move(oracle),   elapsed};
}

std::string FormatPedagogical(const PedagogicalReport& r) {
  std::ostringstream out;
  auto row = [](const auto& v, const char* fmt_spec) {
    std::string s = "(";
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (k) s += ", ";
      s += fmt::format(fmt::runtime(fmt_spec), v(k));
    }
    return s + ")";
  };
  out << "Pedagogical market: I = 3 agents, J = 3 products, X = 3 features, "
         "M = (1, 1, 1)\n\n";
  for (int j = 0; j < 3; ++j) {
    out << "f_" << j + 1 << " = "
        << row(Vector(r.market.features().row(j).transpose()), "{:.1f}") << '\n';
  }
  for (int i = 0; i < 3; ++i) {
    out << "w_" << i + 1 << " = "
        << row(Vector(r.market.preferences().row(i).transpose()), "{:.0f}")
        << '\n';
  }
  out << "\nUtilities U_ij = w_i . f_j\n";
  for (int i = 0; i < 3; ++i) {
    out << "  " << row(Vector(r.utilities.values.row(i).transpose()), "{:7.2f}")
        << '\n';
  }
  out << "\nsigma = " << row(r.svd.singular_values, "{:.3f}") << '\n';
  out << fmt::format("sigma_1 / sigma_2 = {:.2f}\n", r.sigma_ratio);
  out << fmt::format("rho_1 = {:.3f}   r_eff = {:.3f}   band = {}\n", r.rho1,
                     r.effective_rank,
                     DeploymentBandName(BandForRho1(r.rho1)));
  out << "v_1 = " << row(r.direction.direction, "{:.4f}")
      << "  (largest entry positive; the opposite orientation "
      << row(Vector(-r.direction.direction), "{:.4f}")
      << " is equally valid and yields the same matching)\n";
  out << "\nProjected product scores f~ = "
      << row(r.trace.projected_object_scores, "{:.3f}") << '\n';
  out << "  under the opposite orientation: "
      << row(Vector(-r.trace.projected_object_scores), "{:.3f}") << '\n';
  out << "Projected agent scores   w~ = "
      << row(r.trace.projected_agent_scores, "{:.3f}") << '\n';
  out << "  under the opposite orientation: "
      << row(Vector(-r.trace.projected_agent_scores), "{:.3f}") << '\n';

  out << "\nProduct order: ";
  for (std::size_t k = 0; k < r.trace.object_order.size(); ++k) {
    out << (k ? " > " : "") << 'P' << r.trace.object_order[k] + 1;
  }
  out << "\nAgent order:   ";
  for (std::size_t k = 0; k < r.trace.agent_order.size(); ++k) {
    out << (k ? " > " : "") << 'A' << r.trace.agent_order[k] + 1;
  }
  out << "\n\nAllocation:\n";
  for (int i = 0; i < r.allocation.num_agents(); ++i) {
    const int j = r.allocation.object_of(i);
    out << fmt::format("  A{} -> P{}  (utility {:.2f})\n", i + 1, j + 1,
                       r.utilities(i, j));
  }
  out << "\nDisagreement points o = " << row(r.disagreement, "{:.2f}") << '\n';
  out << "Gains g = " << row(r.welfare.gains, "{:.2f}") << '\n';
  out << fmt::format("NSW = {:.2f}   log-NSW = {:.3f}\n", r.nsw_product,
                     r.welfare.log_nsw_strict);
  out << fmt::format(
      "Oracle: {} feasible allocations, best log-NSW {:.3f}, unique = {}, "
      "matches mechanism = {}\n",
      r.oracle.enumerated_count, r.oracle.best_log_nsw,
      r.oracle.unique ? "yes" : "no",
      r.oracle.best_allocation == r.allocation ? "yes" : "no");
  out << fmt::format("Elapsed: {:.3f} ms\n", r.elapsed_ms);
  return out.str();
}

}  // namespace smatch
