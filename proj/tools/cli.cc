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

#include "cli.h"

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "smatch/error.h"
#include "smatch/experiment.h"
#include "smatch/io.h"
#include "smatch/spectral.h"

namespace smatch::cli {
namespace {

struct Flags {
  std::string config;
  std::string market;
  std::string features;
  std::string preferences;
  std::string capacities;
  std::vector<std::string> mechanisms;
  std::string seeds;
  std::vector<double> noise;
  std::vector<std::string> dists;
  std::vector<std::string> models;
  double strength = 0.0;
  double epsilon = kDefaultEpsilon;
  std::string format;
  std::string out;
  int agents = 0;
  int objects = 0;
  int repetitions = 0;
};

// "--seeds 100" means seeds 0..99; "--seeds 3,7,11" lists them.
std::vector<std::uint64_t> ParseSeeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  try {
    if (text.find(',') == std::string::npos) {
      const long long count = std::stoll(text);
      if (count <= 0) throw Error(ErrorCode::kInvalidArgument, "seeds must be non-empty");
      for (long long k = 0; k < count; ++k) seeds.push_back(k);
    } else {
      std::stringstream in(text);
      std::string item;
      while (std::getline(in, item, ',')) seeds.push_back(std::stoull(item));
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kInvalidArgument, "cannot parse --seeds '" + text + "'");
  }
  return seeds;
}

bool Has(const CLI::App& cmd, const std::string& name) {
  const CLI::Option* option = cmd.get_option_no_throw(name);
  return option != nullptr && option->count() > 0;
}

ExperimentConfig BuildConfig(const CLI::App& cmd, const Flags& f,
                             bool want_synthetic) {
  ExperimentConfig config;
  if (!f.config.empty()) config = ParseExperimentConfig(ReadFile(f.config));

  if (Has(cmd, "--market") || Has(cmd, "--features")) {
    MarketFiles files;
    files.bundle = f.market;
    files.features = f.features;
    files.preferences = f.preferences;
    files.capacities = f.capacities;
    config.files = files;
    config.synthetic.reset();
  } else if (want_synthetic && !config.files && !config.synthetic) {
    config.synthetic = SyntheticMarketSpec{};
  }
  if (config.synthetic) {
    if (Has(cmd, "--agents")) config.synthetic->num_agents = f.agents;
    if (Has(cmd, "--objects")) config.synthetic->num_objects = f.objects;
  }
  if (Has(cmd, "--mechanisms")) {
    config.mechanisms.clear();
    for (const std::string& name : f.mechanisms) {
      const auto kind = ParseMechanism(name);
      if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown mechanism " + name);
      config.mechanisms.push_back(*kind);
    }
  }
  if (Has(cmd, "--seeds")) config.seeds = ParseSeeds(f.seeds);
  if (Has(cmd, "--noise")) config.noise = f.noise;
  if (Has(cmd, "--dist")) {
    config.distributions.clear();
    for (const std::string& name : f.dists) {
      const auto d = ParsePreferenceDist(name);
      if (!d) throw Error(ErrorCode::kInvalidArgument, "unknown distribution " + name);
      config.distributions.push_back(*d);
    }
  }
  if (Has(cmd, "--model")) {
    config.models.clear();
    for (const std::string& name : f.models) {
      const auto m = ParseUtilityModel(name);
      if (!m) throw Error(ErrorCode::kInvalidArgument, "unknown model " + name);
      config.models.push_back(*m);
    }
  }
  if (Has(cmd, "--strength")) config.strength = f.strength;
  if (Has(cmd, "--epsilon")) config.epsilon = f.epsilon;
  if (Has(cmd, "--format")) {
    config.format = f.format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  }
  if (Has(cmd, "--out")) config.out = f.out;
  if (Has(cmd, "--reps")) config.timing_repetitions = f.repetitions;
  config.Validate();
  return config;
}

Market LoadMarket(const MarketFiles& files) {
  if (!files.bundle.empty()) return LoadMarketJson(files.bundle);
  return LoadMarketCsv(files.features, files.preferences, files.capacities);
}

void Emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    WriteFile(path, text);
  }
}

std::string FormatDiagnostics(const DiagnosticReport& d, OutputFormat format) {
  const Vector& s = d.singular_values;
  if (format == OutputFormat::kJson) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      rows.push_back({{"k", k + 1},
                      {"sigma", s(k)},
                      {"component_ratio", d.component_ratios(k)},
                      {"rho_k", ExplainedVarianceRatio(s, static_cast<int>(k) + 1)}});
    }
    return nlohmann::json{{"components", rows},
                          {"rho1", d.rho1},
                          {"effective_rank", d.effective_rank},
                          {"band", std::string(DeploymentBandName(d.band))},
                          {"threshold", d.approx_ratio_note},
                          {"tie_warning", d.tie_warning}}
               .dump(2) +
           "\n";
  }
  std::string text = "k,sigma,component_ratio,rho_k\n";
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    text += fmt::format("{},{:.10g},{:.10g},{:.10g}\n", k + 1, s(k),
                        d.component_ratios(k),
                        ExplainedVarianceRatio(s, static_cast<int>(k) + 1));
  }
  text += fmt::format(
      "\nrho1,effective_rank,band,tie_warning,threshold\n"
      "{:.10g},{:.10g},{},{},\"{}\"\n",
      d.rho1, d.effective_rank, DeploymentBandName(d.band),
      d.tie_warning ? "true" : "false", d.approx_ratio_note);
  return text;
}

void AddMarketFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--features", f.features, "Feature CSV (rows = objects)");
  cmd->add_option("--preferences", f.preferences, "Preference CSV (rows = agents)");
  cmd->add_option("--capacities", f.capacities, "Capacities, one integer per line");
  cmd->add_option("--market", f.market, "Bundled JSON market");
}

void AddRunFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config");
  cmd->add_option("--mechanisms", f.mechanisms,
                  "svd, svd2d, random, serial, oracle")
      ->delimiter(',');
  cmd->add_option("--seeds", f.seeds, "Seed count or comma-separated list");
  cmd->add_option("--epsilon", f.epsilon, "Gain floor for clipped log-NSW")
      ->default_val(kDefaultEpsilon);
  cmd->add_option("--format", f.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", f.out, "Write output to this path");
  cmd->add_option("--reps", f.repetitions, "Timing repetitions")
      ->check(CLI::PositiveNumber);
}

void AddSyntheticFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--noise", f.noise, "Reporting-noise levels")->delimiter(',');
  cmd->add_option("--dist", f.dists, "Preference distributions")->delimiter(',');
  cmd->add_option("--agents", f.agents, "Synthetic agent count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--objects", f.objects, "Synthetic object count")
      ->check(CLI::PositiveNumber);
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateSpectrum:
    case ErrorCode::kAllZeroSpectrum:
      return kExitDegenerateSpectrum;
    case ErrorCode::kTooLarge:
      return kExitTooLarge;
    default:
      return kExitInvalidInput;
  }
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Spectral one-sided matching: mechanisms, diagnostics and "
               "experiments"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* match = app.add_subcommand("match", "Run mechanisms on one market");
  AddMarketFlags(match, f);
  AddRunFlags(match, f);

  CLI::App* diagnose =
      app.add_subcommand("diagnose", "Spectral diagnostics of a feature matrix");
  diagnose->add_option("--features", f.features, "Feature CSV")->required();
  diagnose->add_option("--format", f.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  diagnose->add_option("--out", f.out, "Write output to this path");

  CLI::App* bench = app.add_subcommand("bench", "Seeded synthetic benchmark");
  AddRunFlags(bench, f);
  AddSyntheticFlags(bench, f);

  CLI::App* robustness =
      app.add_subcommand("robustness", "Distribution, noise and model sweeps");
  AddRunFlags(robustness, f);
  AddSyntheticFlags(robustness, f);
  robustness->add_option("--model", f.models, "Utility models (name or 1-10)")
      ->delimiter(',');
  robustness->add_option("--strength", f.strength, "Non-linearity strength");

  CLI::App* pedagogical =
      app.add_subcommand("pedagogical", "Print the three-agent worked example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (*match) {
      const ExperimentConfig config = BuildConfig(*match, f, false);
      if (!config.files) {
        throw Error(ErrorCode::kInvalidArgument, "match needs a market file");
      }
      const RunRecord record =
          RunMatch(LoadMarket(*config.files), config, config.seeds.front());
      Emit(config.format == OutputFormat::kJson ? RunRecordToJson(record) + "\n"
                                                : FormatRunRecordCsv(record),
           config.out, out);
    } else if (*diagnose) {
      const DiagnosticReport report = Diagnose(ReadMatrixCsv(f.features));
      Emit(FormatDiagnostics(report, f.format == "json" ? OutputFormat::kJson
                                                        : OutputFormat::kCsv),
           f.out, out);
    } else if (*bench) {
      const ExperimentConfig config = BuildConfig(*bench, f, true);
      const BenchResult result = RunBench(config);
      Emit(config.format == OutputFormat::kJson ? FormatBenchJson(result)
                                                : FormatBenchCsv(result),
           config.out, out);
    } else if (*robustness) {
      const ExperimentConfig config = BuildConfig(*robustness, f, true);
      const RobustnessResult result = RunRobustness(config);
      Emit(config.format == OutputFormat::kJson ? FormatRobustnessJson(result)
                                                : FormatRobustnessCsv(result),
           config.out, out);
    } else if (*pedagogical) {
      out << FormatPedagogical(RunPedagogical());
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitOk;
}

}  // namespace smatch::cli
