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

#include <benchmark/benchmark.h>

#include "smatch/mechanism.h"
#include "smatch/oracle.h"
#include "smatch/spectral.h"
#include "smatch/synth.h"
#include "smatch/welfare.h"

namespace smatch {
namespace {

// Ten features with decreasing spread so the spectrum has a clear leader.
FeatureGenSpec TenFeatures() {
  FeatureGenSpec spec;
  for (int x = 0; x < 10; ++x) {
    spec.means.push_back(5.0 + 0.2 * x);
    spec.std_devs.push_back(2.0 / (1.0 + 0.5 * x));
  }
  return spec;
}

Market MakeMarket(int agents, int objects, std::uint64_t seed = 7) {
  SyntheticMarketSpec spec;
  spec.num_agents = agents;
  spec.num_objects = objects;
  spec.features = TenFeatures();
  Rng rng(seed);
  return GenerateMarket(spec, rng);
}

void BM_SvdMatchAgents(benchmark::State& state) {
  const Market market = MakeMarket(static_cast<int>(state.range(0)), 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SvdMatch(market));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SvdMatchAgents)
    ->RangeMultiplier(10)
    ->Range(1000, 100000)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNLogN);

void BM_SvdMatchObjects(benchmark::State& state) {
  const Market market = MakeMarket(10000, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(SvdMatch(market));
  }
}
BENCHMARK(BM_SvdMatchObjects)->RangeMultiplier(4)->Range(16, 4096)
    ->Unit(benchmark::kMicrosecond);

// The individual phases of the mechanism at I = 1e4, J = 200, X = 10.
void BM_PhaseSvd(benchmark::State& state) {
  const Market market = MakeMarket(10000, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeSvd(market.features()));
  }
}
BENCHMARK(BM_PhaseSvd)->Unit(benchmark::kMicrosecond);

void BM_PhaseProjectAgents(benchmark::State& state) {
  const Market market = MakeMarket(10000, 200);
  const PrincipalDirection dir =
      ExtractPrincipalDirection(ComputeSvd(market.features()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Project(market.preferences(), dir.direction));
  }
}
BENCHMARK(BM_PhaseProjectAgents)->Unit(benchmark::kMicrosecond);

void BM_PhaseSortAgents(benchmark::State& state) {
  const Market market = MakeMarket(10000, 200);
  const PrincipalDirection dir =
      ExtractPrincipalDirection(ComputeSvd(market.features()));
  const Vector scores = Project(market.preferences(), dir.direction);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DescendingOrder(scores));
  }
}
BENCHMARK(BM_PhaseSortAgents)->Unit(benchmark::kMicrosecond);

void BM_SvdMatch2D(benchmark::State& state) {
  const Market market = MakeMarket(static_cast<int>(state.range(0)), 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SvdMatch2D(market));
  }
}
BENCHMARK(BM_SvdMatch2D)->Arg(20)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Welfare(benchmark::State& state) {
  const Market market = MakeMarket(10000, 200);
  const UtilityMatrix u = ComputeUtilityMatrix(market);
  const Allocation a = SvdMatch(market).allocation;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeWelfare(a, u));
  }
}
BENCHMARK(BM_Welfare)->Unit(benchmark::kMillisecond);

void BM_OracleSmall(benchmark::State& state) {
  const int agents = static_cast<int>(state.range(0));
  const Market market = MakeMarket(agents, 3);
  const UtilityMatrix u = ComputeUtilityMatrix(market);
  for (auto _ : state) {
    benchmark::DoNotOptimize(OptimalNswBruteforce(u, market.capacities()));
  }
}
BENCHMARK(BM_OracleSmall)->DenseRange(4, 10, 2)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace smatch

BENCHMARK_MAIN();
