// Copyright 2026 The Parity Trace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <string>

#include "ptrace/confused_collector.h"
#include "ptrace/core_model.h"
#include "ptrace/edit_metrics.h"
#include "ptrace/harness.h"
#include "ptrace/parity_tester.h"
#include "ptrace/rng.h"
#include "ptrace/trace_recon.h"

namespace {

std::string RandomBits(int64_t len, uint64_t seed) {
  ptrace::Philox rng(seed);
  std::string s(static_cast<size_t>(len), '0');
  for (char& ch : s) ch = (rng() & 1) ? '1' : '0';
  return s;
}

void BM_EditDistance(benchmark::State& state) {
  std::string a = RandomBits(state.range(0), 1);
  std::string b = RandomBits(state.range(0), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptrace::StringEditDistance(a, b));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EditDistance)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_EditDistanceDP(benchmark::State& state) {
  std::string a = RandomBits(state.range(0), 1);
  std::string b = RandomBits(state.range(0), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptrace::StringEditDistanceDP(a, b));
  }
}
BENCHMARK(BM_EditDistanceDP)->RangeMultiplier(4)->Range(64, 4096);

void BM_PhiMinEigenvaluePath(benchmark::State& state) {
  ptrace::BaseGraph g{ptrace::GraphKind::kPath, state.range(0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptrace::PhiMinEigenvalue(g, 0.1));
  }
}
BENCHMARK(BM_PhiMinEigenvaluePath)->RangeMultiplier(4)->Range(8, 1 << 14);

void BM_MinEigenvalueDense(benchmark::State& state) {
  ptrace::BaseGraph g{ptrace::GraphKind::kPath, state.range(0)};
  ptrace::JoinMatrix phi = ptrace::PhiExpected(g, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptrace::MinEigenvalue(phi));
  }
}
BENCHMARK(BM_MinEigenvalueDense)->RangeMultiplier(4)->Range(8, 512);

void BM_PoissonizedTrace(benchmark::State& state) {
  ptrace::DistributionPair pi =
      ptrace::DistributionPair::Uniform(static_cast<size_t>(state.range(0)));
  double m = 40.0 * static_cast<double>(state.range(0));
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptrace::PoissonizedTrace(pi, m, ++seed));
  }
}
BENCHMARK(BM_PoissonizedTrace)->RangeMultiplier(4)->Range(64, 4096);

void BM_TestUniformityPTLarge(benchmark::State& state) {
  int64_t n = state.range(0);
  ptrace::PTConfig cfg;
  cfg.mode = ptrace::PTMode::kLargeEps;
  double m = ptrace::PTLargeSampleSize(n, cfg.epsilon, 4);
  ptrace::RunLengthTrace runs = ptrace::CircularRuns(ptrace::PoissonizedTrace(
      ptrace::DistributionPair::Uniform(static_cast<size_t>(n)), m, 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptrace::TestUniformityPTLarge(runs, n, cfg, m));
  }
}
BENCHMARK(BM_TestUniformityPTLarge)->RangeMultiplier(4)->Range(64, 4096);

void BM_SampleConfused(benchmark::State& state) {
  int64_t n = state.range(0);
  ptrace::PartialDistribution p;
  p.w.assign(static_cast<size_t>(n), 1.0 / static_cast<double>(n));
  ptrace::BaseGraph g{ptrace::GraphKind::kCycle, n};
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptrace::SampleConfused(
        p, 10.0 * static_cast<double>(n), g, 0.5, ++seed));
  }
}
BENCHMARK(BM_SampleConfused)->RangeMultiplier(4)->Range(64, 16384);

void BM_LearnKAlternating(benchmark::State& state) {
  std::string t = ptrace::NoisyString(
      ptrace::UniformBlockString(state.range(0), 16, '1'), 0.1, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptrace::LearnKAlternating(t, 15));
  }
}
BENCHMARK(BM_LearnKAlternating)->RangeMultiplier(4)->Range(256, 65536);

void BM_NBlockFlips(benchmark::State& state) {
  std::string x = RandomBits(state.range(0), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptrace::NBlockFlips(x, 16));
  }
}
BENCHMARK(BM_NBlockFlips)->RangeMultiplier(4)->Range(256, 65536);

}  // namespace

BENCHMARK_MAIN();
