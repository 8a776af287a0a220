// Copyright 2026 The SPEED Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Serial vs OpenMP-parallel paths of the two data-parallel kernels:
// aggregate-noise sampling and the per-query privacy analysis.
#include <benchmark/benchmark.h>

#include "speed/accountant.hpp"
#include "speed/genlap.hpp"

namespace {

using namespace speed;

void BM_SampleAggregates(benchmark::State& state, Execution exec) {
  const NoiseParams params{0.1, 1.0, 250};
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_aggregates(params, count, 1, exec));
  }
  state.SetItemsProcessed(state.iterations() * count);
}

void BM_Analyze(benchmark::State& state, Execution exec) {
  VoteHistogram votes;
  votes.n = 250;
  votes.k = 10;
  std::vector<int> row(10, 25);
  row[0] = 40;
  row[9] = 10;
  votes.queries.assign(static_cast<std::size_t>(state.range(0)), row);
  const NoiseParams params{0.1, 0.9, 250};
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze(votes, params, 1e-5, 25, exec));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK_CAPTURE(BM_SampleAggregates, serial, Execution::kSerial)
    ->Arg(1 << 12)
    ->Arg(1 << 15);
BENCHMARK_CAPTURE(BM_SampleAggregates, parallel, Execution::kParallel)
    ->Arg(1 << 12)
    ->Arg(1 << 15);
BENCHMARK_CAPTURE(BM_Analyze, serial, Execution::kSerial)->Arg(64)->Arg(512);
BENCHMARK_CAPTURE(BM_Analyze, parallel, Execution::kParallel)
    ->Arg(64)
    ->Arg(512);

}  // namespace

BENCHMARK_MAIN();
