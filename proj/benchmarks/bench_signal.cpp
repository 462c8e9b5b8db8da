// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The uwbsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "uwbsense/filter.hpp"
#include "uwbsense/signal.hpp"

namespace {

std::vector<uwb::cplx> noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<uwb::cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

void BM_FftPow2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const uwb::FftPlan plan(n);
  auto data = noise(n);
  for (auto _ : state) {
    plan.forward(data);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FftPow2)->RangeMultiplier(4)->Range(64, 1 << 16)->Complexity(benchmark::oNLogN);

void BM_FftBluestein(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const uwb::FftPlan plan(n);
  auto data = noise(n);
  for (auto _ : state) {
    plan.forward(data);
    benchmark::DoNotOptimize(data.data());
  }
}
BENCHMARK(BM_FftBluestein)->Arg(100)->Arg(1000)->Arg(12000);

void BM_Filtfilt(benchmark::State& state) {
  const auto sos = uwb::butterworth(4, 0.5, 100.0, uwb::FilterKind::HighPass);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (auto& v : x) v = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(uwb::filtfilt(sos, x));
}
BENCHMARK(BM_Filtfilt)->Arg(12000);

}  // namespace

BENCHMARK_MAIN();
