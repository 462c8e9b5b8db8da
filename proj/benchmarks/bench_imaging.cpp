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

#include "uwbsense/imaging.hpp"
#include "uwbsense/scene.hpp"

namespace {

uwb::EchoCube sphere_cube(std::size_t n, std::size_t nt) {
  uwb::Scene s;
  s.surfaces.emplace_back(uwb::SphereSurface{{0.0, 0.0, 0.6}, 0.15, 1.0});
  uwb::PulseSpec p;
  p.nt = nt;
  return uwb::synth_echo_cube(s, uwb::ApertureGrid::centered(n, n, 2.8e-3, 2.8e-3), p, 0.0, 0);
}

void BM_FkMigrate(benchmark::State& state) {
  const auto cube = sphere_cube(static_cast<std::size_t>(state.range(0)), 256);
  for (auto _ : state) benchmark::DoNotOptimize(uwb::fk_migrate(cube));
}
BENCHMARK(BM_FkMigrate)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FkMigrateUnpadded(benchmark::State& state) {
  const auto cube = sphere_cube(static_cast<std::size_t>(state.range(0)), 256);
  uwb::FkOptions bare;
  bare.time_padding = 1;
  bare.spatial_padding = 1;
  for (auto _ : state) benchmark::DoNotOptimize(uwb::fk_migrate(cube, uwb::kSpeedOfLight, bare));
}
BENCHMARK(BM_FkMigrateUnpadded)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Seabed(benchmark::State& state) {
  const auto cube = sphere_cube(static_cast<std::size_t>(state.range(0)), 256);
  const double cell = cube.aperture.dx;
  for (auto _ : state) {
    const auto wf = uwb::extract_quasi_wavefront(cube, 0.3);
    const auto g = uwb::rpm_smooth_gradients(wf, 1.5 * cell, 2.0 * uwb::kSpeedOfLight * cube.pulse.dt);
    benchmark::DoNotOptimize(uwb::ibst(wf, g));
  }
}
BENCHMARK(BM_Seabed)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BstForward(benchmark::State& state) {
  uwb::Scene s;
  s.surfaces.emplace_back(uwb::SphereSurface{{0.0, 0.0, 0.6}, 0.15, 1.0});
  const auto grid = uwb::ApertureGrid::centered(64, 64, 2.8e-3, 2.8e-3);
  for (auto _ : state) benchmark::DoNotOptimize(uwb::bst_forward(s, grid));
}
BENCHMARK(BM_BstForward)->Unit(benchmark::kMillisecond);

}  // namespace
