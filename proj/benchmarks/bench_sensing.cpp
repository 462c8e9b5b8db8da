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

#include <cmath>

#include "uwbsense/array.hpp"
#include "uwbsense/imaging.hpp"
#include "uwbsense/microdoppler.hpp"
#include "uwbsense/vitals.hpp"

namespace {

void BM_VitalsPipeline(benchmark::State& state) {
  uwb::DisplacementModel m;
  m.heart.ibi_sequence = uwb::modulated_ibi_sequence(1.0, 0.1, 0.1, 120.0);
  const auto d = uwb::synth_displacement(m, 100.0, 120.0);
  const double k = uwb::kTwoPi * 26.4e9 / uwb::kSpeedOfLight;
  const auto iq = uwb::synth_iq(d, k, {1.0, 0.0}, {5.0, 0.0}, std::pow(10.0, -1.5), 3);
  for (auto _ : state) {
    const auto cr = uwb::remove_static_clutter(iq, uwb::ClutterMode::CircleFit);
    const auto dh = uwb::suppress_respiration(uwb::demodulate_phase(cr.trace));
    benchmark::DoNotOptimize(uwb::estimate_ibi(dh));
  }
}
BENCHMARK(BM_VitalsPipeline)->Unit(benchmark::kMillisecond);

void BM_CaponSpectrum(benchmark::State& state) {
  const double lambda = uwb::kSpeedOfLight / 26.4e9;
  const auto pos = uwb::uniform_line(static_cast<std::size_t>(state.range(0)), lambda / 2.0);
  const std::vector<uwb::FarFieldSource> src{{-20.0, 1.0}, {20.0, 1.0}};
  const auto cov = uwb::estimate_covariance(uwb::synth_array_snapshots(pos, lambda, src, 0.1, 1000, 100.0, 4));
  for (auto _ : state) benchmark::DoNotOptimize(uwb::capon_spectrum(cov, pos, lambda, uwb::AngleGrid{}));
}
BENCHMARK(BM_CaponSpectrum)->Arg(8)->Arg(32);

void BM_CavityDecode(benchmark::State& state) {
  const auto book = uwb::gen_port_codebook(16, 4096, 1.0, 9);
  std::vector<uwb::ComplexSeries> ch(16, uwb::ComplexSeries{std::vector<uwb::cplx>(64, {1.0, 0.0}), 1.0, 0.0});
  const auto mix = uwb::cavity_encode(ch, book);
  uwb::DecodeOptions opts;
  opts.refine_iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(uwb::cavity_decode(mix, book, opts));
}
BENCHMARK(BM_CavityDecode)->Arg(0)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Spectrogram(benchmark::State& state) {
  uwb::WalkerModel w;
  w.torso_velocity = 1.0;
  w.limbs.push_back({"leg", 0.0, 0.14, 0.9, 0.0, 0.3});
  const auto tr = uwb::simulate_walker(w, 0.01136, 1e-3, 8192, 0.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(uwb::velocity_spectrogram(tr, 128, 32));
}
BENCHMARK(BM_Spectrogram)->Unit(benchmark::kMillisecond);

}  // namespace
