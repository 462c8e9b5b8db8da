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

#include <cmath>
#include <random>

#include "commands.hpp"
#include "uwbsense/array.hpp"
#include "uwbsense/container.hpp"

namespace uwb::cli {

using nlohmann::json;

namespace {

void finish_container(Container& c, const Invocation& inv, std::uint64_t seed) {
  c.seed = seed;
  c.provenance = inv.provenance();
}

int simulate_scene(const Invocation& inv, ConfigNode& cfg, bool wavefront_only) {
  const ApertureGrid grid = parse_aperture(cfg.child("aperture"));
  const PulseSpec pulse = wavefront_only ? PulseSpec{} : parse_pulse(cfg.child("pulse"));
  const Scene scene = parse_scene(cfg.child("scene"));
  const double noise = wavefront_only ? 0.0 : cfg.get<double>("noise_std", 0.0);
  BstOptions bst;
  bst.oversample = cfg.get<std::size_t>("oversample", bst.oversample);
  const std::uint64_t seed = inv.resolve_seed(cfg);
  cfg.finish();

  const auto out = inv.require_out();
  Container c;
  if (wavefront_only) {
    const QuasiWavefront wf = bst_forward(scene, grid, bst);
    c = to_container(wf);
    inv.say("wavefront " + std::to_string(grid.nx) + "x" + std::to_string(grid.ny) + ", " +
            std::to_string(wf.valid_count()) + " valid samples");
  } else {
    const EchoCube cube = synth_echo_cube(scene, grid, pulse, noise, seed);
    c = to_container(cube);
    inv.say("echo cube " + std::to_string(grid.nx) + "x" + std::to_string(grid.ny) + "x" +
            std::to_string(pulse.nt));
  }
  finish_container(c, inv, seed);
  write_container(out, std::move(c));
  return 0;
}

int simulate_vitals(const Invocation& inv, ConfigNode& cfg) {
  const double fs = cfg.get<double>("fs", 100.0);
  const double duration = cfg.get<double>("duration", 120.0);
  const double fc = cfg.get<double>("fc", 26.4e9);
  const cplx amplitude = cfg.get_complex("amplitude", {1.0, 0.0});
  const cplx s_dc = cfg.get_complex("s_dc", 5.0 * amplitude);
  const double snr_db = cfg.get<double>("snr_db", 30.0);
  const bool explicit_noise = cfg.has("noise_std");
  double noise_std = cfg.get<double>("noise_std", 0.0);
  const DisplacementModel model = parse_displacement_model(cfg.child("model"), duration);
  const std::uint64_t seed = inv.resolve_seed(cfg);
  cfg.finish();
  if (!explicit_noise) noise_std = std::abs(amplitude) * std::pow(10.0, -snr_db / 20.0);

  const double k = kTwoPi * fc / kSpeedOfLight;
  const auto comps = synth_displacement_components(model, fs, duration);
  const IQTrace iq = synth_iq(comps.total, k, amplitude, s_dc, noise_std, seed);
  const auto beats = heart_beat_times(model.heart, duration);
  const IBISeries truth = ibi_from_beats(beats);

  const std::filesystem::path out = inv.require_out();
  Container c = to_container(iq);
  finish_container(c, inv, seed);
  write_container(out, std::move(c));
  json side;
  side["beat_times"] = truth.beat_times;
  side["intervals"] = truth.intervals;
  side["displacement"] = {{"dt", comps.total.dt}, {"samples", comps.total.samples}};
  side["heart_displacement"] = {{"dt", comps.heart.dt}, {"samples", comps.heart.samples}};
  side["noise_std"] = noise_std;
  side["seed"] = seed;
  write_text(sibling(out, ".truth.json"), side.dump() + "\n");
  inv.say("iq trace " + std::to_string(iq.samples.size()) + " samples, " + std::to_string(beats.size()) +
          " beats");
  return 0;
}

int simulate_array(const Invocation& inv, ConfigNode& cfg) {
  const double fc = cfg.get<double>("fc", 26.4e9);
  const double wavelength = cfg.get<double>("wavelength", kSpeedOfLight / fc);
  const auto elements = cfg.get<std::size_t>("elements", 8);
  const double spacing = cfg.get<double>("spacing", wavelength / 2.0);
  const double noise_std = cfg.get<double>("noise_std", 0.1);
  const auto snapshots = cfg.get<std::size_t>("snapshots", 1000);
  const double fs = cfg.get<double>("fs", 100.0);
  std::vector<FarFieldSource> sources;
  for (ConfigNode* sn : cfg.children("sources"))
    sources.push_back({sn->require<double>("angle_deg"), sn->get<double>("power", 1.0)});
  const std::uint64_t seed = inv.resolve_seed(cfg);
  cfg.finish();
  if (sources.empty()) sources = {{-20.0, 1.0}, {20.0, 1.0}};

  const auto pos = uniform_line(elements, spacing);
  const ChannelMatrix m = synth_array_snapshots(pos, wavelength, sources, noise_std, snapshots, fs, seed);
  Container c = to_container(m, wavelength);
  finish_container(c, inv, seed);
  write_container(inv.require_out(), std::move(c));
  inv.say("array snapshots " + std::to_string(elements) + "x" + std::to_string(snapshots));
  return 0;
}

int simulate_cavity_channels(const Invocation& inv, ConfigNode& cfg) {
  const auto n = cfg.get<std::size_t>("n_channels", 16);
  const auto length = cfg.get<std::size_t>("length", 16);
  const double dt = cfg.get<double>("dt", 1.25e-10);
  const auto taps = cfg.get<std::size_t>("taps", 3);
  const std::uint64_t seed = inv.resolve_seed(cfg);
  cfg.finish();
  if (n == 0 || length == 0 || taps == 0) throw InvalidArgument("n_channels, length and taps must be >= 1");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> where(0, length - 1);
  std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(2.0));
  ChannelMatrix m;
  m.fs = 1.0 / dt;
  m.snapshots = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(length));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < taps; ++t) {
      const auto k = static_cast<Eigen::Index>(where(rng));
      const double re = g(rng);
      const double im = g(rng);
      m.snapshots(static_cast<Eigen::Index>(i), k) += cplx{re, im};
    }
  }
  Container c = to_container(m, 0.0);
  c.attrs["role"] = "cavity_channels";
  finish_container(c, inv, seed);
  write_container(inv.require_out(), std::move(c));
  inv.say("cavity channels " + std::to_string(n) + "x" + std::to_string(length));
  return 0;
}

}  // namespace

int cmd_simulate(const Invocation& inv) {
  ConfigNode cfg(load_config(inv.config_path), "");
  const auto kind = cfg.get<std::string>("kind", "scene");
  if (kind == "scene") return simulate_scene(inv, cfg, false);
  if (kind == "bst") return simulate_scene(inv, cfg, true);
  if (kind == "vitals") return simulate_vitals(inv, cfg);
  if (kind == "array") return simulate_array(inv, cfg);
  if (kind == "cavity_channels") return simulate_cavity_channels(inv, cfg);
  throw InvalidArgument("unknown config kind '" + kind + "' (expected scene, bst, vitals, array or cavity_channels)");
}

}  // namespace uwb::cli
