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

#include <cstdio>

#include "commands.hpp"
#include "uwbsense/container.hpp"
#include "uwbsense/microdoppler.hpp"

namespace uwb::cli {

using nlohmann::json;

namespace {

int md_sim(const Invocation& inv, ConfigNode& cfg) {
  const double fc = cfg.get<double>("fc", 26.4e9);
  const double wavelength = cfg.get<double>("wavelength", kSpeedOfLight / fc);
  const double pri = cfg.get<double>("pri", 1e-3);
  const auto n_pulses = cfg.get<std::size_t>("n_pulses", 4096);
  const double noise_std = cfg.get<double>("noise_std", 0.0);
  std::vector<WalkerModel> walkers;
  for (ConfigNode* wn : cfg.children("walkers")) {
    WalkerModel w;
    w.torso_velocity = wn->get<double>("torso_velocity", w.torso_velocity);
    w.torso_start_range = wn->get<double>("torso_start_range", w.torso_start_range);
    w.torso_reflectivity = wn->get<double>("torso_reflectivity", w.torso_reflectivity);
    for (ConfigNode* ln : wn->children("limbs")) {
      Limb l;
      l.name = ln->get<std::string>("name", "");
      l.mean_offset = ln->get<double>("mean_offset", 0.0);
      l.swing_amplitude = ln->get<double>("swing_amplitude", 0.0);
      l.swing_period = ln->get<double>("swing_period", 1.0);
      l.phase = ln->get<double>("phase", 0.0);
      l.reflectivity = ln->get<double>("reflectivity", 1.0);
      w.limbs.push_back(l);
    }
    walkers.push_back(std::move(w));
  }
  const std::uint64_t seed = inv.resolve_seed(cfg);
  cfg.finish();
  if (walkers.empty()) {
    WalkerModel w;
    w.torso_reflectivity = 1.0;
    w.limbs.push_back({"arm", 0.0, 1.0 * 0.9 / kTwoPi, 0.9, 0.0, 0.3});
    walkers.push_back(w);
  }

  const SlowTimeTrace tr = simulate_walkers(walkers, wavelength, pri, n_pulses, noise_std, seed);
  IQTrace iq;
  iq.samples = tr.samples;
  iq.fs = 1.0 / pri;
  iq.k = kTwoPi / wavelength;
  Container c = to_container(iq);
  c.attrs["wavelength"] = wavelength;
  c.attrs["pri"] = pri;
  c.seed = seed;
  c.provenance = inv.provenance();
  write_container(inv.require_out(), std::move(c));
  inv.say("slow-time trace " + std::to_string(n_pulses) + " pulses");
  return 0;
}

int md_spectrogram(const Invocation& inv, ConfigNode& cfg) {
  const auto window_len = cfg.get<std::size_t>("window_len", 128);
  const auto hop = cfg.get<std::size_t>("hop", 32);
  const Taper taper = parse_taper(cfg.get<std::string>("window", "hann"));
  cfg.finish();
  const Container in = read_container(inv.require_in());
  if (in.kind != "iq_trace") throw InvalidArgument("microdoppler spectrogram needs an iq_trace container, got " + in.kind);
  const IQTrace iq = iq_trace_from(in);
  SlowTimeTrace tr;
  tr.samples = iq.samples;
  tr.wavelength = in.attrs.contains("wavelength") ? in.attrs["wavelength"].get<double>() : kTwoPi / iq.k;
  const Spectrogram s = velocity_spectrogram(tr, window_len, hop, taper);
  Container c = to_container(s, "m/s");
  c.seed = in.seed;
  c.provenance = inv.provenance();
  write_container(inv.require_out(), std::move(c));
  inv.say("spectrogram " + std::to_string(s.frames) + " frames x " + std::to_string(s.bins) + " bins");
  return 0;
}

int md_track(const Invocation& inv, ConfigNode& cfg) {
  cfg.finish();
  const Container in = read_container(inv.require_in());
  if (in.kind != "spectrogram") throw InvalidArgument("microdoppler track needs a spectrogram container, got " + in.kind);
  const VelocityTrack t = track_dominant_velocity(spectrogram_from(in));
  std::string csv = "time,velocity,confidence\n";
  char buf[128];
  for (std::size_t i = 0; i < t.velocity.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", t.velocity.time(i), t.velocity.samples[i], t.confidence[i]);
    csv += buf;
  }
  write_text(inv.require_out(), csv);
  inv.say("track " + std::to_string(t.velocity.size()) + " frames");
  return 0;
}

}  // namespace

int cmd_microdoppler(const Invocation& inv) {
  ConfigNode cfg(load_config(inv.config_path), "");
  if (inv.stage == "sim") return md_sim(inv, cfg);
  if (inv.stage == "spectrogram") return md_spectrogram(inv, cfg);
  return md_track(inv, cfg);
}

}  // namespace uwb::cli
