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

#include "uwbsense/microdoppler.hpp"

#include <cmath>
#include <random>

#include "uwbsense/errors.hpp"

namespace uwb {

double WalkerModel::limb_range(const Limb& limb, double t) const {
  return torso_start_range + torso_velocity * t + limb.mean_offset +
         limb.swing_amplitude * std::sin(kTwoPi * t / limb.swing_period + limb.phase);
}

double WalkerModel::limb_velocity(const Limb& limb, double t) const {
  const double w = kTwoPi / limb.swing_period;
  return torso_velocity + limb.swing_amplitude * w * std::cos(w * t + limb.phase);
}

void WalkerModel::validate() const {
  if (!std::isfinite(torso_velocity) || !std::isfinite(torso_start_range) ||
      !std::isfinite(torso_reflectivity))
    throw InvalidArgument("walker torso parameters must be finite");
  for (std::size_t i = 0; i < limbs.size(); ++i) {
    const auto& l = limbs[i];
    if (!(l.swing_period > 0.0))
      throw InvalidArgument("limb " + std::to_string(i) + " swing_period must be > 0");
    if (!std::isfinite(l.mean_offset) || !std::isfinite(l.swing_amplitude) ||
        !std::isfinite(l.phase) || !std::isfinite(l.reflectivity))
      throw InvalidArgument("limb " + std::to_string(i) + " parameters must be finite");
  }
}

namespace {

std::string limb_label(const Limb& limb, std::size_t index) {
  return limb.name.empty() ? "limb " + std::to_string(index) : "limb '" + limb.name + "'";
}

}  // namespace

SlowTimeTrace simulate_walkers(std::span<const WalkerModel> walkers, double wavelength, double pri,
                               std::size_t n_pulses, double noise_std, std::uint64_t seed) {
  if (n_pulses < 2) throw InvalidArgument("n_pulses must be >= 2");
  if (!(wavelength > 0.0) || !(pri > 0.0)) throw InvalidArgument("wavelength and pri must be > 0");
  if (!(noise_std >= 0.0)) throw InvalidArgument("noise_std must be >= 0");

  SlowTimeTrace out;
  out.wavelength = wavelength;
  out.samples.dt = pri;
  out.samples.samples.assign(n_pulses, cplx{});
  const double kr = -4.0 * kPi / wavelength;

  for (std::size_t w = 0; w < walkers.size(); ++w) {
    const auto& m = walkers[w];
    m.validate();
    for (std::size_t n = 0; n < n_pulses; ++n) {
      const double t = static_cast<double>(n) * pri;
      const double r = m.torso_start_range + m.torso_velocity * t;
      if (!(r > 0.0))
        throw DomainError("walker " + std::to_string(w) + " torso range is nonpositive at t = " +
                          std::to_string(t) + " s");
      out.samples.samples[n] += m.torso_reflectivity * std::polar(1.0, kr * r);
    }
    for (std::size_t i = 0; i < m.limbs.size(); ++i) {
      const auto& limb = m.limbs[i];
      for (std::size_t n = 0; n < n_pulses; ++n) {
        const double t = static_cast<double>(n) * pri;
        const double r = m.limb_range(limb, t);
        if (!(r > 0.0))
          throw DomainError(limb_label(limb, i) + " of walker " + std::to_string(w) +
                            " has nonpositive range at t = " + std::to_string(t) + " s");
        out.samples.samples[n] += limb.reflectivity * std::polar(1.0, kr * r);
      }
    }
  }

  if (noise_std > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, noise_std / std::sqrt(2.0));
    for (auto& s : out.samples.samples) {
      const double re = g(rng);
      const double im = g(rng);
      s += cplx{re, im};
    }
  }
  return out;
}

SlowTimeTrace simulate_walker(const WalkerModel& model, double wavelength, double pri,
                              std::size_t n_pulses, double noise_std, std::uint64_t seed) {
  return simulate_walkers(std::span<const WalkerModel>(&model, 1), wavelength, pri, n_pulses,
                          noise_std, seed);
}

Spectrogram velocity_spectrogram(const SlowTimeTrace& trace, std::size_t window_len, std::size_t hop,
                                 Taper window) {
  if (!(trace.wavelength > 0.0)) throw InvalidArgument("trace wavelength must be > 0");
  // Receding targets rotate clockwise; conjugating puts them on the positive axis.
  ComplexSeries conj = trace.samples;
  for (auto& s : conj.samples) s = std::conj(s);
  Spectrogram spec = stft(conj, window_len, hop, window);
  spec.freq_step *= trace.wavelength / 2.0;
  spec.freq_origin *= trace.wavelength / 2.0;
  return spec;
}

double aliased_velocity(double velocity, double wavelength, double pri) {
  const double span = wavelength / (2.0 * pri);
  const double vmax = span / 2.0;
  double v = velocity - span * std::floor((velocity + vmax) / span);
  if (v >= vmax) v -= span;
  return v;
}

VelocityTrack track_dominant_velocity(const Spectrogram& spec) {
  if (spec.frames == 0 || spec.bins == 0) throw InvalidArgument("empty spectrogram");
  VelocityTrack out;
  out.velocity.dt = spec.frame_dt;
  out.velocity.t0 = spec.time_origin;
  out.velocity.samples.resize(spec.frames);
  out.confidence.resize(spec.frames);
  for (std::size_t f = 0; f < spec.frames; ++f) {
    const double* row = spec.values.data() + f * spec.bins;
    std::size_t best = 0;
    double total = 0.0;
    for (std::size_t b = 0; b < spec.bins; ++b) {
      total += row[b] * row[b];
      if (row[b] > row[best]) best = b;
    }
    if (!(total > 0.0)) {
      out.velocity.samples[f] = 0.0;
      out.confidence[f] = 0.0;
      continue;
    }
    double pos = static_cast<double>(best);
    if (best > 0 && best + 1 < spec.bins) {
      const double ym = row[best - 1], y0 = row[best], yp = row[best + 1];
      const double denom = ym - 2.0 * y0 + yp;
      if (denom < 0.0) pos += 0.5 * (ym - yp) / denom;
    }
    out.velocity.samples[f] = spec.freq_origin + pos * spec.freq_step;
    out.confidence[f] = row[best] * row[best] / total;
  }
  return out;
}

}  // namespace uwb
