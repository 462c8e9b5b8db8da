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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uwbsense/signal.hpp"

namespace uwb {

/// Sinusoidally swinging scatterer attached to the torso.
struct Limb {
  std::string name;
  double mean_offset = 0.0;      ///< m, added to the torso range
  double swing_amplitude = 0.0;  ///< m
  double swing_period = 1.0;     ///< s
  double phase = 0.0;            ///< rad
  double reflectivity = 1.0;
};

/// Torso moving radially at constant speed plus limbs. Scatterer i range:
/// r_i(t) = r0 + v t + offset_i + amplitude_i sin(2 pi t / period_i + phase_i).
struct WalkerModel {
  double torso_velocity = 1.0;  ///< m/s, positive is receding
  double torso_start_range = 3.0;
  double torso_reflectivity = 1.0;
  std::vector<Limb> limbs;

  double limb_range(const Limb& limb, double t) const;
  double limb_velocity(const Limb& limb, double t) const;
  void validate() const;
};

struct SlowTimeTrace {
  ComplexSeries samples;  ///< dt is the pulse repetition interval
  double wavelength = 0.0;

  double pri() const { return samples.dt; }
  /// lambda / (4 T_pri).
  double max_unambiguous_velocity() const { return wavelength / (4.0 * samples.dt); }
};

/// trace(t) = sum_i reflectivity_i exp(-j 4 pi r_i(t) / lambda) + noise,
/// summed over the torso and every limb of every walker. Complex noise of
/// total standard deviation noise_std.
SlowTimeTrace simulate_walker(const WalkerModel& model, double wavelength, double pri,
                              std::size_t n_pulses, double noise_std, std::uint64_t seed);
SlowTimeTrace simulate_walkers(std::span<const WalkerModel> walkers, double wavelength, double pri,
                               std::size_t n_pulses, double noise_std, std::uint64_t seed);

/// Two-sided STFT of the slow-time trace with the frequency axis rescaled to
/// radial velocity v = lambda f_d / 2, spanning +-lambda / (4 T_pri).
/// freq_step and freq_origin of the result are in m/s.
Spectrogram velocity_spectrogram(const SlowTimeTrace& trace, std::size_t window_len, std::size_t hop,
                                 Taper window = Taper::Hann);

/// Velocity a constant-speed target appears at after slow-time sampling.
double aliased_velocity(double velocity, double wavelength, double pri);

struct VelocityTrack {
  RealSeries velocity;             ///< m/s per frame, t0 = first frame centre
  std::vector<double> confidence;  ///< peak energy / frame energy; 0 for empty frames
};

/// Per-frame argmax refined by three-point parabolic interpolation.
VelocityTrack track_dominant_velocity(const Spectrogram& spec);

}  // namespace uwb
