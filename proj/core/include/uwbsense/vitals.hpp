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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "uwbsense/signal.hpp"

namespace uwb {

// ---------------------------------------------------------------------------
// Displacement model
// ---------------------------------------------------------------------------

/// Body drift through a natural cubic spline; empty knots mean no drift.
struct DriftSpline {
  std::vector<double> knot_times;  ///< s
  std::vector<double> values;      ///< m
};

/// Asymmetric raised-cosine breathing: a half cosine rising from -amplitude
/// to +amplitude over inhale_fraction of the period, then a slower half
/// cosine back down.
struct RespirationModel {
  double period = 5.0;
  double amplitude = 4.0e-3;  ///< half peak-to-peak, m
  double inhale_fraction = 0.45;
  double phase = 0.0;  ///< cycle offset in s
};

/// Bi-lobe pulse anchored at each beat onset: a positive lobe with a fast
/// rise and slower decay, then a negative lobe scaled by second_amplitude.
/// Each lobe is a raised-cosine rise followed by a raised-cosine fall.
struct HeartPulseShape {
  double rise = 0.05;
  double fall = 0.25;
  double second_amplitude = -0.4;
  double second_onset = 0.3;
  double second_rise = 0.1;
  double second_fall = 0.35;

  /// Normalized pulse value at time tau after onset.
  double at(double tau) const;
  double duration() const;
};

struct HeartModel {
  /// Intervals between successive onsets, repeated cyclically until the
  /// record ends.
  std::vector<double> ibi_sequence{1.0};
  double amplitude = 0.15e-3;  ///< m
  double first_beat = 0.5;     ///< onset time of the first pulse, s
  HeartPulseShape shape;
};

struct DisplacementModel {
  double d0 = 0.6;
  DriftSpline drift;
  RespirationModel resp;
  HeartModel heart;

  void validate() const;
};

/// Onset times of all heart pulses that start before `duration`.
std::vector<double> heart_beat_times(const HeartModel& heart, double duration);

/// Beat-to-beat intervals mean * (1 + depth sin(2 pi f t + phase)), with t
/// the onset of the interval, generated until `duration` is covered.
std::vector<double> modulated_ibi_sequence(double mean, double depth, double freq_hz, double duration,
                                           double first_beat = 0.5, double phase = 0.0);

/// Components of d(t) sampled on the same grid.
struct DisplacementComponents {
  RealSeries total, drift, respiration, heart;
};

/// d(t) = d0 + drift(t) + resp(t) + heart(t), t = n / fs for n < duration * fs.
DisplacementComponents synth_displacement_components(const DisplacementModel& model, double fs,
                                                     double duration);
RealSeries synth_displacement(const DisplacementModel& model, double fs, double duration);

// ---------------------------------------------------------------------------
// IQ model and front end
// ---------------------------------------------------------------------------

struct IQTrace {
  ComplexSeries samples;
  double fs = 1.0;
  double k = 1.0;  ///< carrier wavenumber 2 pi / lambda
  cplx amplitude{1.0, 0.0};
  cplx s_dc{0.0, 0.0};
};

/// s(t) = A exp(j 2 k d(t)) + s_dc + complex white noise of total std noise_std.
IQTrace synth_iq(const RealSeries& d, double k, cplx amplitude, cplx s_dc, double noise_std,
                 std::uint64_t seed);

enum class ClutterMode { Mean, CircleFit };

ClutterMode parse_clutter_mode(std::string_view name);
std::string_view clutter_mode_name(ClutterMode mode);

struct ClutterRemoval {
  IQTrace trace;       ///< input with the estimated centre subtracted
  cplx centre;         ///< estimated static offset
  double radius = 0;   ///< fitted circle radius (circle mode)
  double residual = 0; ///< RMS of |s - centre| - radius (circle mode)
};

/// Mean mode subtracts the complex mean. Circle mode fits an algebraic
/// least-squares circle to the IQ samples and subtracts its centre.
ClutterRemoval remove_static_clutter(const IQTrace& iq, ClutterMode mode = ClutterMode::Mean);

/// unwrap(arg s) / (2k) with the mean removed, in metres.
RealSeries demodulate_phase(const IQTrace& iq);

/// Zero-phase 4th-order Butterworth high-pass at resp_band_max, mean removed.
RealSeries suppress_respiration(const RealSeries& d, double resp_band_max = 0.5);

// ---------------------------------------------------------------------------
// Interbeat intervals and HRV
// ---------------------------------------------------------------------------

struct IBISeries {
  std::vector<double> beat_times;
  std::vector<double> intervals;  ///< intervals[i] = beat_times[i + 1] - beat_times[i]
  std::vector<double> quality;    ///< per beat, in [0, 1]
};

struct IbiOptions {
  double lowpass_hz = 8.0;  ///< pre-smoothing cutoff; 0 disables
  double min_interval = 0.25;
  double max_interval = 3.0;
  std::size_t refine_passes = 3;
};

enum class FeatureKind { DisplacementMax, DisplacementMin, VelocityMax, VelocityMin };

std::string_view feature_kind_name(FeatureKind kind);

struct IbiDiagnostics {
  double coarse_period = 0.0;
  FeatureKind anchor = FeatureKind::DisplacementMax;
  std::vector<double> anchor_spread;  ///< normalized prominence variance per kind
};

/// Feature-point IBI estimator. A coarse period from the autocorrelation
/// peak sets the beat spacing, the extremum type whose prominence recurs
/// most consistently becomes the anchor, and anchors are refined by
/// template matching against the median beat shape.
IBISeries estimate_ibi(const RealSeries& heart_displacement, const IbiOptions& opts = {},
                       IbiDiagnostics* diagnostics = nullptr);

struct IbiComparison {
  std::size_t matched_intervals = 0;
  std::size_t truth_intervals = 0;
  double rmse = 0.0;          ///< s
  double rmse_percent = 0.0;  ///< relative to the mean true interval
  double offset = 0.0;        ///< median estimated-minus-true beat time
};

/// Matches estimated beats to true onsets after removing the median time
/// offset and compares intervals whose two end beats both matched.
IbiComparison compare_ibi(const IBISeries& estimate, std::span<const double> true_beat_times);

struct HRVReport {
  double lf_power = 0.0;  ///< s^2
  double hf_power = 0.0;  ///< s^2
  double ratio = 0.0;
  bool ratio_defined = false;
  double record_span = 0.0;
};

/// Intervals placed at the beat that closes them, resampled at 4 Hz with a
/// natural cubic spline, detrended, periodogram band powers over
/// LF = [0.04, 0.15] Hz and HF = (0.15, 0.4] Hz.
HRVReport hrv_lf_hf(const IBISeries& ibi);

/// Builds an IBISeries with unit quality from onset times.
IBISeries ibi_from_beats(std::vector<double> beat_times);

}  // namespace uwb
