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

#include <complex>
#include <span>
#include <vector>

namespace uwb {

/// Normalized second-order section: y = b0 x + b1 x' + b2 x'' - a1 y' - a2 y''.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

enum class FilterKind { LowPass, HighPass };

/// Digital Butterworth (bilinear transform with pre-warping) as cascaded
/// sections. Even orders only.
std::vector<Biquad> butterworth(int order, double cutoff_hz, double fs, FilterKind kind);

/// |H(e^{j 2 pi f / fs})| of the cascade.
double magnitude_response(std::span<const Biquad> sos, double f_hz, double fs);

std::vector<double> sosfilt(std::span<const Biquad> sos, std::span<const double> x);

/// Forward-backward filtering with odd-reflection padding at both ends.
/// Zero phase; the magnitude response is squared.
std::vector<double> filtfilt(std::span<const Biquad> sos, std::span<const double> x);

}  // namespace uwb
