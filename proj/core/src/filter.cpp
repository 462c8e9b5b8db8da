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

#include "uwbsense/filter.hpp"

#include <algorithm>
#include <cmath>

#include "uwbsense/errors.hpp"
#include "uwbsense/signal.hpp"

namespace uwb {

std::vector<Biquad> butterworth(int order, double cutoff_hz, double fs, FilterKind kind) {
  if (order < 2 || order % 2 != 0) throw InvalidArgument("butterworth order must be even and >= 2");
  if (!(fs > 0.0) || !(cutoff_hz > 0.0) || !(cutoff_hz < fs / 2.0))
    throw InvalidArgument("butterworth cutoff must lie in (0, fs/2)");

  const double k = 2.0 * fs;
  const double w = k * std::tan(kPi * cutoff_hz / fs);  // pre-warped analog cutoff
  std::vector<Biquad> sos;
  for (int i = 0; i < order / 2; ++i) {
    // Left-half-plane prototype pole pair; only its real part enters.
    const double theta = kPi * (2.0 * i + 1.0 + order) / (2.0 * order);
    const double re = std::cos(theta);
    const double a0 = k * k - 2.0 * re * w * k + w * w;
    const double a1 = 2.0 * (w * w - k * k);
    const double a2 = k * k + 2.0 * re * w * k + w * w;
    Biquad q;
    if (kind == FilterKind::LowPass) {
      q.b0 = w * w / a0;
      q.b1 = 2.0 * w * w / a0;
      q.b2 = w * w / a0;
    } else {
      q.b0 = k * k / a0;
      q.b1 = -2.0 * k * k / a0;
      q.b2 = k * k / a0;
    }
    q.a1 = a1 / a0;
    q.a2 = a2 / a0;
    sos.push_back(q);
  }
  return sos;
}

double magnitude_response(std::span<const Biquad> sos, double f_hz, double fs) {
  const std::complex<double> z1 = std::polar(1.0, -kTwoPi * f_hz / fs);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h = 1.0;
  for (const auto& q : sos) h *= (q.b0 + q.b1 * z1 + q.b2 * z2) / (1.0 + q.a1 * z1 + q.a2 * z2);
  return std::abs(h);
}

namespace {

// Runs the cascade with each section's state preset to the steady state for
// a constant input equal to `x0` (the lfilter_zi idea).
std::vector<double> run_cascade(std::span<const Biquad> sos, std::span<const double> x, double x0) {
  std::vector<double> y(x.begin(), x.end());
  double u = x0;
  for (const auto& q : sos) {
    const double gain = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
    const double ys = gain * u;
    double s1 = ys - q.b0 * u;
    double s2 = q.b2 * u - q.a2 * ys;
    // Transposed direct form II.
    for (auto& v : y) {
      const double in = v;
      const double out = q.b0 * in + s1;
      s1 = q.b1 * in - q.a1 * out + s2;
      s2 = q.b2 * in - q.a2 * out;
      v = out;
    }
    u = ys;
  }
  return y;
}

}  // namespace

std::vector<double> sosfilt(std::span<const Biquad> sos, std::span<const double> x) {
  return run_cascade(sos, x, 0.0);
}

std::vector<double> filtfilt(std::span<const Biquad> sos, std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  const std::size_t pad = std::min<std::size_t>(n - 1, std::max<std::size_t>(15, n / 4));
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  auto y = run_cascade(sos, ext, ext.front());
  std::reverse(y.begin(), y.end());
  y = run_cascade(sos, y, y.front());
  std::reverse(y.begin(), y.end());
  return {y.begin() + static_cast<long>(pad), y.begin() + static_cast<long>(pad + n)};
}

}  // namespace uwb
