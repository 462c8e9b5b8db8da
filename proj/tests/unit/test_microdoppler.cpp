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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "uwbsense/errors.hpp"
#include "uwbsense/microdoppler.hpp"

namespace uwb {
namespace {

constexpr double kLambda = 0.01136;
constexpr double kPri = 1e-3;
constexpr std::size_t kWin = 128, kHop = 32;

WalkerModel torso_only(double v) {
  WalkerModel m;
  m.torso_velocity = v;
  m.torso_start_range = 20.0;
  return m;
}

std::size_t row_argmax(const Spectrogram& s, std::size_t f) {
  const auto row = s.values.begin() + static_cast<long>(f * s.bins);
  return static_cast<std::size_t>(std::max_element(row, row + static_cast<long>(s.bins)) - row);
}

TEST(Walker, TraceMatchesPhaseFormula) {
  WalkerModel m = torso_only(0.7);
  m.limbs.push_back({"arm", 0.2, 0.05, 0.9, 0.3, 0.4});
  const auto tr = simulate_walker(m, kLambda, kPri, 300, 0.0, 1);
  EXPECT_DOUBLE_EQ(tr.max_unambiguous_velocity(), kLambda / (4.0 * kPri));
  for (std::size_t n = 0; n < 300; ++n) {
    const double t = static_cast<double>(n) * kPri;
    const double r0 = m.torso_start_range + m.torso_velocity * t;
    const double r1 = r0 + 0.2 + 0.05 * std::sin(kTwoPi * t / 0.9 + 0.3);
    const cplx ref = std::polar(1.0, -4.0 * kPi * r0 / kLambda) + 0.4 * std::polar(1.0, -4.0 * kPi * r1 / kLambda);
    ASSERT_NEAR(std::abs(tr.samples.samples[n] - ref), 0.0, 1e-9);
  }
}

TEST(Walker, LimbVelocityIsDerivativeOfRange) {
  WalkerModel m = torso_only(1.0);
  const Limb limb{"leg", 0.0, 1.0 * 0.9 / kTwoPi, 0.9, 0.0, 1.0};
  const double h = 1e-6;
  for (double t : {0.0, 0.13, 0.5, 0.77}) {
    const double fd = (m.limb_range(limb, t + h) - m.limb_range(limb, t - h)) / (2.0 * h);
    EXPECT_NEAR(m.limb_velocity(limb, t), fd, 1e-6);
  }
}

TEST(Walker, Preconditions) {
  WalkerModel m = torso_only(-5.0);
  m.torso_start_range = 0.5;
  m.limbs.push_back({"hand", 0.0, 0.0, 1.0, 0.0, 1.0});
  try {
    simulate_walker(m, kLambda, kPri, 1000, 0.0, 1);
    FAIL() << "expected a range error";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("walker"), std::string::npos);
  }
  EXPECT_THROW(simulate_walker(torso_only(1.0), kLambda, kPri, 1, 0.0, 1), InvalidArgument);
  EXPECT_THROW(simulate_walker(torso_only(1.0), -kLambda, kPri, 10, 0.0, 1), InvalidArgument);
}

TEST(Spectrogram, StaticScattererIsDcOnly) {
  const auto tr = simulate_walker(torso_only(0.0), kLambda, kPri, 512, 0.0, 1);
  const auto s = velocity_spectrogram(tr, kWin, kHop, Taper::Rect);
  for (std::size_t f = 0; f < s.frames; ++f) {
    const std::size_t b = row_argmax(s, f);
    EXPECT_NEAR(s.frequency(b), 0.0, 1e-12);
    for (std::size_t k = 0; k < s.bins; ++k)
      if (k != b) EXPECT_LT(s.at(f, k), 1e-9 * s.at(f, b));
  }
}

TEST(Spectrogram, AxisSpansUnambiguousVelocity) {
  const auto tr = simulate_walker(torso_only(0.5), kLambda, kPri, 512, 0.0, 1);
  const auto s = velocity_spectrogram(tr, kWin, kHop);
  const double vmax = kLambda / (4.0 * kPri);
  EXPECT_NEAR(s.freq_step, 2.0 * vmax / kWin, 1e-12);
  EXPECT_NEAR(s.frequency(0), -vmax, 1e-12);
  EXPECT_NEAR(s.frame_dt, kHop * kPri, 1e-15);
}

TEST(Spectrogram, ConstantVelocityRidgeWithinOneBin) {
  for (double v : {-2.1, -0.4, 0.33, 1.7}) {
    const auto tr = simulate_walker(torso_only(v), kLambda, kPri, 1024, 0.0, 1);
    const auto s = velocity_spectrogram(tr, kWin, kHop);
    for (std::size_t f = 0; f < s.frames; ++f) EXPECT_NEAR(s.frequency(row_argmax(s, f)), v, s.freq_step);
  }
}

TEST(SpectrogramProperty, FrameEnergyIsParseval) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  SlowTimeTrace tr;
  tr.wavelength = kLambda;
  tr.samples = {std::vector<cplx>(700), kPri, 0.0};
  for (auto& v : tr.samples.samples) v = {g(rng), g(rng)};
  for (Taper taper : {Taper::Rect, Taper::Hann, Taper::Hamming}) {
    const auto s = velocity_spectrogram(tr, kWin, 50, taper);
    const auto w = make_window(taper, kWin);
    for (std::size_t f = 0; f < s.frames; ++f) {
      double ex = 0.0, es = 0.0;
      for (std::size_t n = 0; n < kWin; ++n) ex += std::norm(w[n] * tr.samples.samples[f * 50 + n]);
      for (std::size_t b = 0; b < s.bins; ++b) es += s.at(f, b) * s.at(f, b);
      EXPECT_NEAR(es / static_cast<double>(kWin), ex, 1e-6 * ex);
    }
  }
}

TEST(Track, ZeroTraceGivesZeroTrackAndConfidence) {
  SlowTimeTrace tr;
  tr.wavelength = kLambda;
  tr.samples = {std::vector<cplx>(400), kPri, 0.0};
  const auto t = track_dominant_velocity(velocity_spectrogram(tr, kWin, kHop));
  for (std::size_t f = 0; f < t.velocity.size(); ++f) {
    EXPECT_EQ(t.velocity.samples[f], 0.0);
    EXPECT_EQ(t.confidence[f], 0.0);
  }
  EXPECT_THROW(track_dominant_velocity(Spectrogram{}), InvalidArgument);
}

TEST(TrackProperty, RandomVelocitiesWithinHalfBin) {
  std::mt19937_64 rng(31);
  const double vmax = kLambda / (4.0 * kPri);
  std::uniform_real_distribution<double> u(-0.95 * vmax, 0.95 * vmax);
  for (int trial = 0; trial < 10; ++trial) {
    const double v = u(rng);
    const auto tr = simulate_walker(torso_only(v), kLambda, kPri, 1024, 0.0, 1);
    const auto s = velocity_spectrogram(tr, kWin, kHop);
    const auto t = track_dominant_velocity(s);
    double se = 0.0;
    for (double x : t.velocity.samples) se += (x - v) * (x - v);
    EXPECT_LT(std::sqrt(se / static_cast<double>(t.velocity.size())), s.freq_step / 2.0) << "v " << v;
  }
}

TEST(Aliasing, ArithmeticAndTrack) {
  const double vmax = kLambda / (4.0 * kPri), span = 2.0 * vmax;
  EXPECT_DOUBLE_EQ(aliased_velocity(0.5, kLambda, kPri), 0.5);
  EXPECT_NEAR(aliased_velocity(vmax + 0.3, kLambda, kPri), -vmax + 0.3, 1e-12);
  EXPECT_NEAR(aliased_velocity(-vmax - 0.3, kLambda, kPri), vmax - 0.3, 1e-12);
  EXPECT_NEAR(aliased_velocity(2.0 * span + 0.1, kLambda, kPri), 0.1, 1e-12);
  for (double v : {3.1, -4.0, 6.5}) {
    const double va = aliased_velocity(v, kLambda, kPri);
    EXPECT_GE(va, -vmax);
    EXPECT_LT(va, vmax);
    const double turns = (v - va) / span;
    EXPECT_NEAR(turns, std::round(turns), 1e-12);
    const auto s = velocity_spectrogram(simulate_walker(torso_only(v), kLambda, kPri, 1024, 0.0, 1), kWin, kHop);
    const auto t = track_dominant_velocity(s);
    for (double x : t.velocity.samples) EXPECT_NEAR(x, va, s.freq_step / 2.0);
  }
}

TEST(Spectrogram, TwoWalkersGiveTwoRidges) {
  const std::vector<WalkerModel> walkers{torso_only(-1.2), torso_only(0.9)};
  const auto tr = simulate_walkers(walkers, kLambda, kPri, 1024, 0.0, 1);
  const auto s = velocity_spectrogram(tr, kWin, kHop);
  for (std::size_t f = 0; f < s.frames; ++f) {
    auto near = [&](double v) {
      double m = 0.0;
      for (std::size_t b = 0; b < s.bins; ++b)
        if (std::abs(s.frequency(b) - v) <= s.freq_step) m = std::max(m, s.at(f, b));
      return m;
    };
    const double a = near(-1.2), b = near(0.9);
    double valley = 1e300;
    for (std::size_t k = 0; k < s.bins; ++k)
      if (s.frequency(k) > -1.0 && s.frequency(k) < 0.7) valley = std::min(valley, s.at(f, k));
    EXPECT_LT(valley, 0.1 * std::min(a, b));
  }
}

TEST(Spectrogram, TorsoAndSwingingLimbExtent) {
  WalkerModel m = torso_only(1.0);
  // Swing amplitude chosen so the limb velocity peaks at +-1 m/s.
  m.limbs.push_back({"leg", 0.0, 1.0 * 0.9 / kTwoPi, 0.9, 0.0, 0.3});
  const auto tr = simulate_walker(m, kLambda, kPri, 4096, 0.0, 1);
  const auto s = velocity_spectrogram(tr, kWin, kHop);
  double lo = 1e9, hi = -1e9;
  for (std::size_t f = 0; f < s.frames; ++f) {
    double peak = 0.0;
    for (std::size_t b = 0; b < s.bins; ++b) peak = std::max(peak, s.at(f, b));
    for (std::size_t b = 0; b < s.bins; ++b)
      if (s.at(f, b) > 0.1 * peak) {
        lo = std::min(lo, s.frequency(b));
        hi = std::max(hi, s.frequency(b));
      }
  }
  // Window smearing widens the ridge by a few bins.
  const double slack = 4.0 * s.freq_step;
  EXPECT_NEAR(lo, 0.0, slack);
  EXPECT_NEAR(hi, 2.0, slack);

  // Torso dominates the track at 1/0.3 reflectivity ratio.
  const auto t = track_dominant_velocity(s);
  for (double x : t.velocity.samples) EXPECT_NEAR(x, 1.0, s.freq_step);
}

}  // namespace
}  // namespace uwb
