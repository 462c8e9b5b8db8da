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

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace uwb {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Uniformly sampled complex record. Sample n sits at t0 + n*dt.
struct ComplexSeries {
  std::vector<cplx> samples;
  double dt = 1.0;
  double t0 = 0.0;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t n) const { return t0 + static_cast<double>(n) * dt; }
};

/// Uniformly sampled real record. Sample n sits at t0 + n*dt.
struct RealSeries {
  std::vector<double> samples;
  double dt = 1.0;
  double t0 = 0.0;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t n) const { return t0 + static_cast<double>(n) * dt; }
};

/// Magnitude grid, frame-major: values[frame * bins + bin].
/// Bin b sits at freq_origin + b * freq_step; frame f is centred at
/// time_origin + f * frame_dt.
struct Spectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> values;
  double frame_dt = 1.0;
  double time_origin = 0.0;
  double freq_step = 1.0;
  double freq_origin = 0.0;

  double at(std::size_t frame, std::size_t bin) const { return values[frame * bins + bin]; }
  double frequency(std::size_t bin) const {
    return freq_origin + static_cast<double>(bin) * freq_step;
  }
};

// ---------------------------------------------------------------------------
// Fourier transforms
//
// Convention used throughout the library: the forward transform is
//   X[k] = sum_n x[n] exp(-j 2 pi k n / N)
// and the inverse carries the 1/N factor.
// ---------------------------------------------------------------------------

enum class Direction { Forward, Inverse };

/// Precomputed O(N log N) transform of a fixed length. Power-of-two sizes
/// use an iterative radix-2 kernel; every other size goes through
/// Bluestein's chirp-z identity on a power-of-two inner plan.
/// Plans are immutable after construction and safe to share across threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }

  void forward(std::span<cplx> data) const;
  void inverse(std::span<cplx> data) const;
  void execute(std::span<cplx> data, Direction dir) const;

 private:
  void radix2(std::span<cplx> data) const;
  void bluestein(std::span<cplx> data) const;

  std::size_t n_;
  bool pow2_;
  std::vector<cplx> twiddles_;
  std::vector<std::size_t> bitrev_;
  std::vector<cplx> chirp_;
  std::vector<cplx> chirp_spectrum_;
  std::shared_ptr<const FftPlan> inner_;
};

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

/// Map DFT index k of an n-point transform to its signed frequency index
/// (0, 1, ..., ceil(n/2)-1, -floor(n/2), ..., -1).
inline long signed_bin(std::size_t k, std::size_t n) {
  return k >= n - n / 2 ? static_cast<long>(k) - static_cast<long>(n) : static_cast<long>(k);
}

/// Transform of a whole record. The output spacing is 1/(N*dt) so a
/// forward/inverse round trip restores dt.
ComplexSeries dft(const ComplexSeries& series, Direction dir);
std::vector<cplx> dft(std::span<const cplx> x, Direction dir);

/// Transform every 1D line of a row-major 3D array along `axis`.
void transform_axis(std::span<cplx> data, const std::array<std::size_t, 3>& dims, int axis,
                    Direction dir);

/// Full linear convolution (length a + b - 1), FFT based.
std::vector<cplx> convolve(std::span<const cplx> a, std::span<const cplx> b);

/// Cross-correlation r[l] = sum_n x[n + l] * conj(y[n]) for lags
/// l in [-(len(y)-1), len(x)-1]; element 0 of the result is the most
/// negative lag.
std::vector<cplx> correlate(std::span<const cplx> x, std::span<const cplx> y);

// ---------------------------------------------------------------------------
// Short-time analysis
// ---------------------------------------------------------------------------

enum class Taper { Rect, Hann, Hamming };

/// Accepts "rect", "hann", "hamming".
Taper parse_taper(std::string_view name);
std::string_view taper_name(Taper taper);
std::vector<double> make_window(Taper taper, std::size_t len);

/// Two-sided magnitude STFT. Frame f covers samples [f*hop, f*hop + window_len);
/// the frequency axis is centred (bin floor(L/2) is DC).
Spectrogram stft(const ComplexSeries& series, std::size_t window_len, std::size_t hop, Taper window);

// ---------------------------------------------------------------------------
// Phase, peaks, interpolation
// ---------------------------------------------------------------------------

/// Successive output differences lie in (-pi, pi]; output - input is an
/// integer multiple of 2*pi at every sample.
RealSeries unwrap_phase(const RealSeries& wrapped);
std::vector<double> unwrap_phase(std::span<const double> wrapped);

struct Peak {
  std::size_t index = 0;
  double time = 0.0;
  double value = 0.0;
  double prominence = 0.0;
};

/// Local maxima (plateaus report their leftmost sample, end samples never
/// qualify) with topographic prominence >= min_prominence. Among peaks
/// closer than min_separation the taller survives, the earlier one on ties.
/// Returned in ascending time.
std::vector<Peak> find_peaks(const RealSeries& series, double min_prominence,
                             double min_separation);

/// Uniform linear resampling over [t0, t_end]. The first sample is kept;
/// the last one is kept whenever the span is a multiple of new_dt.
RealSeries resample_linear(const RealSeries& series, double new_dt);

/// Natural cubic spline through (x, y). Outside the knot span the end
/// values are held.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  std::size_t knots() const { return x_.size(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

/// Sample a spline on a uniform grid starting at t0.
RealSeries sample_uniform(const CubicSpline& spline, double t0, double t_end, double dt);

// ---------------------------------------------------------------------------
// Small statistics helpers shared by the pipelines.
// ---------------------------------------------------------------------------

double mean(std::span<const double> x);
double variance(std::span<const double> x);
double pearson(std::span<const double> a, std::span<const double> b);
double energy(std::span<const cplx> x);

}  // namespace uwb
