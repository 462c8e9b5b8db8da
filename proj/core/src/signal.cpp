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

#include "uwbsense/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uwbsense/errors.hpp"

namespace uwb {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// ---------------------------------------------------------------------------
// FftPlan
// ---------------------------------------------------------------------------

FftPlan::FftPlan(std::size_t n) : n_(n), pow2_(is_power_of_two(n)) {
  if (n == 0) throw InvalidArgument("empty series");
  if (pow2_) {
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double a = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
      twiddles_[k] = {std::cos(a), std::sin(a)};
    }
    bitrev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      bitrev_[i] = r;
    }
    return;
  }

  // Bluestein: X[k] = w[k] * sum_n (x[n] w[n]) conj(w[k-n]), w[k] = exp(-j pi k^2 / n).
  const std::size_t m = next_power_of_two(2 * n - 1);
  inner_ = std::make_shared<const FftPlan>(m);
  chirp_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the argument small for large k.
    const std::size_t k2 = (k * k) % (2 * n);
    const double a = -kPi * static_cast<double>(k2) / static_cast<double>(n);
    chirp_[k] = {std::cos(a), std::sin(a)};
  }
  chirp_spectrum_.assign(m, cplx{});
  chirp_spectrum_[0] = std::conj(chirp_[0]);
  for (std::size_t k = 1; k < n; ++k) {
    chirp_spectrum_[k] = std::conj(chirp_[k]);
    chirp_spectrum_[m - k] = std::conj(chirp_[k]);
  }
  inner_->forward(chirp_spectrum_);
}

void FftPlan::execute(std::span<cplx> data, Direction dir) const {
  if (dir == Direction::Forward)
    forward(data);
  else
    inverse(data);
}

void FftPlan::forward(std::span<cplx> data) const {
  if (data.size() != n_) throw InvalidArgument("fft plan size mismatch");
  if (pow2_)
    radix2(data);
  else
    bluestein(data);
}

void FftPlan::inverse(std::span<cplx> data) const {
  for (auto& v : data) v = std::conj(v);
  forward(data);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v = std::conj(v) * scale;
}

void FftPlan::radix2(std::span<cplx> data) const {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i)
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx w = twiddles_[k * stride], v = data[start + k + half];
        const cplx t{w.real() * v.real() - w.imag() * v.imag(), w.real() * v.imag() + w.imag() * v.real()};
        const cplx u = data[start + k];
        data[start + k] = u + t;
        data[start + k + half] = u - t;
      }
    }
  }
}

void FftPlan::bluestein(std::span<cplx> data) const {
  const std::size_t m = inner_->size();
  std::vector<cplx> buf(m, cplx{});
  for (std::size_t k = 0; k < n_; ++k) buf[k] = data[k] * chirp_[k];
  inner_->forward(buf);
  for (std::size_t k = 0; k < m; ++k) buf[k] *= chirp_spectrum_[k];
  inner_->inverse(buf);
  for (std::size_t k = 0; k < n_; ++k) data[k] = buf[k] * chirp_[k];
}

// ---------------------------------------------------------------------------

std::vector<cplx> dft(std::span<const cplx> x, Direction dir) {
  if (x.empty()) throw InvalidArgument("empty series");
  std::vector<cplx> out(x.begin(), x.end());
  FftPlan(out.size()).execute(out, dir);
  return out;
}

ComplexSeries dft(const ComplexSeries& series, Direction dir) {
  if (series.samples.empty()) throw InvalidArgument("empty series");
  ComplexSeries out;
  out.samples = dft(std::span<const cplx>(series.samples), dir);
  out.dt = 1.0 / (static_cast<double>(series.size()) * series.dt);
  out.t0 = 0.0;
  return out;
}

void transform_axis(std::span<cplx> data, const std::array<std::size_t, 3>& dims, int axis,
                    Direction dir) {
  if (axis < 0 || axis > 2) throw InvalidArgument("axis out of range");
  if (data.size() != dims[0] * dims[1] * dims[2]) throw InvalidArgument("shape mismatch");
  const std::size_t n = dims[static_cast<std::size_t>(axis)];
  if (n == 0) return;
  const FftPlan plan(n);
  const std::size_t stride = axis == 0 ? dims[1] * dims[2] : axis == 1 ? dims[2] : 1;

  if (stride == 1) {
    for (std::size_t off = 0; off < data.size(); off += n)
      plan.execute(data.subspan(off, n), dir);
    return;
  }
  std::vector<cplx> line(n);
  const std::size_t outer = axis == 0 ? 1 : dims[0];
  const std::size_t inner = stride;
  const std::size_t block = n * stride;
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * block + i;
      for (std::size_t k = 0; k < n; ++k) line[k] = data[base + k * stride];
      plan.execute(line, dir);
      for (std::size_t k = 0; k < n; ++k) data[base + k * stride] = line[k];
    }
  }
}

std::vector<cplx> convolve(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t m = next_power_of_two(out_len);
  const FftPlan plan(m);
  std::vector<cplx> fa(m, cplx{}), fb(m, cplx{});
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  plan.forward(fa);
  plan.forward(fb);
  for (std::size_t k = 0; k < m; ++k) fa[k] *= fb[k];
  plan.inverse(fa);
  fa.resize(out_len);
  return fa;
}

std::vector<cplx> correlate(std::span<const cplx> x, std::span<const cplx> y) {
  // r[l] = sum_n x[n+l] conj(y[n]) == (x * reverse(conj(y)))[l + len(y) - 1]
  std::vector<cplx> yr(y.rbegin(), y.rend());
  for (auto& v : yr) v = std::conj(v);
  return convolve(x, yr);
}

// ---------------------------------------------------------------------------
// STFT
// ---------------------------------------------------------------------------

Taper parse_taper(std::string_view name) {
  if (name == "rect" || name == "rectangular") return Taper::Rect;
  if (name == "hann") return Taper::Hann;
  if (name == "hamming") return Taper::Hamming;
  throw InvalidArgument("unknown taper '" + std::string(name) + "'");
}

std::string_view taper_name(Taper taper) {
  switch (taper) {
    case Taper::Rect: return "rect";
    case Taper::Hann: return "hann";
    case Taper::Hamming: return "hamming";
  }
  return "rect";
}

std::vector<double> make_window(Taper taper, std::size_t len) {
  std::vector<double> w(len, 1.0);
  if (taper == Taper::Rect || len < 2) return w;
  // Periodic form: the DFT of a length-L frame sees an exact raised cosine.
  const double a0 = taper == Taper::Hann ? 0.5 : 0.54;
  for (std::size_t n = 0; n < len; ++n)
    w[n] = a0 - (1.0 - a0) * std::cos(kTwoPi * static_cast<double>(n) / static_cast<double>(len));
  return w;
}

Spectrogram stft(const ComplexSeries& series, std::size_t window_len, std::size_t hop, Taper window) {
  if (hop == 0) throw InvalidArgument("hop must be >= 1");
  if (window_len == 0) throw InvalidArgument("window length must be >= 1");
  if (window_len > series.size()) throw InvalidArgument("window exceeds record");

  const std::size_t frames = (series.size() - window_len) / hop + 1;
  const std::size_t half = window_len / 2;
  const auto w = make_window(window, window_len);
  const FftPlan plan(window_len);

  Spectrogram out;
  out.frames = frames;
  out.bins = window_len;
  out.values.resize(frames * window_len);
  out.frame_dt = static_cast<double>(hop) * series.dt;
  out.time_origin = series.t0 + static_cast<double>(half) * series.dt;
  out.freq_step = 1.0 / (static_cast<double>(window_len) * series.dt);
  out.freq_origin = -static_cast<double>(half) * out.freq_step;

  std::vector<cplx> buf(window_len);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * hop;
    for (std::size_t n = 0; n < window_len; ++n) buf[n] = series.samples[start + n] * w[n];
    plan.forward(buf);
    double* row = out.values.data() + f * window_len;
    for (std::size_t b = 0; b < window_len; ++b) {
      const std::size_t k = (b + window_len - half) % window_len;
      row[b] = std::abs(buf[k]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Phase unwrapping
// ---------------------------------------------------------------------------

std::vector<double> unwrap_phase(std::span<const double> wrapped) {
  std::vector<double> out(wrapped.size());
  if (wrapped.empty()) return out;
  long turns = 0;
  out[0] = wrapped[0];
  for (std::size_t i = 1; i < wrapped.size(); ++i) {
    const double d = wrapped[i] - wrapped[i - 1];
    // Largest integer shift keeping the step inside (-pi, pi].
    turns += static_cast<long>(std::floor((kPi - d) / kTwoPi));
    out[i] = wrapped[i] + kTwoPi * static_cast<double>(turns);
  }
  return out;
}

RealSeries unwrap_phase(const RealSeries& wrapped) {
  return {unwrap_phase(std::span<const double>(wrapped.samples)), wrapped.dt, wrapped.t0};
}

// ---------------------------------------------------------------------------
// Peak finding
// ---------------------------------------------------------------------------

std::vector<Peak> find_peaks(const RealSeries& series, double min_prominence,
                             double min_separation) {
  if (min_separation < 0.0) throw InvalidArgument("min_separation must be >= 0");
  const auto& x = series.samples;
  const std::size_t n = x.size();
  std::vector<Peak> cand;
  if (n < 3) return cand;

  // Prominence never exceeds the height above the record minimum.
  const double floor_value = *std::min_element(x.begin(), x.end());
  std::size_t i = 1;
  while (i + 1 < n) {
    if (x[i - 1] < x[i]) {
      std::size_t j = i;
      while (j + 1 < n && x[j + 1] == x[i]) ++j;
      if (j + 1 < n && x[j + 1] < x[i] && x[i] - floor_value >= min_prominence) {
        // Prominence: lowest point on each side before terrain rises above the peak.
        double left_min = x[i];
        for (std::size_t k = i; k-- > 0;) {
          if (x[k] > x[i]) break;
          left_min = std::min(left_min, x[k]);
        }
        double right_min = x[i];
        for (std::size_t k = j + 1; k < n; ++k) {
          if (x[k] > x[i]) break;
          right_min = std::min(right_min, x[k]);
        }
        const double prom = x[i] - std::max(left_min, right_min);
        if (prom >= min_prominence) cand.push_back({i, series.time(i), x[i], prom});
      }
      i = j + 1;
    } else {
      ++i;
    }
  }

  if (min_separation <= 0.0 || cand.size() < 2) return cand;

  std::vector<std::size_t> order(cand.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cand[a].value > cand[b].value; });
  std::vector<bool> keep(cand.size(), true);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t p = order[oi];
    if (!keep[p]) continue;
    // Everything still alive nearby is lower, or equal and later.
    for (std::size_t q = p; q-- > 0 && cand[p].time - cand[q].time < min_separation;)
      keep[q] = false;
    for (std::size_t q = p + 1; q < cand.size() && cand[q].time - cand[p].time < min_separation; ++q)
      keep[q] = false;
  }
  std::vector<Peak> out;
  for (std::size_t k = 0; k < cand.size(); ++k)
    if (keep[k]) out.push_back(cand[k]);
  return out;
}

// ---------------------------------------------------------------------------
// Interpolation
// ---------------------------------------------------------------------------

RealSeries resample_linear(const RealSeries& series, double new_dt) {
  if (series.size() < 2) throw InvalidArgument("cannot interpolate");
  if (!(new_dt > 0.0)) throw InvalidArgument("new_dt must be > 0");
  const double span = static_cast<double>(series.size() - 1) * series.dt;
  const auto count = static_cast<std::size_t>(std::floor(span / new_dt + 1e-9)) + 1;
  RealSeries out{std::vector<double>(count), new_dt, series.t0};
  const auto last = series.size() - 1;
  for (std::size_t m = 0; m < count; ++m) {
    const double pos = static_cast<double>(m) * new_dt / series.dt;
    auto k = static_cast<std::size_t>(std::floor(pos));
    if (k >= last) {
      out.samples[m] = series.samples[last];
      continue;
    }
    const double frac = pos - static_cast<double>(k);
    out.samples[m] = series.samples[k] + frac * (series.samples[k + 1] - series.samples[k]);
  }
  return out;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw InvalidArgument("spline knot count mismatch");
  if (x_.empty()) throw InvalidArgument("spline needs at least one knot");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw InvalidArgument("spline knots must be strictly increasing");
  const std::size_t n = x_.size();
  m_.assign(n, 0.0);
  if (n < 3) return;
  // Thomas algorithm for the natural-spline tridiagonal system.
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double a = h0, b = 2.0 * (h0 + h1), cc = h1;
    const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (rhs - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = d[i] - c[i] * m_[i + 1];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double t) const {
  const std::size_t n = x_.size();
  if (n == 1 || t <= x_.front()) return y_.front();
  if (t >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

RealSeries sample_uniform(const CubicSpline& spline, double t0, double t_end, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  const auto count = static_cast<std::size_t>(std::floor((t_end - t0) / dt + 1e-9)) + 1;
  RealSeries out{std::vector<double>(count), dt, t0};
  for (std::size_t m = 0; m < count; ++m) out.samples[m] = spline(t0 + static_cast<double>(m) * dt);
  return out;
}

// ---------------------------------------------------------------------------

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.empty()) return 0.0;
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return acc / static_cast<double>(x.size());
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("pearson: length mismatch");
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double energy(std::span<const cplx> x) {
  double acc = 0.0;
  for (const auto& v : x) acc += std::norm(v);
  return acc;
}

}  // namespace uwb
