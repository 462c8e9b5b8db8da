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

#include "uwbsense/vitals.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "uwbsense/errors.hpp"
#include "uwbsense/filter.hpp"

namespace uwb {

namespace {

// Raised-cosine lobe: 0 -> 1 over `rise`, 1 -> 0 over `fall`.
double lobe(double tau, double rise, double fall) {
  if (tau <= 0.0 || tau >= rise + fall) return 0.0;
  if (tau < rise) return 0.5 * (1.0 - std::cos(kPi * tau / rise));
  return 0.5 * (1.0 + std::cos(kPi * (tau - rise) / fall));
}

double respiration_at(const RespirationModel& r, double t) {
  if (r.amplitude == 0.0) return 0.0;
  double u = std::fmod((t + r.phase) / r.period, 1.0);
  if (u < 0.0) u += 1.0;
  const double f = r.inhale_fraction;
  if (u < f) return -r.amplitude * std::cos(kPi * u / f);
  return r.amplitude * std::cos(kPi * (u - f) / (1.0 - f));
}

}  // namespace

double HeartPulseShape::at(double tau) const {
  return lobe(tau, rise, fall) + second_amplitude * lobe(tau - second_onset, second_rise, second_fall);
}

double HeartPulseShape::duration() const {
  return std::max(rise + fall, second_onset + second_rise + second_fall);
}

void DisplacementModel::validate() const {
  if (!std::isfinite(d0)) throw InvalidArgument("d0 must be finite");
  if (drift.knot_times.size() != drift.values.size())
    throw InvalidArgument("drift knot_times and values differ in length");
  if (drift.knot_times.size() == 1) throw InvalidArgument("drift needs at least two knots");
  for (std::size_t i = 1; i < drift.knot_times.size(); ++i)
    if (!(drift.knot_times[i] > drift.knot_times[i - 1]))
      throw InvalidArgument("drift knot_times must be strictly increasing");
  if (!(resp.period > 0.0)) throw InvalidArgument("resp.period must be > 0");
  if (!(resp.amplitude >= 0.0)) throw InvalidArgument("resp.amplitude must be >= 0");
  if (!(resp.inhale_fraction > 0.0 && resp.inhale_fraction < 1.0))
    throw InvalidArgument("resp.inhale_fraction must lie in (0, 1)");
  if (!(heart.amplitude >= 0.0)) throw InvalidArgument("heart.amplitude must be >= 0");
  if (heart.ibi_sequence.empty()) throw InvalidArgument("heart.ibi_sequence must not be empty");
  for (double v : heart.ibi_sequence)
    if (!(v >= 0.25 && v <= 3.0)) throw InvalidArgument("heart IBIs must lie in [0.25, 3.0] s");
  const auto& s = heart.shape;
  if (!(s.rise > 0.0) || !(s.fall > 0.0) || !(s.second_rise > 0.0) || !(s.second_fall > 0.0) ||
      !(s.second_onset >= 0.0))
    throw InvalidArgument("heart pulse lobe durations must be > 0");
}

std::vector<double> heart_beat_times(const HeartModel& heart, double duration) {
  std::vector<double> beats;
  if (heart.ibi_sequence.empty()) return beats;
  double t = heart.first_beat;
  for (std::size_t k = 0; t < duration; ++k) {
    beats.push_back(t);
    t += heart.ibi_sequence[k % heart.ibi_sequence.size()];
  }
  return beats;
}

std::vector<double> modulated_ibi_sequence(double mean, double depth, double freq_hz, double duration,
                                           double first_beat, double phase) {
  if (!(mean > 0.0)) throw InvalidArgument("mean interval must be > 0");
  std::vector<double> ibis;
  for (double t = first_beat; t < duration;) {
    const double ibi = mean * (1.0 + depth * std::sin(kTwoPi * freq_hz * t + phase));
    ibis.push_back(ibi);
    t += ibi;
  }
  if (ibis.empty()) ibis.push_back(mean);
  return ibis;
}

DisplacementComponents synth_displacement_components(const DisplacementModel& model, double fs,
                                                     double duration) {
  model.validate();
  if (!(fs > 0.0)) throw InvalidArgument("fs must be > 0");
  if (!(duration >= 1.0 / fs)) throw InvalidArgument("duration must be >= 1/fs");
  const auto n = static_cast<std::size_t>(std::floor(duration * fs + 1e-9));
  const double dt = 1.0 / fs;

  DisplacementComponents c;
  for (auto* s : {&c.total, &c.drift, &c.respiration, &c.heart}) {
    s->dt = dt;
    s->t0 = 0.0;
    s->samples.assign(n, 0.0);
  }

  if (!model.drift.knot_times.empty()) {
    const CubicSpline spline(model.drift.knot_times, model.drift.values);
    for (std::size_t i = 0; i < n; ++i) c.drift.samples[i] = spline(static_cast<double>(i) * dt);
  }
  for (std::size_t i = 0; i < n; ++i)
    c.respiration.samples[i] = respiration_at(model.resp, static_cast<double>(i) * dt);

  if (model.heart.amplitude > 0.0) {
    const double span = model.heart.shape.duration();
    for (double onset : heart_beat_times(model.heart, duration)) {
      const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil(onset * fs)));
      for (std::size_t i = lo; i < n; ++i) {
        const double tau = static_cast<double>(i) * dt - onset;
        if (tau >= span) break;
        c.heart.samples[i] += model.heart.amplitude * model.heart.shape.at(tau);
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    c.total.samples[i] = model.d0 + c.drift.samples[i] + c.respiration.samples[i] + c.heart.samples[i];
  return c;
}

RealSeries synth_displacement(const DisplacementModel& model, double fs, double duration) {
  return synth_displacement_components(model, fs, duration).total;
}

// ---------------------------------------------------------------------------
// IQ front end
// ---------------------------------------------------------------------------

IQTrace synth_iq(const RealSeries& d, double k, cplx amplitude, cplx s_dc, double noise_std,
                 std::uint64_t seed) {
  if (!(k > 0.0)) throw InvalidArgument("wavenumber k must be > 0");
  if (!(d.dt > 0.0)) throw InvalidArgument("displacement dt must be > 0");
  if (!(noise_std >= 0.0)) throw InvalidArgument("noise_std must be >= 0");
  IQTrace iq;
  iq.fs = 1.0 / d.dt;
  iq.k = k;
  iq.amplitude = amplitude;
  iq.s_dc = s_dc;
  iq.samples.dt = d.dt;
  iq.samples.t0 = d.t0;
  iq.samples.samples.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    iq.samples.samples[i] = amplitude * std::polar(1.0, 2.0 * k * d.samples[i]) + s_dc;
  if (noise_std > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, noise_std / std::sqrt(2.0));
    for (auto& s : iq.samples.samples) {
      const double re = g(rng);
      const double im = g(rng);
      s += cplx{re, im};
    }
  }
  return iq;
}

ClutterMode parse_clutter_mode(std::string_view name) {
  if (name == "mean") return ClutterMode::Mean;
  if (name == "circle") return ClutterMode::CircleFit;
  throw InvalidArgument("unknown clutter mode '" + std::string(name) + "' (expected mean or circle)");
}

std::string_view clutter_mode_name(ClutterMode mode) {
  return mode == ClutterMode::Mean ? "mean" : "circle";
}

ClutterRemoval remove_static_clutter(const IQTrace& iq, ClutterMode mode) {
  const auto& s = iq.samples.samples;
  if (s.size() < 16) throw InvalidArgument("clutter removal needs at least 16 samples");
  cplx m{};
  for (const auto& v : s) m += v;
  m /= static_cast<double>(s.size());
  double var = 0.0;
  for (const auto& v : s) var += std::norm(v - m);
  var /= static_cast<double>(s.size());
  if (!(var > 1e-24 * std::max(std::norm(m), 1e-300))) throw DomainError("no dynamic component");

  ClutterRemoval out;
  out.centre = m;
  if (mode == ClutterMode::CircleFit) {
    // Kasa fit on centred data: x^2 + y^2 + D x + E y + F = 0.
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixX3d a(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx v = s[static_cast<std::size_t>(i)] - m;
      a(i, 0) = v.real();
      a(i, 1) = v.imag();
      a(i, 2) = 1.0;
      b(i) = -std::norm(v);
    }
    const Eigen::Vector3d p = a.colPivHouseholderQr().solve(b);
    if (!p.allFinite()) throw NumericalError("circle fit failed");
    const cplx c{-p(0) / 2.0, -p(1) / 2.0};
    const double r2 = std::norm(c) - p(2);
    if (!(r2 > 0.0)) throw NumericalError("circle fit produced a degenerate radius");
    out.centre = m + c;
    out.radius = std::sqrt(r2);
    double acc = 0.0;
    for (const auto& v : s) {
      const double e = std::abs(v - out.centre) - out.radius;
      acc += e * e;
    }
    out.residual = std::sqrt(acc / static_cast<double>(s.size()));
  }
  out.trace = iq;
  for (auto& v : out.trace.samples.samples) v -= out.centre;
  return out;
}

RealSeries demodulate_phase(const IQTrace& iq) {
  if (!(iq.k > 0.0)) throw InvalidArgument("wavenumber k must be > 0");
  std::vector<double> ph(iq.samples.size());
  for (std::size_t i = 0; i < ph.size(); ++i) ph[i] = std::arg(iq.samples.samples[i]);
  auto un = unwrap_phase(ph);
  RealSeries d{std::move(un), iq.samples.dt, iq.samples.t0};
  if (d.samples.empty()) return d;
  const double m = mean(d.samples);
  for (auto& v : d.samples) v = (v - m) / (2.0 * iq.k);
  return d;
}

RealSeries suppress_respiration(const RealSeries& d, double resp_band_max) {
  const double fs = 1.0 / d.dt;
  if (!(fs >= 10.0)) throw InvalidArgument("respiration suppression needs fs >= 10 Hz");
  const auto sos = butterworth(4, resp_band_max, fs, FilterKind::HighPass);
  RealSeries out{filtfilt(sos, d.samples), d.dt, d.t0};
  if (!out.samples.empty()) {
    const double m = mean(out.samples);
    for (auto& v : out.samples) v -= m;
  }
  return out;
}

// ---------------------------------------------------------------------------
// HRV
// ---------------------------------------------------------------------------

IBISeries ibi_from_beats(std::vector<double> beat_times) {
  IBISeries s;
  s.beat_times = std::move(beat_times);
  for (std::size_t i = 1; i < s.beat_times.size(); ++i)
    s.intervals.push_back(s.beat_times[i] - s.beat_times[i - 1]);
  s.quality.assign(s.beat_times.size(), 1.0);
  return s;
}

HRVReport hrv_lf_hf(const IBISeries& ibi) {
  if (ibi.intervals.size() + 1 != ibi.beat_times.size())
    throw InvalidArgument("IBI series needs one interval fewer than beats");
  HRVReport rep;
  rep.record_span = ibi.beat_times.empty() ? 0.0 : ibi.beat_times.back() - ibi.beat_times.front();
  if (!(rep.record_span > 25.0)) throw DomainError("record too short for LF");
  if (ibi.beat_times.size() < 10) throw DomainError("at least 10 beats required for HRV");

  std::vector<double> t(ibi.beat_times.begin() + 1, ibi.beat_times.end());
  const CubicSpline spline(t, ibi.intervals);
  const double fs = 4.0;
  RealSeries x = sample_uniform(spline, t.front(), t.back(), 1.0 / fs);
  const std::size_t n = x.size();

  // Least-squares linear detrend.
  double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ti = static_cast<double>(i);
    st += ti;
    sx += x.samples[i];
    stt += ti * ti;
    stx += ti * x.samples[i];
  }
  const double nn = static_cast<double>(n);
  const double slope = (nn * stx - st * sx) / (nn * stt - st * st);
  const double icept = (sx - slope * st) / nn;
  std::vector<cplx> buf(n);
  for (std::size_t i = 0; i < n; ++i)
    buf[i] = x.samples[i] - (icept + slope * static_cast<double>(i));

  FftPlan(n).forward(buf);
  const double df = fs / nn;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * df;
    const double p = 2.0 * std::norm(buf[k]) / (nn * nn);
    if (f >= 0.04 && f <= 0.15)
      rep.lf_power += p;
    else if (f > 0.15 && f <= 0.4)
      rep.hf_power += p;
  }
  const double total = rep.lf_power + rep.hf_power;
  const double mean_ibi = mean(ibi.intervals);
  rep.ratio_defined = rep.hf_power > 1e-12 * mean_ibi * mean_ibi && total > 0.0;
  rep.ratio = rep.ratio_defined ? rep.lf_power / rep.hf_power : 0.0;
  return rep;
}

}  // namespace uwb
