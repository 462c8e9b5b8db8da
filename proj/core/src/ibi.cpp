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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "uwbsense/errors.hpp"
#include "uwbsense/filter.hpp"
#include "uwbsense/vitals.hpp"

namespace uwb {

std::string_view feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::DisplacementMax: return "displacement_max";
    case FeatureKind::DisplacementMin: return "displacement_min";
    case FeatureKind::VelocityMax: return "velocity_max";
    case FeatureKind::VelocityMin: return "velocity_min";
  }
  return "unknown";
}

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<long>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

// Parabolic vertex offset in (-0.5, 0.5) for three samples around a maximum.
double vertex_offset(double ym, double y0, double yp) {
  const double denom = ym - 2.0 * y0 + yp;
  if (!(denom < 0.0)) return 0.0;
  return std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
}

double coarse_period(const std::vector<double>& x, double fs, double lo_s, double hi_s) {
  const std::size_t n = x.size();
  std::vector<cplx> cx(x.begin(), x.end());
  const auto full = correlate(cx, cx);  // lag l at index l + n - 1
  const double r0 = full[n - 1].real();
  if (!(r0 > 0.0)) throw DomainError("no heartbeat band periodicity");
  auto r = [&](std::size_t l) { return full[n - 1 + l].real() / r0; };

  const auto lmin = static_cast<std::size_t>(std::max(1.0, std::ceil(lo_s * fs)));
  const auto lmax = std::min(static_cast<std::size_t>(std::floor(hi_s * fs)), n - 2);
  std::vector<std::size_t> maxima;
  double best = -1.0;
  for (std::size_t l = lmin; l <= lmax; ++l) {
    if (r(l) > r(l - 1) && r(l) >= r(l + 1)) {
      maxima.push_back(l);
      best = std::max(best, r(l));
    }
  }
  if (maxima.empty() || best < 0.1) throw DomainError("no heartbeat band periodicity");
  for (std::size_t l : maxima) {
    if (r(l) >= 0.6 * best) {
      const double frac = vertex_offset(r(l - 1), r(l), r(l + 1));
      return (static_cast<double>(l) + frac) / fs;
    }
  }
  throw DomainError("no heartbeat band periodicity");
}

// Removes the least-squares line from w in place.
void detrend(std::vector<double>& w) {
  const double n = static_cast<double>(w.size());
  const double tc = 0.5 * (n - 1.0);
  double sy = 0.0, sty = 0.0, stt = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double t = static_cast<double>(k) - tc;
    sy += w[k];
    sty += t * w[k];
    stt += t * t;
  }
  const double a = sy / n, b = stt > 0.0 ? sty / stt : 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) w[k] -= a + b * (static_cast<double>(k) - tc);
}

// Median beat template; windows are compared after linear detrending so
// slow residual wander does not bias the alignment.
struct Matcher {
  const std::vector<double>& x;
  long pre = 0, post = 0;
  std::vector<double> tmpl;

  bool fits(long centre) const {
    return centre - pre >= 0 && centre + post < static_cast<long>(x.size());
  }

  std::vector<double> window(long centre) const {
    std::vector<double> w(x.begin() + (centre - pre), x.begin() + (centre + post + 1));
    detrend(w);
    return w;
  }

  void build(const std::vector<double>& anchors) {
    const auto width = static_cast<std::size_t>(pre + post + 1);
    std::vector<std::vector<double>> cols(width);
    for (double a : anchors) {
      const auto c = static_cast<long>(std::lround(a));
      if (!fits(c)) continue;
      const auto w = window(c);
      for (std::size_t k = 0; k < width; ++k) cols[k].push_back(w[k]);
    }
    tmpl.assign(width, 0.0);
    for (std::size_t k = 0; k < width; ++k) tmpl[k] = median_of(cols[k]);
  }

  double corr_at(long centre) const { return pearson(window(centre), tmpl); }

  // Best template position within +-search samples of `centre`; returns the
  // fractional sample index and the correlation there.
  std::pair<double, double> match(long centre, long search) const {
    long best = std::numeric_limits<long>::min();
    double best_c = -2.0;
    for (long s = -search; s <= search; ++s) {
      const long c = centre + s;
      if (!fits(c)) continue;
      const double v = corr_at(c);
      if (v > best_c) {
        best_c = v;
        best = c;
      }
    }
    if (best == std::numeric_limits<long>::min()) return {static_cast<double>(centre), -1.0};
    double pos = static_cast<double>(best);
    if (fits(best - 1) && fits(best + 1))
      pos += vertex_offset(corr_at(best - 1), best_c, corr_at(best + 1));
    return {pos, best_c};
  }
};

}  // namespace

IBISeries estimate_ibi(const RealSeries& dh, const IbiOptions& opts, IbiDiagnostics* diagnostics) {
  if (!(dh.dt > 0.0)) throw InvalidArgument("series dt must be > 0");
  const double fs = 1.0 / dh.dt;
  const double duration = static_cast<double>(dh.size()) * dh.dt;
  if (duration < 5.0) throw DomainError("IBI estimation needs at least 5 s of data");
  if (!(opts.min_interval > 0.0 && opts.max_interval > opts.min_interval))
    throw InvalidArgument("interval bounds must satisfy 0 < min < max");

  std::vector<double> x = dh.samples;
  if (opts.lowpass_hz > 0.0 && opts.lowpass_hz < 0.45 * fs)
    x = filtfilt(butterworth(4, opts.lowpass_hz, fs, FilterKind::LowPass), x);
  const double m = mean(x);
  for (auto& v : x) v -= m;

  const double t0 = coarse_period(x, fs, opts.min_interval, opts.max_interval);
  const double expected = duration / t0;

  std::vector<double> vel(x.size(), 0.0);
  for (std::size_t i = 1; i + 1 < x.size(); ++i) vel[i] = 0.5 * (x[i + 1] - x[i - 1]) * fs;

  constexpr std::array<FeatureKind, 4> kinds{FeatureKind::DisplacementMax, FeatureKind::DisplacementMin,
                                             FeatureKind::VelocityMax, FeatureKind::VelocityMin};
  std::vector<double> spread(kinds.size(), std::numeric_limits<double>::infinity());
  std::vector<std::vector<double>> anchors(kinds.size());
  for (std::size_t q = 0; q < kinds.size(); ++q) {
    const bool use_vel = kinds[q] == FeatureKind::VelocityMax || kinds[q] == FeatureKind::VelocityMin;
    const double sign =
        (kinds[q] == FeatureKind::DisplacementMin || kinds[q] == FeatureKind::VelocityMin) ? -1.0 : 1.0;
    RealSeries s{use_vel ? vel : x, dh.dt, 0.0};
    for (auto& v : s.samples) v *= sign;
    auto peaks = find_peaks(s, 0.0, 0.6 * t0);
    std::vector<double> prom;
    for (const auto& p : peaks) prom.push_back(p.prominence);
    const double med = median_of(prom);
    if (!(med > 0.0)) continue;
    std::vector<double> norm;
    for (const auto& p : peaks) {
      if (p.prominence < 0.25 * med) continue;
      norm.push_back(p.prominence / med);
      anchors[q].push_back(static_cast<double>(p.index));
    }
    if (std::abs(static_cast<double>(norm.size()) - expected) > 0.2 * expected || norm.size() < 3)
      continue;
    spread[q] = variance(norm);
  }
  const auto best_q = static_cast<std::size_t>(std::min_element(spread.begin(), spread.end()) - spread.begin());
  if (!std::isfinite(spread[best_q])) throw DomainError("no heartbeat band periodicity");

  const auto period_samples = t0 * fs;
  Matcher mt{x, static_cast<long>(std::lround(0.25 * period_samples)),
             static_cast<long>(std::lround(0.25 * period_samples)), {}};
  std::vector<double> pos = anchors[best_q];
  std::vector<double> qual(pos.size(), 0.0);
  const long search = std::max<long>(1, std::lround(0.15 * period_samples));
  for (std::size_t pass = 0; pass < std::max<std::size_t>(1, opts.refine_passes); ++pass) {
    mt.build(pos);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const auto [p, c] = mt.match(std::lround(pos[i]), search);
      if (c > -1.0) {
        pos[i] = p;
        qual[i] = std::clamp(c, 0.0, 1.0);
      } else {
        qual[i] = 0.0;
      }
    }
    // Keep ordering and drop beats that collapsed onto a neighbour.
    std::vector<std::size_t> order(pos.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pos[a] < pos[b]; });
    std::vector<double> np, nq;
    for (std::size_t i : order) {
      if (!np.empty() && pos[i] - np.back() < std::max(opts.min_interval * fs, 0.5 * period_samples)) {
        if (qual[i] > nq.back()) {
          np.back() = pos[i];
          nq.back() = qual[i];
        }
        continue;
      }
      np.push_back(pos[i]);
      nq.push_back(qual[i]);
    }
    pos.swap(np);
    qual.swap(nq);
  }

  // Fill gaps left by missed beats with template matches near the expected spot.
  for (std::size_t i = 0; i + 1 < pos.size();) {
    const double gap = pos[i + 1] - pos[i];
    if (gap <= 1.6 * period_samples && gap <= opts.max_interval * fs) {
      ++i;
      continue;
    }
    const auto guess = std::lround(pos[i] + std::min(period_samples, gap / 2.0));
    auto [p, c] = mt.match(guess, std::max<long>(1, std::lround(0.3 * period_samples)));
    const bool inside = p - pos[i] >= opts.min_interval * fs && pos[i + 1] - p >= opts.min_interval * fs;
    if (!inside || c <= -1.0) {
      p = pos[i] + gap / 2.0;
      c = 0.0;
    }
    pos.insert(pos.begin() + static_cast<long>(i + 1), p);
    qual.insert(qual.begin() + static_cast<long>(i + 1), std::clamp(c, 0.0, 1.0));
  }

  IBISeries out;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    out.beat_times.push_back(dh.t0 + pos[i] * dh.dt);
    out.quality.push_back(qual[i]);
  }
  for (std::size_t i = 1; i < out.beat_times.size(); ++i)
    out.intervals.push_back(out.beat_times[i] - out.beat_times[i - 1]);

  if (diagnostics) {
    diagnostics->coarse_period = t0;
    diagnostics->anchor = kinds[best_q];
    diagnostics->anchor_spread = spread;
  }
  return out;
}

IbiComparison compare_ibi(const IBISeries& est, std::span<const double> truth) {
  IbiComparison cmp;
  cmp.truth_intervals = truth.size() > 1 ? truth.size() - 1 : 0;
  if (est.beat_times.empty() || truth.size() < 2) return cmp;

  auto nearest = [](std::span<const double> v, double t) {
    const auto it = std::lower_bound(v.begin(), v.end(), t);
    std::size_t i = static_cast<std::size_t>(it - v.begin());
    if (i == v.size()) return i - 1;
    if (i > 0 && t - v[i - 1] < v[i] - t) --i;
    return i;
  };

  std::vector<double> diffs;
  for (double b : est.beat_times) diffs.push_back(b - truth[nearest(truth, b)]);
  cmp.offset = median_of(diffs);

  const double mean_true = (truth.back() - truth.front()) / static_cast<double>(truth.size() - 1);
  const double tol = 0.25 * mean_true;
  std::vector<long> match(truth.size(), -1);
  for (std::size_t j = 0; j < truth.size(); ++j) {
    const double want = truth[j] + cmp.offset;
    const std::size_t i = nearest(est.beat_times, want);
    if (std::abs(est.beat_times[i] - want) < tol) match[j] = static_cast<long>(i);
  }
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < truth.size(); ++j) {
    if (match[j] < 0 || match[j + 1] != match[j] + 1) continue;
    const auto i = static_cast<std::size_t>(match[j]);
    const double e = (est.beat_times[i + 1] - est.beat_times[i]) - (truth[j + 1] - truth[j]);
    acc += e * e;
    ++cmp.matched_intervals;
  }
  if (cmp.matched_intervals > 0) {
    cmp.rmse = std::sqrt(acc / static_cast<double>(cmp.matched_intervals));
    cmp.rmse_percent = 100.0 * cmp.rmse / mean_true;
  }
  return cmp;
}

}  // namespace uwb
