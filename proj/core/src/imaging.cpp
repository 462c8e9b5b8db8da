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

#include "uwbsense/imaging.hpp"

#include <algorithm>
#include <cmath>

#include "uwbsense/errors.hpp"

namespace uwb {

void VolumeSpec::validate() const {
  if (nx == 0 || ny == 0 || nz == 0) throw InvalidArgument("volume dimensions must be >= 1");
  if (!(dx > 0.0) || !(dy > 0.0) || !(dz > 0.0)) throw InvalidArgument("volume spacings must be > 0");
  if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(z0))
    throw InvalidArgument("volume origin must be finite");
}

std::array<std::size_t, 3> VolumeImage::argmax() const {
  const auto it = std::max_element(values.begin(), values.end());
  const auto flat = static_cast<std::size_t>(it - values.begin());
  const std::size_t k = flat % grid.nz;
  const std::size_t j = (flat / grid.nz) % grid.ny;
  const std::size_t i = flat / (grid.nz * grid.ny);
  return {i, j, k};
}

VolumeSpec migration_volume(const EchoCube& cube, double c) {
  VolumeSpec v;
  v.nx = cube.aperture.nx;
  v.ny = cube.aperture.ny;
  v.nz = cube.pulse.nt;
  v.dx = cube.aperture.dx;
  v.dy = cube.aperture.dy;
  v.dz = c * cube.pulse.dt / 2.0;
  v.x0 = cube.aperture.x0;
  v.y0 = cube.aperture.y0;
  v.z0 = 0.0;
  return v;
}

// ---------------------------------------------------------------------------
// F-K migration
// ---------------------------------------------------------------------------

namespace {

// Transforms the lines along `axis` whose other two indices lie below
// lim; the rest of the array is left untouched.
void transform_subset(std::span<cplx> data, const std::array<std::size_t, 3>& dims, int axis, Direction dir,
                      const std::array<std::size_t, 3>& lim) {
  const auto a = static_cast<std::size_t>(axis);
  const std::size_t n = dims[a];
  const FftPlan plan(n);
  const std::array<std::size_t, 3> stride{dims[1] * dims[2], dims[2], 1};
  const std::size_t u = a == 0 ? 1 : 0, w = 2;  // the other two axes for a strided pass
  if (a == 2) {
    for (std::size_t p = 0; p < lim[0]; ++p)
      for (std::size_t q = 0; q < lim[1]; ++q) plan.execute(data.subspan(p * stride[0] + q * stride[1], n), dir);
    return;
  }
  // Strided axes go through a transposed batch of adjacent lines.
  constexpr std::size_t kBatch = 16;
  std::vector<cplx> buf(kBatch * n);
  for (std::size_t p = 0; p < lim[u]; ++p)
    for (std::size_t q0 = 0; q0 < lim[w]; q0 += kBatch) {
      const std::size_t nb = std::min(kBatch, lim[w] - q0);
      const std::size_t base = p * stride[u] + q0;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t b = 0; b < nb; ++b) buf[b * n + k] = data[base + k * stride[a] + b];
      for (std::size_t b = 0; b < nb; ++b) plan.execute(std::span<cplx>(buf).subspan(b * n, n), dir);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t b = 0; b < nb; ++b) data[base + k * stride[a] + b] = buf[b * n + k];
    }
}

}  // namespace

FKGrid fk_spectrum(const EchoCube& cube, std::size_t time_padding, std::size_t spatial_padding) {
  cube.validate();
  if (time_padding == 0 || spatial_padding == 0) throw InvalidArgument("fk padding factors must be >= 1");
  for (const auto& v : cube.data)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("echo cube contains non-finite samples");
  const std::size_t nx = cube.aperture.nx, ny = cube.aperture.ny, nt = cube.pulse.nt;
  const std::array<std::size_t, 3> dims{nx * spatial_padding, ny * spatial_padding, nt * time_padding};
  FKGrid g;
  if (time_padding == 1 && spatial_padding == 1) {
    g.values = cube.data;
  } else {
    g.values.assign(dims[0] * dims[1] * dims[2], cplx{});
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j)
        std::copy_n(cube.data.begin() + static_cast<long>(cube.index(i, j, 0)), nt,
                    g.values.begin() + static_cast<long>((i * dims[1] + j) * dims[2]));
  }
  // Forward passes skip lines that are all padding.
  transform_subset(g.values, dims, 2, Direction::Forward, {nx, ny, 0});
  transform_subset(g.values, dims, 1, Direction::Forward, {nx, 0, dims[2]});
  transform_subset(g.values, dims, 0, Direction::Forward, {0, dims[1], dims[2]});
  g.kx = {dims[0], kTwoPi / (static_cast<double>(dims[0]) * cube.aperture.dx), 0.0};
  g.ky = {dims[1], kTwoPi / (static_cast<double>(dims[1]) * cube.aperture.dy), 0.0};
  g.third = {dims[2], kTwoPi / (static_cast<double>(dims[2]) * cube.pulse.dt), kTwoPi * cube.pulse.fc};
  return g;
}

namespace {

// Remaps g from (kx, ky, omega) to (kx, ky, kz) in place, one column at a time.
void stolt_in_place(FKGrid& g, double dt, double c) {
  if (!(c > 0.0) || !(dt > 0.0)) throw InvalidArgument("stolt_remap: c and dt must be > 0");
  const std::size_t nx = g.kx.n, ny = g.ky.n, nt = g.third.n;
  const double v = c / 2.0;
  const double dz = v * dt;
  const FkAxis w_axis = g.third;
  g.third = {nt, kTwoPi / (static_cast<double>(nt) * dz), w_axis.centre / v};

  const long lo_bin = -static_cast<long>(nt / 2);
  const long hi_bin = static_cast<long>(nt) - 1 - static_cast<long>(nt / 2);
  const double w_max = w_axis.centre + static_cast<double>(hi_bin) * w_axis.step;
  auto native = [nt](long b) { return static_cast<std::size_t>(b < 0 ? b + static_cast<long>(nt) : b); };

  std::vector<cplx> src(nt);
  for (std::size_t i = 0; i < nx; ++i) {
    const double kx = g.kx.at(i);
    for (std::size_t j = 0; j < ny; ++j) {
      const double ky = g.ky.at(j);
      const double kperp2 = kx * kx + ky * ky;
      cplx* col = g.values.data() + (i * ny + j) * nt;
      if (kperp2 > (w_max / v) * (w_max / v)) {  // evanescent everywhere
        std::fill_n(col, nt, cplx{});
        continue;
      }
      std::copy_n(col, nt, src.begin());
      for (std::size_t q = 0; q < nt; ++q) {
        col[q] = cplx{};
        const double kz = g.third.at(q);
        if (kz <= 0.0) continue;
        const double kmag = std::sqrt(kperp2 + kz * kz);
        const double w = v * kmag;
        const double u = (w - w_axis.centre) / w_axis.step;  // fractional signed bin
        const double fl = std::floor(u);
        const auto b0 = static_cast<long>(fl);
        if (b0 < lo_bin || b0 + 1 > hi_bin) {
          if (b0 == hi_bin && u == fl) col[q] = src[native(b0)] * (kz / kmag);
          continue;
        }
        const double frac = u - fl;
        col[q] = ((1.0 - frac) * src[native(b0)] + frac * src[native(b0 + 1)]) * (kz / kmag);
      }
    }
  }
}

}  // namespace

FKGrid stolt_remap(const FKGrid& spectrum, double dt, double c) {
  FKGrid out = spectrum;
  stolt_in_place(out, dt, c);
  return out;
}

VolumeImage fk_migrate(const EchoCube& cube, double c, const FkOptions& opts) {
  if (cube.pulse.nt < 2) throw InvalidArgument("fk_migrate needs nt >= 2");
  FKGrid k = fk_spectrum(cube, opts.time_padding, opts.spatial_padding);
  stolt_in_place(k, cube.pulse.dt, c);
  const std::array<std::size_t, 3> dims{k.kx.n, k.ky.n, k.third.n};
  const std::size_t nx = cube.aperture.nx, ny = cube.aperture.ny, nt = cube.pulse.nt;
  // Only the unpadded corner of the image is kept.
  transform_subset(k.values, dims, 0, Direction::Inverse, {0, dims[1], dims[2]});
  transform_subset(k.values, dims, 1, Direction::Inverse, {nx, 0, dims[2]});
  transform_subset(k.values, dims, 2, Direction::Inverse, {nx, ny, 0});

  VolumeImage img;
  img.grid = migration_volume(cube, c);
  const double lambda_min = c / (cube.pulse.fc + cube.pulse.bandwidth / 2.0);
  img.aperture_undersampled =
      cube.aperture.dx > lambda_min / 2.0 || cube.aperture.dy > lambda_min / 2.0;
  img.values.resize(nx * ny * nt);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t q = 0; q < nt; ++q)
        img.values[(i * ny + j) * nt + q] = std::abs(k.values[(i * dims[1] + j) * dims[2] + q]);
  return img;
}

VolumeImage diffraction_stack(const EchoCube& cube, const VolumeSpec& volume, double c) {
  cube.validate();
  volume.validate();
  const auto& ap = cube.aperture;
  const auto& pulse = cube.pulse;
  const std::size_t nt = pulse.nt;

  VolumeImage img;
  img.grid = volume;
  img.values.assign(volume.voxels(), 0.0);

  const double inv_dt = 1.0 / pulse.dt;
  for (std::size_t vi = 0; vi < volume.nx; ++vi) {
    const double x = volume.x(vi);
    for (std::size_t vj = 0; vj < volume.ny; ++vj) {
      const double y = volume.y(vj);
      for (std::size_t vk = 0; vk < volume.nz; ++vk) {
        const double z = volume.z(vk);
        cplx acc{};
        for (std::size_t i = 0; i < ap.nx; ++i) {
          const double ddx = x - ap.x(i);
          for (std::size_t j = 0; j < ap.ny; ++j) {
            const double ddy = y - ap.y(j);
            const double r = std::sqrt(ddx * ddx + ddy * ddy + z * z);
            const double tau = 2.0 * r / c;
            const double pos = tau * inv_dt;
            const double fl = std::floor(pos);
            if (fl < 0.0 || fl + 1.0 > static_cast<double>(nt - 1)) continue;
            const auto k0 = static_cast<std::size_t>(fl);
            const double frac = pos - fl;
            const cplx* tr = cube.data.data() + (i * ap.ny + j) * nt;
            const cplx s = (1.0 - frac) * tr[k0] + frac * tr[k0 + 1];
            acc += s * std::polar(1.0, kTwoPi * pulse.fc * tau);
          }
        }
        img.values[(vi * volume.ny + vj) * volume.nz + vk] = std::abs(acc);
      }
    }
  }
  return img;
}

// ---------------------------------------------------------------------------
// Quasi-wavefront extraction
// ---------------------------------------------------------------------------

namespace {

// Index of the first local maximum above `floor_level` whose prominence is at
// least `min_prom`, or 0 if there is none. Same peak semantics as find_peaks.
std::size_t first_prominent_peak(const double* x, std::size_t n, double min_prom, double floor_level) {
  if (n < 3) return 0;
  const double lowest = *std::min_element(x, x + n);
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(x[i - 1] < x[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && x[j + 1] == x[i]) ++j;
    if (j + 1 < n && x[j + 1] < x[i] && x[i] > floor_level && x[i] - lowest >= min_prom) {
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
      if (x[i] - std::max(left_min, right_min) >= min_prom) return i;
    }
    i = j + 1;
  }
  return 0;
}

}  // namespace

QuasiWavefront extract_quasi_wavefront(const EchoCube& cube, double threshold_rel,
                                       const WavefrontOptions& opts, double c) {
  cube.validate();
  if (!(threshold_rel > 0.0 && threshold_rel < 1.0))
    throw InvalidArgument("threshold_rel must lie in (0, 1)");
  const auto& pulse = cube.pulse;
  const std::size_t nt = pulse.nt;
  const std::size_t ne = cube.aperture.elements();

  // Centred real matched filter: the envelope itself, symmetric about 0.
  const auto half = static_cast<long>(std::floor(pulse.half_support() / pulse.dt));
  std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
  for (long m = -half; m <= half; ++m)
    kernel[static_cast<std::size_t>(m + half)] = pulse.envelope_at(static_cast<double>(m) * pulse.dt);

  std::vector<double> env(ne * nt, 0.0);
  const std::size_t taps = kernel.size();
  std::vector<double> re(nt + taps - 1, 0.0), im(nt + taps - 1, 0.0);  // zero-padded by `half`
  for (std::size_t e = 0; e < ne; ++e) {
    const cplx* tr = cube.data.data() + e * nt;
    for (std::size_t n = 0; n < nt; ++n) {
      re[n + static_cast<std::size_t>(half)] = tr[n].real();
      im[n + static_cast<std::size_t>(half)] = tr[n].imag();
    }
    double* out = env.data() + e * nt;
    for (std::size_t n = 0; n < nt; ++n) {
      double ar = 0.0, ai = 0.0;
      for (std::size_t m = 0; m < taps; ++m) {
        ar += re[n + m] * kernel[m];
        ai += im[n + m] * kernel[m];
      }
      out[n] = std::sqrt(ar * ar + ai * ai);
    }
  }

  const double global_max = *std::max_element(env.begin(), env.end());
  std::vector<double> sorted(env);
  const auto mid = sorted.begin() + static_cast<long>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  const double floor_level = opts.noise_floor_factor * *mid;

  QuasiWavefront wf = QuasiWavefront::empty(cube.aperture);
  if (!(global_max > 0.0)) return wf;
  const double min_prom = threshold_rel * global_max;

  for (std::size_t e = 0; e < ne; ++e) {
    const double* x = env.data() + e * nt;
    const std::size_t k = first_prominent_peak(x, nt, min_prom, floor_level);
    if (k == 0) continue;
    double tau = static_cast<double>(k) * pulse.dt;
    const double ym = x[k - 1], y0 = x[k], yp = x[k + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) tau += 0.5 * (ym - yp) / denom * pulse.dt;
    wf.z[e] = c * tau / 2.0;
    wf.mask[e] = 1;
  }
  return wf;
}

// ---------------------------------------------------------------------------
// Gradients
// ---------------------------------------------------------------------------

namespace {

// Derivative along one lattice direction at sample p, using valid
// neighbours only. Returns false when fewer than two samples are usable.
bool directional_derivative(const QuasiWavefront& wf, long i, long j, long di, long dj, double h,
                            double& out) {
  const long nx = static_cast<long>(wf.grid.nx), ny = static_cast<long>(wf.grid.ny);
  auto ok = [&](long a, long b) {
    return a >= 0 && b >= 0 && a < nx && b < ny &&
           wf.mask[static_cast<std::size_t>(a * ny + b)] != 0;
  };
  auto z = [&](long a, long b) { return wf.z[static_cast<std::size_t>(a * ny + b)]; };
  const bool fwd = ok(i + di, j + dj), bwd = ok(i - di, j - dj);
  if (fwd && bwd) {
    out = (z(i + di, j + dj) - z(i - di, j - dj)) / (2.0 * h);
    return true;
  }
  if (fwd) {
    if (ok(i + 2 * di, j + 2 * dj))
      out = (-3.0 * z(i, j) + 4.0 * z(i + di, j + dj) - z(i + 2 * di, j + 2 * dj)) / (2.0 * h);
    else
      out = (z(i + di, j + dj) - z(i, j)) / h;
    return true;
  }
  if (bwd) {
    if (ok(i - 2 * di, j - 2 * dj))
      out = (3.0 * z(i, j) - 4.0 * z(i - di, j - dj) + z(i - 2 * di, j - 2 * dj)) / (2.0 * h);
    else
      out = (z(i, j) - z(i - di, j - dj)) / h;
    return true;
  }
  return false;
}

}  // namespace

GradientField raw_gradients(const QuasiWavefront& wf) {
  GradientField g;
  g.nx = wf.grid.nx;
  g.ny = wf.grid.ny;
  g.dzdx.assign(wf.z.size(), 0.0);
  g.dzdy.assign(wf.z.size(), 0.0);
  g.mask.assign(wf.z.size(), 0);
  for (std::size_t i = 0; i < g.nx; ++i) {
    for (std::size_t j = 0; j < g.ny; ++j) {
      const std::size_t idx = wf.index(i, j);
      if (!wf.mask[idx]) continue;
      double gx = 0.0, gy = 0.0;
      const auto li = static_cast<long>(i), lj = static_cast<long>(j);
      if (directional_derivative(wf, li, lj, 1, 0, wf.grid.dx, gx) &&
          directional_derivative(wf, li, lj, 0, 1, wf.grid.dy, gy)) {
        g.dzdx[idx] = gx;
        g.dzdy[idx] = gy;
        g.mask[idx] = 1;
      }
    }
  }
  return g;
}

GradientField rpm_smooth_gradients(const QuasiWavefront& wf, double sigma_xy, double sigma_z) {
  if (!(sigma_xy > 0.0) || !(sigma_z > 0.0)) throw InvalidArgument("sigma_xy and sigma_z must be > 0");
  const GradientField raw = raw_gradients(wf);
  GradientField out = raw;

  const long nx = static_cast<long>(raw.nx), ny = static_cast<long>(raw.ny);
  const long ri = static_cast<long>(std::ceil(3.0 * sigma_xy / wf.grid.dx));
  const long rj = static_cast<long>(std::ceil(3.0 * sigma_xy / wf.grid.dy));
  const double inv_xy = 1.0 / (2.0 * sigma_xy * sigma_xy);
  const double inv_z = 1.0 / (2.0 * sigma_z * sigma_z);
  auto flat = [ny](long a, long b) { return static_cast<std::size_t>(a * ny + b); };
  auto usable = [&](long a, long b) { return a >= 0 && b >= 0 && a < nx && b < ny && raw.mask[flat(a, b)]; };

  for (long i = 0; i < nx; ++i) {
    for (long j = 0; j < ny; ++j) {
      const std::size_t p = flat(i, j);
      if (!raw.mask[p]) continue;
      const double z0 = wf.z[p];
      double sw = 0.0, sx = 0.0, sy = 0.0;
      for (long a = -ri; a <= ri; ++a) {
        for (long b = -rj; b <= rj; ++b) {
          if (!usable(i + a, j + b) || !usable(i - a, j - b)) continue;
          const std::size_t q = flat(i + a, j + b);
          const double ddx = static_cast<double>(a) * wf.grid.dx;
          const double ddy = static_cast<double>(b) * wf.grid.dy;
          const double dz = wf.z[q] - z0;
          const double w = std::exp(-(ddx * ddx + ddy * ddy) * inv_xy - dz * dz * inv_z);
          sw += w;
          sx += w * raw.dzdx[q];
          sy += w * raw.dzdy[q];
        }
      }
      double gx = sx / sw, gy = sy / sw;
      const double n2 = gx * gx + gy * gy;
      if (n2 > 1.0) {
        const double s = 1.0 / std::sqrt(n2);
        gx *= s;
        gy *= s;
      }
      out.dzdx[p] = gx;
      out.dzdy[p] = gy;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inverse transform
// ---------------------------------------------------------------------------

IbstResult ibst(const QuasiWavefront& wf, const GradientField& g) {
  if (g.nx != wf.grid.nx || g.ny != wf.grid.ny || g.dzdx.size() != wf.z.size())
    throw InvalidArgument("gradient field does not match the wavefront lattice");
  IbstResult res;
  for (std::size_t i = 0; i < wf.grid.nx; ++i) {
    for (std::size_t j = 0; j < wf.grid.ny; ++j) {
      const std::size_t p = wf.index(i, j);
      if (!wf.mask[p] || !g.mask[p]) continue;
      const double Z = wf.z[p], gx = g.dzdx[p], gy = g.dzdy[p];
      const double radicand = 1.0 - gx * gx - gy * gy;
      if (radicand < 0.0) {
        ++res.dropped;
        continue;
      }
      CloudPoint pt;
      pt.x = wf.grid.x(i) - Z * gx;
      pt.y = wf.grid.y(j) - Z * gy;
      pt.z = Z * std::sqrt(radicand);
      pt.confidence = std::clamp(radicand, 0.0, 1.0);
      res.cloud.points.push_back(pt);
    }
  }
  return res;
}

}  // namespace uwb
