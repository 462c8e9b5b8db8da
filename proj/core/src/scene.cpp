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

#include "uwbsense/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "uwbsense/errors.hpp"

namespace uwb {

namespace {

bool finite(double v) { return std::isfinite(v); }

std::string describe(const Vec3& p) {
  std::ostringstream os;
  os << "(" << p.x << ", " << p.y << ", " << p.z << ")";
  return os.str();
}

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Nearest-cell gather keeping the minimum Z. The sample's Z is carried to
/// the cell centre with the local wavefront slope (dZ/dX = zx / sqrt(1+|grad z|^2)).
class WavefrontAccumulator {
 public:
  explicit WavefrontAccumulator(const ApertureGrid& grid)
      : grid_(grid), z_(grid.elements(), kInf) {}

  void add(double X, double Y, double Z, double gX, double gY) {
    // Offset by one half so truncation rounds to the nearest cell.
    const double fi = (X - grid_.x0) / grid_.dx + 0.5;
    const double fj = (Y - grid_.y0) / grid_.dy + 0.5;
    if (!(fi > 0.0) || !(fj > 0.0) || fi >= static_cast<double>(grid_.nx) ||
        fj >= static_cast<double>(grid_.ny))
      return;
    const auto i = static_cast<std::size_t>(fi);
    const auto j = static_cast<std::size_t>(fj);
    const double zc = Z + gX * (grid_.x(i) - X) + gY * (grid_.y(j) - Y);
    double& cell = z_[i * grid_.ny + j];
    if (zc < cell) cell = zc;
  }

  QuasiWavefront finish() const {
    QuasiWavefront wf = QuasiWavefront::empty(grid_);
    for (std::size_t k = 0; k < z_.size(); ++k) {
      if (z_[k] < kInf && z_[k] > 0.0) {
        wf.z[k] = z_[k];
        wf.mask[k] = 1;
      }
    }
    return wf;
  }

 private:
  const ApertureGrid& grid_;
  std::vector<double> z_;
};

void merge_first_arrival(QuasiWavefront& into, const QuasiWavefront& other) {
  for (std::size_t k = 0; k < into.z.size(); ++k) {
    if (!other.mask[k]) continue;
    if (!into.mask[k] || other.z[k] < into.z[k]) {
      into.z[k] = other.z[k];
      into.mask[k] = 1;
    }
  }
}

QuasiWavefront bst_plane(const PlaneSurface& s, const ApertureGrid& grid) {
  QuasiWavefront wf = QuasiWavefront::empty(grid);
  std::fill(wf.z.begin(), wf.z.end(), s.z0);
  std::fill(wf.mask.begin(), wf.mask.end(), std::uint8_t{1});
  return wf;
}

QuasiWavefront bst_sphere(const SphereSurface& s, const ApertureGrid& grid) {
  // The specular point lies on the line from the element to the centre.
  QuasiWavefront wf = QuasiWavefront::empty(grid);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    for (std::size_t j = 0; j < grid.ny; ++j) {
      const double ddx = grid.x(i) - s.center.x;
      const double ddy = grid.y(j) - s.center.y;
      const double d = std::sqrt(ddx * ddx + ddy * ddy + s.center.z * s.center.z);
      wf.z[wf.index(i, j)] = d - s.radius;
      wf.mask[wf.index(i, j)] = 1;
    }
  }
  return wf;
}

QuasiWavefront bst_height_map(const HeightMapSurface& hm, const ApertureGrid& grid,
                              const BstOptions& opts) {
  const std::size_t nx = hm.nx, ny = hm.ny;
  std::vector<double> gx(nx * ny), gy(nx * ny);
  double stretch = 1.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t il = i > 0 ? i - 1 : i, ih = i + 1 < nx ? i + 1 : i;
      const std::size_t jl = j > 0 ? j - 1 : j, jh = j + 1 < ny ? j + 1 : j;
      const double zx = (hm.at(ih, j) - hm.at(il, j)) / (static_cast<double>(ih - il) * hm.dx);
      const double zy = (hm.at(i, jh) - hm.at(i, jl)) / (static_cast<double>(jh - jl) * hm.dy);
      gx[i * ny + j] = zx;
      gy[i * ny + j] = zy;
      if (i > 0 && i + 1 < nx && j > 0 && j + 1 < ny) {
        const double zxx = (hm.at(i + 1, j) - 2.0 * hm.at(i, j) + hm.at(i - 1, j)) / (hm.dx * hm.dx);
        const double zyy = (hm.at(i, j + 1) - 2.0 * hm.at(i, j) + hm.at(i, j - 1)) / (hm.dy * hm.dy);
        // dX/dx = 1 + zx^2 + z zxx bounds how far neighbouring samples spread.
        stretch = std::max(stretch, 1.0 + zx * zx + zy * zy +
                                        hm.at(i, j) * (std::abs(zxx) + std::abs(zyy)));
      }
    }
  }
  const double cell = std::min(grid.dx, grid.dy);
  const double ratio = std::max(hm.dx, hm.dy) / cell;
  const auto sub = static_cast<std::size_t>(
      std::clamp(std::ceil(static_cast<double>(opts.oversample) * stretch * ratio), 1.0, 64.0));

  WavefrontAccumulator acc(grid);
  const std::size_t ci = nx > 1 ? nx - 1 : 1, cj = ny > 1 ? ny - 1 : 1;
  const double inv_sub = 1.0 / static_cast<double>(sub);
  for (std::size_t i = 0; i < ci; ++i) {
    const std::size_t i1 = std::min(i + 1, nx - 1);
    for (std::size_t j = 0; j < cj; ++j) {
      const std::size_t j1 = std::min(j + 1, ny - 1);
      const std::size_t su = (i + 1 == ci) ? sub + 1 : sub;
      const std::size_t sv = (j + 1 == cj) ? sub + 1 : sub;
      const std::size_t n00 = i * ny + j, n10 = i1 * ny + j, n01 = i * ny + j1, n11 = i1 * ny + j1;
      for (std::size_t a = 0; a < su; ++a) {
        const double u = static_cast<double>(a) * inv_sub;
        const double x = hm.x0 + (static_cast<double>(i) + u) * hm.dx;
        // Edge values along the u line, then linear in v.
        const double z0 = (1 - u) * hm.z[n00] + u * hm.z[n10], z1 = (1 - u) * hm.z[n01] + u * hm.z[n11];
        const double x0 = (1 - u) * gx[n00] + u * gx[n10], x1 = (1 - u) * gx[n01] + u * gx[n11];
        const double y0 = (1 - u) * gy[n00] + u * gy[n10], y1 = (1 - u) * gy[n01] + u * gy[n11];
        for (std::size_t b = 0; b < sv; ++b) {
          const double v = static_cast<double>(b) * inv_sub;
          const double y = hm.y0 + (static_cast<double>(j) + v) * hm.dy;
          const double z = (1 - v) * z0 + v * z1;
          const double zx = (1 - v) * x0 + v * x1;
          const double zy = (1 - v) * y0 + v * y1;
          const double norm = std::sqrt(1.0 + zx * zx + zy * zy);
          acc.add(x + z * zx, y + z * zy, z * norm, zx / norm, zy / norm);
        }
      }
    }
  }
  return acc.finish();
}

}  // namespace

// ---------------------------------------------------------------------------

ApertureGrid ApertureGrid::centered(std::size_t nx, std::size_t ny, double dx, double dy) {
  ApertureGrid g;
  g.nx = nx;
  g.ny = ny;
  g.dx = dx;
  g.dy = dy;
  g.x0 = -0.5 * static_cast<double>(nx - 1) * dx;
  g.y0 = -0.5 * static_cast<double>(ny - 1) * dy;
  return g;
}

void ApertureGrid::validate() const {
  if (nx < 2 || ny < 2) throw InvalidArgument("aperture needs nx, ny >= 2");
  if (!(dx > 0.0) || !(dy > 0.0)) throw InvalidArgument("aperture spacing must be > 0");
  if (!finite(x0) || !finite(y0)) throw InvalidArgument("aperture origin must be finite");
}

Envelope parse_envelope(std::string_view name) {
  if (name == "raised_cosine") return Envelope::RaisedCosine;
  if (name == "gaussian") return Envelope::Gaussian;
  throw InvalidArgument("unknown envelope '" + std::string(name) + "'");
}

std::string_view envelope_name(Envelope e) {
  return e == Envelope::Gaussian ? "gaussian" : "raised_cosine";
}

double PulseSpec::envelope_at(double t) const {
  const double tb = t * bandwidth;
  if (envelope == Envelope::Gaussian) return std::exp(-4.0 * std::log(2.0) * tb * tb);
  if (std::abs(tb) >= 1.0) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * tb));
}

double PulseSpec::half_support() const {
  return envelope == Envelope::Gaussian ? 2.25 / bandwidth : 1.0 / bandwidth;
}

void PulseSpec::validate() const {
  if (!(fc > 0.0)) throw InvalidArgument("pulse fc must be > 0");
  if (!(bandwidth > 0.0) || !(bandwidth < 2.0 * fc))
    throw InvalidArgument("pulse bandwidth must satisfy 0 < B < 2 fc");
  if (!(dt > 0.0) || !(dt < 1.0 / bandwidth))
    throw InvalidArgument("pulse dt must satisfy 0 < dt < 1/B for complex baseband");
  if (nt < 1) throw InvalidArgument("pulse nt must be >= 1");
}

bool HeightMapSurface::sample(double x, double y, double& out) const {
  if (nx < 2 || ny < 2) return false;
  const double fx = (x - x0) / dx, fy = (y - y0) / dy;
  if (fx < 0.0 || fy < 0.0 || fx > static_cast<double>(nx - 1) || fy > static_cast<double>(ny - 1))
    return false;
  const auto i = std::min(static_cast<std::size_t>(fx), nx - 2);
  const auto j = std::min(static_cast<std::size_t>(fy), ny - 2);
  const double u = fx - static_cast<double>(i), v = fy - static_cast<double>(j);
  out = (1 - u) * (1 - v) * at(i, j) + u * (1 - v) * at(i + 1, j) + (1 - u) * v * at(i, j + 1) +
        u * v * at(i + 1, j + 1);
  return true;
}

void Scene::validate() const {
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    if (!finite(p.position.x) || !finite(p.position.y) || !finite(p.position.z) ||
        !finite(p.reflectivity.real()) || !finite(p.reflectivity.imag()))
      throw InvalidArgument("point " + std::to_string(k) + " has non-finite fields");
    if (!(p.position.z > 0.0))
      throw InvalidArgument("point " + std::to_string(k) + " must lie in front of the aperture (z > 0)");
  }
  for (std::size_t k = 0; k < surfaces.size(); ++k) {
    const std::string tag = "surface " + std::to_string(k);
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if (!finite(s.reflectivity)) throw InvalidArgument(tag + " reflectivity must be finite");
          if constexpr (std::is_same_v<T, PlaneSurface>) {
            if (!(s.z0 > 0.0)) throw InvalidArgument(tag + ": plane z0 must be > 0");
          } else if constexpr (std::is_same_v<T, SphereSurface>) {
            if (!(s.radius >= 0.0)) throw InvalidArgument(tag + ": sphere radius must be >= 0");
            if (!(s.center.z - s.radius > 0.0))
              throw InvalidArgument(tag + ": sphere must lie in front of the aperture");
          } else if constexpr (std::is_same_v<T, EllipsoidSurface>) {
            if (!(s.semi_axes.x > 0.0 && s.semi_axes.y > 0.0 && s.semi_axes.z > 0.0))
              throw InvalidArgument(tag + ": ellipsoid semi-axes must be > 0");
            if (!(s.center.z - s.semi_axes.z > 0.0))
              throw InvalidArgument(tag + ": ellipsoid must lie in front of the aperture");
          } else {
            if (s.nx < 2 || s.ny < 2 || s.z.size() != s.nx * s.ny)
              throw InvalidArgument(tag + ": height map shape mismatch");
            if (!(s.dx > 0.0) || !(s.dy > 0.0))
              throw InvalidArgument(tag + ": height map spacing must be > 0");
            for (double v : s.z)
              if (!(v > 0.0) || !finite(v))
                throw InvalidArgument(tag + ": height map values must be finite and > 0");
          }
        },
        surfaces[k]);
  }
}

std::size_t QuasiWavefront::valid_count() const {
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](auto m) { return m != 0; }));
}

QuasiWavefront QuasiWavefront::empty(const ApertureGrid& grid) {
  QuasiWavefront wf;
  wf.grid = grid;
  wf.z.assign(grid.elements(), 0.0);
  wf.mask.assign(grid.elements(), 0);
  return wf;
}

void EchoCube::validate() const {
  aperture.validate();
  pulse.validate();
  if (data.size() != aperture.elements() * pulse.nt)
    throw InvalidArgument("echo cube dimensions inconsistent with aperture and pulse");
}

// ---------------------------------------------------------------------------
// Boundary scattering transform
// ---------------------------------------------------------------------------

QuasiWavefront bst_forward_sampled(const EllipsoidSurface& s, const ApertureGrid& grid,
                                   const BstOptions& opts) {
  // Parametrize the aperture-facing half by the outward normal
  // n = (q, r, -1) / sqrt(1 + q^2 + r^2): for a sphere X - cx = cz q exactly,
  // so a uniform (q, r) lattice lands uniformly on the aperture.
  const double a = s.semi_axes.x, b = s.semi_axes.y, c = s.semi_axes.z;
  const double cz = s.center.z;
  const double lo = cz - c;  // |X - cx| >= |q| (cz - c)
  const double hi = cz + (a * a + b * b) / c;
  const double margin = 2.0 * std::max(grid.dx, grid.dy);
  const double xmin = grid.x0 - margin - s.center.x;
  const double xmax = grid.x(grid.nx - 1) + margin - s.center.x;
  const double ymin = grid.y0 - margin - s.center.y;
  const double ymax = grid.y(grid.ny - 1) + margin - s.center.y;
  const double q0 = std::min(xmin / lo, xmin / hi), q1 = std::max(xmax / lo, xmax / hi);
  const double r0 = std::min(ymin / lo, ymin / hi), r1 = std::max(ymax / lo, ymax / hi);
  const double step =
      std::min(grid.dx, grid.dy) / (static_cast<double>(std::max<std::size_t>(opts.oversample, 1)) * hi);
  const auto nq = static_cast<std::size_t>(std::ceil((q1 - q0) / step)) + 1;
  const auto nr = static_cast<std::size_t>(std::ceil((r1 - r0) / step)) + 1;

  WavefrontAccumulator acc(grid);
  for (std::size_t iq = 0; iq < nq; ++iq) {
    const double q = q0 + static_cast<double>(iq) * step;
    for (std::size_t ir = 0; ir < nr; ++ir) {
      const double r = r0 + static_cast<double>(ir) * step;
      const double big_s = std::sqrt(a * a * q * q + b * b * r * r + c * c);
      const double px = s.center.x + a * a * q / big_s;
      const double py = s.center.y + b * b * r / big_s;
      const double pz = cz - c * c / big_s;
      const double g = std::sqrt(1.0 + q * q + r * r);
      // Surface slopes here are zx = q, zy = r.
      const double Z = pz * g;
      acc.add(px + pz * q, py + pz * r, Z, q / g, r / g);
    }
  }
  return acc.finish();
}

QuasiWavefront bst_forward(const Surface& surface, const ApertureGrid& grid, const BstOptions& opts) {
  grid.validate();
  return std::visit(
      [&](const auto& s) -> QuasiWavefront {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlaneSurface>)
          return bst_plane(s, grid);
        else if constexpr (std::is_same_v<T, SphereSurface>)
          return bst_sphere(s, grid);
        else if constexpr (std::is_same_v<T, EllipsoidSurface>)
          return bst_forward_sampled(s, grid, opts);
        else
          return bst_height_map(s, grid, opts);
      },
      surface);
}

QuasiWavefront bst_forward(const Scene& scene, const ApertureGrid& grid, const BstOptions& opts) {
  grid.validate();
  scene.validate();
  QuasiWavefront wf = QuasiWavefront::empty(grid);
  for (const auto& s : scene.surfaces) merge_first_arrival(wf, bst_forward(s, grid, opts));
  return wf;
}

// ---------------------------------------------------------------------------
// Echo synthesis
// ---------------------------------------------------------------------------

namespace {

void add_return(std::span<cplx> trace, const PulseSpec& pulse, double delay, cplx amplitude) {
  const double hs = pulse.half_support();
  const double kmin = std::ceil((delay - hs) / pulse.dt);
  const double kmax = std::floor((delay + hs) / pulse.dt);
  const auto k0 = static_cast<long>(std::max(0.0, kmin));
  const auto k1 = static_cast<long>(std::min(static_cast<double>(pulse.nt) - 1.0, kmax));
  const cplx phase = std::polar(1.0, -kTwoPi * pulse.fc * delay);
  const cplx a = amplitude * phase;
  for (long k = k0; k <= k1; ++k) {
    const double t = static_cast<double>(k) * pulse.dt;
    trace[static_cast<std::size_t>(k)] += a * pulse.envelope_at(t - delay);
  }
}

}  // namespace

EchoCube synth_echo_cube(const Scene& scene, const ApertureGrid& grid, const PulseSpec& pulse,
                         double noise_std, std::uint64_t seed) {
  grid.validate();
  pulse.validate();
  scene.validate();
  if (!(noise_std >= 0.0)) throw InvalidArgument("noise_std must be >= 0");

  const double window = static_cast<double>(pulse.nt - 1) * pulse.dt;
  const double hs = pulse.half_support();

  std::vector<QuasiWavefront> fronts;
  fronts.reserve(scene.surfaces.size());
  for (std::size_t s = 0; s < scene.surfaces.size(); ++s) {
    fronts.push_back(bst_forward(scene.surfaces[s], grid));
    double zmax = 0.0;
    for (std::size_t k = 0; k < fronts.back().z.size(); ++k)
      if (fronts.back().mask[k]) zmax = std::max(zmax, fronts.back().z[k]);
    if (2.0 * zmax / kSpeedOfLight + hs > window)
      throw InvalidArgument("range window overflow: surface " + std::to_string(s) +
                            " reaches " + std::to_string(zmax) + " m");
  }
  for (std::size_t p = 0; p < scene.points.size(); ++p) {
    const auto& pos = scene.points[p].position;
    double rmax = 0.0;
    for (double ex : {grid.x(0), grid.x(grid.nx - 1)})
      for (double ey : {grid.y(0), grid.y(grid.ny - 1)})
        rmax = std::max(rmax, std::hypot(ex - pos.x, ey - pos.y, pos.z));
    if (2.0 * rmax / kSpeedOfLight + hs > window)
      throw InvalidArgument("range window overflow: point " + std::to_string(p) + " at " +
                            describe(pos));
  }

  EchoCube cube;
  cube.aperture = grid;
  cube.pulse = pulse;
  cube.data.assign(grid.elements() * pulse.nt, cplx{});

  for (std::size_t i = 0; i < grid.nx; ++i) {
    for (std::size_t j = 0; j < grid.ny; ++j) {
      std::span<cplx> trace(cube.data.data() + cube.index(i, j, 0), pulse.nt);
      const double ex = grid.x(i), ey = grid.y(j);
      for (const auto& p : scene.points) {
        const double r = std::hypot(ex - p.position.x, ey - p.position.y, p.position.z);
        add_return(trace, pulse, 2.0 * r / kSpeedOfLight, p.reflectivity);
      }
      for (std::size_t s = 0; s < fronts.size(); ++s) {
        const auto& wf = fronts[s];
        const std::size_t idx = wf.index(i, j);
        if (!wf.mask[idx]) continue;
        const double refl = std::visit([](const auto& v) { return v.reflectivity; }, scene.surfaces[s]);
        add_return(trace, pulse, 2.0 * wf.z[idx] / kSpeedOfLight, cplx{refl, 0.0});
      }
    }
  }

  if (noise_std > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise_std / std::sqrt(2.0));
    for (auto& v : cube.data) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v += cplx{re, im};
    }
  }
  return cube;
}

// ---------------------------------------------------------------------------
// Cavity codes
// ---------------------------------------------------------------------------

double max_pairwise_correlation(const PortCodeBook& book) {
  const std::size_t n = book.pairs();
  if (n < 2) return 0.0;
  const std::size_t m = next_power_of_two(2 * book.length - 1);
  const FftPlan plan(m);
  std::vector<std::vector<cplx>> spectra(n, std::vector<cplx>(m, cplx{}));
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double e = 0.0;
    for (std::size_t k = 0; k < book.length; ++k) {
      spectra[i][k] = book.responses[i][k];
      e += book.responses[i][k] * book.responses[i][k];
    }
    norms[i] = std::sqrt(e);
    plan.forward(spectra[i]);
  }
  double worst = 0.0;
  std::vector<cplx> buf(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < m; ++k) buf[k] = spectra[i][k] * std::conj(spectra[j][k]);
      plan.inverse(buf);
      double peak = 0.0;
      for (const auto& v : buf) peak = std::max(peak, std::abs(v.real()));
      worst = std::max(worst, peak / (norms[i] * norms[j]));
    }
  }
  return worst;
}

PortCodeBook gen_port_codebook(std::size_t n_pairs, std::size_t length, double dt, std::uint64_t seed) {
  if (n_pairs < 1) throw InvalidArgument("codebook needs at least one port pair");
  if (length < 64 * n_pairs) throw InvalidArgument("codebook length must be >= 64 * n_pairs");
  if (!(dt > 0.0)) throw InvalidArgument("codebook dt must be > 0");

  constexpr double kBound = 0.3;
  constexpr int kAttempts = 100;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  PortCodeBook book;
  book.dt = dt;
  book.length = length;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    book.responses.assign(n_pairs, std::vector<double>(length));
    for (auto& r : book.responses) {
      double e = 0.0;
      for (auto& v : r) {
        v = gauss(rng);
        e += v * v;
      }
      const double s = 1.0 / std::sqrt(e);
      for (auto& v : r) v *= s;
    }
    if (max_pairwise_correlation(book) < kBound) return book;
  }
  throw NumericalError("codebook correlation bound unmet");
}

ComplexSeries cavity_encode(std::span<const ComplexSeries> channels, const PortCodeBook& book) {
  if (channels.size() != book.pairs())
    throw InvalidArgument("channel count " + std::to_string(channels.size()) +
                          " does not match port-pair count " + std::to_string(book.pairs()));
  if (channels.empty()) throw InvalidArgument("no channels to encode");
  const std::size_t len = channels.front().size();
  const double dt = channels.front().dt;
  for (const auto& ch : channels) {
    if (ch.size() != len) throw InvalidArgument("channels must share a common length");
    if (std::abs(ch.dt - dt) > 1e-9 * dt) throw InvalidArgument("channels must share dt");
  }
  if (std::abs(book.dt - dt) > 1e-9 * dt) throw InvalidArgument("channel dt differs from codebook dt");
  if (len == 0) throw InvalidArgument("empty channel");

  ComplexSeries out;
  out.dt = dt;
  out.t0 = channels.front().t0;
  out.samples.assign(len + book.length - 1, cplx{});
  for (std::size_t i = 0; i < channels.size(); ++i) {
    std::vector<cplx> code(book.responses[i].begin(), book.responses[i].end());
    const auto y = convolve(channels[i].samples, code);
    for (std::size_t k = 0; k < y.size(); ++k) out.samples[k] += y[k];
  }
  return out;
}

}  // namespace uwb
