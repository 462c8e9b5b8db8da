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

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "uwbsense/signal.hpp"

namespace uwb {

inline constexpr double kSpeedOfLight = 299792458.0;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

/// Planar monostatic array in the z = 0 plane. Element (i, j) sits at
/// (x0 + i*dx, y0 + j*dy, 0).
struct ApertureGrid {
  std::size_t nx = 2, ny = 2;
  double dx = 1.0, dy = 1.0;
  double x0 = 0.0, y0 = 0.0;

  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double y(std::size_t j) const { return y0 + static_cast<double>(j) * dy; }
  std::size_t elements() const { return nx * ny; }

  /// Grid symmetric about the origin.
  static ApertureGrid centered(std::size_t nx, std::size_t ny, double dx, double dy);
  void validate() const;
};

enum class Envelope { RaisedCosine, Gaussian };

Envelope parse_envelope(std::string_view name);
std::string_view envelope_name(Envelope e);

/// Baseband pulse description. The carrier fc only enters through phase
/// terms; samples are complex baseband at interval dt.
struct PulseSpec {
  double fc = 26.4e9;
  double bandwidth = 2.0e9;
  double dt = 1.25e-10;
  std::size_t nt = 256;
  Envelope envelope = Envelope::RaisedCosine;

  /// Raised cosine of total width 2/bandwidth (FWHM 1/bandwidth), or a
  /// Gaussian with the same FWHM.
  double envelope_at(double t) const;
  /// Envelope is treated as zero beyond this offset.
  double half_support() const;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Scene description
// ---------------------------------------------------------------------------

struct PlaneSurface {
  double z0 = 1.0;
  double reflectivity = 1.0;
};

struct SphereSurface {
  Vec3 center;
  double radius = 0.1;
  double reflectivity = 1.0;
};

struct EllipsoidSurface {
  Vec3 center;
  Vec3 semi_axes{0.1, 0.1, 0.1};
  double reflectivity = 1.0;
};

/// z(x, y) sampled on its own regular grid: z[i * ny + j] at
/// (x0 + i*dx, y0 + j*dy).
struct HeightMapSurface {
  std::size_t nx = 0, ny = 0;
  double dx = 1.0, dy = 1.0;
  double x0 = 0.0, y0 = 0.0;
  std::vector<double> z;
  double reflectivity = 1.0;

  double at(std::size_t i, std::size_t j) const { return z[i * ny + j]; }
  /// Bilinear interpolation; false outside the grid.
  bool sample(double x, double y, double& out) const;
};

using Surface = std::variant<PlaneSurface, SphereSurface, EllipsoidSurface, HeightMapSurface>;

struct PointScatterer {
  Vec3 position;
  cplx reflectivity{1.0, 0.0};
};

struct Scene {
  std::vector<Surface> surfaces;
  std::vector<PointScatterer> points;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Quasi-wavefront and echo cube
// ---------------------------------------------------------------------------

/// One-way propagation distance Z(X, Y) of the first boundary echo seen at
/// each aperture element; mask[i * ny + j] != 0 where Z is defined.
struct QuasiWavefront {
  ApertureGrid grid;
  std::vector<double> z;
  std::vector<std::uint8_t> mask;

  std::size_t index(std::size_t i, std::size_t j) const { return i * grid.ny + j; }
  bool valid(std::size_t i, std::size_t j) const { return mask[index(i, j)] != 0; }
  std::size_t valid_count() const;

  static QuasiWavefront empty(const ApertureGrid& grid);
};

/// s(x, y, t): data[(i * ny + j) * nt + k] is element (i, j) at t = k * dt.
struct EchoCube {
  ApertureGrid aperture;
  PulseSpec pulse;
  std::vector<cplx> data;

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * aperture.ny + j) * pulse.nt + k;
  }
  std::span<const cplx> trace(std::size_t i, std::size_t j) const {
    return std::span<const cplx>(data).subspan(index(i, j, 0), pulse.nt);
  }
  void validate() const;
};

struct BstOptions {
  /// Surface samples per aperture cell along each axis for sampled patches.
  std::size_t oversample = 4;
};

/// Forward boundary scattering transform of every surface in the scene,
/// merged with the first-arrival (minimum Z) rule. Planes and spheres use
/// closed forms; ellipsoids and height maps are sampled, mapped through
///   X = x + z zx,  Y = y + z zy,  Z = z sqrt(1 + zx^2 + zy^2)
/// and gathered onto the grid.
QuasiWavefront bst_forward(const Scene& scene, const ApertureGrid& grid, const BstOptions& opts = {});
QuasiWavefront bst_forward(const Surface& surface, const ApertureGrid& grid, const BstOptions& opts = {});

/// Sampled path for an ellipsoid, exposed so the closed-form sphere can be
/// checked against dense sampling of the same transform.
QuasiWavefront bst_forward_sampled(const EllipsoidSurface& surface, const ApertureGrid& grid,
                                   const BstOptions& opts = {});

/// Geometric-optics echo synthesis: point scatterers contribute
/// reflectivity * env(t - 2R/c) * exp(-j 2 pi fc 2R/c); each surface adds one
/// specular return per element at t = 2Z/c. Complex white noise of total
/// standard deviation noise_std is added from a generator seeded by `seed`.
EchoCube synth_echo_cube(const Scene& scene, const ApertureGrid& grid, const PulseSpec& pulse,
                         double noise_std, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Cavity-coded MIMO
// ---------------------------------------------------------------------------

/// Per-port-pair real responses of a common length, unit energy each.
struct PortCodeBook {
  double dt = 1.0;
  std::size_t length = 0;
  std::vector<std::vector<double>> responses;

  std::size_t pairs() const { return responses.size(); }
};

/// Largest |normalized cross-correlation| over all lags and all pairs.
double max_pairwise_correlation(const PortCodeBook& book);

/// Seeded Gaussian responses, regenerated (up to 100 attempts) until every
/// pairwise correlation peak is below 0.3.
PortCodeBook gen_port_codebook(std::size_t n_pairs, std::size_t length, double dt, std::uint64_t seed);

/// Sum over channels of channel[i] (*) responses[i]; length = channel + L - 1.
ComplexSeries cavity_encode(std::span<const ComplexSeries> channels, const PortCodeBook& book);

}  // namespace uwb
