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
#include <cstddef>
#include <cstdint>
#include <vector>

#include "uwbsense/scene.hpp"
#include "uwbsense/signal.hpp"

namespace uwb {

/// Regular voxel lattice; voxel (i, j, k) centre is
/// (x0 + i dx, y0 + j dy, z0 + k dz).
struct VolumeSpec {
  std::size_t nx = 1, ny = 1, nz = 1;
  double dx = 1.0, dy = 1.0, dz = 1.0;
  double x0 = 0.0, y0 = 0.0, z0 = 0.0;

  std::size_t voxels() const { return nx * ny * nz; }
  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double y(std::size_t j) const { return y0 + static_cast<double>(j) * dy; }
  double z(std::size_t k) const { return z0 + static_cast<double>(k) * dz; }
  void validate() const;
};

/// Real magnitude image, values[(i * ny + j) * nz + k].
struct VolumeImage {
  VolumeSpec grid;
  std::vector<double> values;
  /// Set by fk_migrate when dx or dy exceeds half the shortest wavelength.
  bool aperture_undersampled = false;

  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return values[(i * grid.ny + j) * grid.nz + k];
  }
  /// Index triple of the largest voxel (first in storage order on ties).
  std::array<std::size_t, 3> argmax() const;
};

/// One axis of a wavenumber/frequency grid stored in DFT order: sample k
/// sits at centre + signed_bin(k, n) * step.
struct FkAxis {
  std::size_t n = 0;
  double step = 1.0;
  double centre = 0.0;

  double at(std::size_t k) const { return centre + static_cast<double>(signed_bin(k, n)) * step; }
};

/// Complex spectrum over (kx, ky, omega) or (kx, ky, kz), third axis fastest.
struct FKGrid {
  FkAxis kx, ky, third;
  std::vector<cplx> values;
};

struct FkOptions {
  /// Fast time is zero-padded to time_padding * nt before the transform,
  /// which refines the omega grid the Stolt interpolation works on.
  std::size_t time_padding = 4;
  /// The aperture is zero-padded to spatial_padding * (nx, ny) so migration
  /// tails do not wrap around the periodic spatial DFT.
  std::size_t spatial_padding = 4;
};

/// 3D DFT of s(x, y, t) with each axis zero-padded by the given factors.
/// The third axis is absolute angular frequency, omega = 2 pi (fc + f_baseband).
FKGrid fk_spectrum(const EchoCube& cube, std::size_t time_padding = 1, std::size_t spatial_padding = 1);

/// Stolt remap omega -> kz on the uniform axis implied by dz = c dt / 2,
/// linear interpolation along omega, Jacobian kz / sqrt(kx^2 + ky^2 + kz^2),
/// evanescent and out-of-band samples zeroed. Monostatic data, so the
/// dispersion relation uses the two-way speed c / 2.
FKGrid stolt_remap(const FKGrid& spectrum, double dt, double c);

/// Frequency-wavenumber migration to a magnitude volume on the aperture
/// lattice with nz = nt and dz = c dt / 2. Padding is cropped away.
VolumeImage fk_migrate(const EchoCube& cube, double c = kSpeedOfLight, const FkOptions& opts = {});

/// Time-domain delay-and-sum reference: each voxel is
/// |sum_e s_e(2R/c) exp(+j 2 pi fc 2R/c)| with linear interpolation in t.
VolumeImage diffraction_stack(const EchoCube& cube, const VolumeSpec& volume, double c = kSpeedOfLight);

/// The volume fk_migrate produces for this cube.
VolumeSpec migration_volume(const EchoCube& cube, double c = kSpeedOfLight);

// ---------------------------------------------------------------------------
// Wavefront-based imaging
// ---------------------------------------------------------------------------

struct WavefrontOptions {
  /// A detection must also exceed this multiple of the median envelope of
  /// the whole cube. Keeps noise-only elements masked out.
  double noise_floor_factor = 5.0;
};

/// Per element: matched-filter envelope, first peak whose prominence is at
/// least threshold_rel * (global envelope maximum), three-point parabolic
/// refinement of the delay, Z = c tau / 2.
QuasiWavefront extract_quasi_wavefront(const EchoCube& cube, double threshold_rel,
                                       const WavefrontOptions& opts = {},
                                       double c = kSpeedOfLight);

struct GradientField {
  std::size_t nx = 0, ny = 0;
  std::vector<double> dzdx, dzdy;
  std::vector<std::uint8_t> mask;
};

/// Central differences on the wavefront lattice; one-sided second-order
/// differences at mask borders. Samples without a valid neighbour along
/// their row or their column are masked out.
GradientField raw_gradients(const QuasiWavefront& wf);

/// Gradient re-estimation as a Gaussian-weighted average of raw gradients
/// over neighbouring feature points, weights
/// exp(-d_xy^2 / 2 sigma_xy^2) * exp(-dZ^2 / 2 sigma_z^2). Neighbour offsets
/// are used in symmetric pairs only so the average stays centred at mask
/// borders. The result is clamped to |grad Z| <= 1.
GradientField rpm_smooth_gradients(const QuasiWavefront& wf, double sigma_xy, double sigma_z);

struct CloudPoint {
  double x = 0.0, y = 0.0, z = 0.0;
  double confidence = 0.0;
};

struct PointCloud {
  std::vector<CloudPoint> points;
};

struct IbstResult {
  PointCloud cloud;
  std::size_t dropped = 0;  ///< samples with 1 - |grad Z|^2 < 0
};

/// Inverse boundary scattering transform of every valid sample:
///   x = X - Z Zx,  y = Y - Z Zy,  z = Z sqrt(1 - Zx^2 - Zy^2).
/// Confidence is the radicand clamped to [0, 1].
IbstResult ibst(const QuasiWavefront& wf, const GradientField& gradients);

// ---------------------------------------------------------------------------
// Cavity-coded MIMO decoding
// ---------------------------------------------------------------------------

struct DecodeOptions {
  /// Length of each recovered channel; 0 means mixture length - L + 1.
  std::size_t channel_length = 0;
  /// Conjugate-gradient least-squares passes on top of the matched-filter
  /// estimate (each pass is one encode plus one correlation). 0 keeps the
  /// plain correlation decoder.
  std::size_t refine_iterations = 0;
};

/// Channel i = correlation of the mixture with responses[i], trimmed to the
/// channel support and divided by the code energy.
std::vector<ComplexSeries> cavity_decode(const ComplexSeries& mixture, const PortCodeBook& book,
                                         const DecodeOptions& opts = {});

}  // namespace uwb
