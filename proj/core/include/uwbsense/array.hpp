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

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "uwbsense/signal.hpp"

namespace uwb {

/// Channels x slow-time snapshots with element positions along a line.
struct ChannelMatrix {
  Eigen::MatrixXcd snapshots;
  double fs = 1.0;
  std::vector<double> positions;  ///< m

  std::size_t channels() const { return static_cast<std::size_t>(snapshots.rows()); }
  std::size_t samples() const { return static_cast<std::size_t>(snapshots.cols()); }
};

struct CovarianceEstimate {
  Eigen::MatrixXcd r;
  std::size_t samples = 0;
  double loading = 0.0;  ///< absolute value added to the diagonal
};

/// R = X X^H / T + loading_rel * trace(X X^H / T) / N * I.
CovarianceEstimate estimate_covariance(const ChannelMatrix& m, double loading_rel = 1e-3);

/// a_n(theta) = exp(j 2 pi p_n sin(theta) / lambda), theta in degrees.
Eigen::VectorXcd steering_vector(std::span<const double> positions, double wavelength, double theta_deg);

struct MrcResult {
  ComplexSeries output;
  Eigen::VectorXcd weights;  ///< unit norm, first nonzero entry real positive
  double eigenvalue = 0.0;
  std::size_t iterations = 0;
};

/// Principal eigenvector of the sample covariance by power iteration
/// (at most 200 iterations, relative eigenvalue change below 1e-12), then
/// output = w^H X.
MrcResult mrc_combine(const ChannelMatrix& m);

struct AngleGrid {
  double start_deg = -90.0;
  double step_deg = 0.5;
  std::size_t count = 361;

  double at(std::size_t i) const { return start_deg + static_cast<double>(i) * step_deg; }
};

/// P(theta) = 1 / (a^H R^-1 a) over the angle grid. The result's t0 and dt
/// carry the grid start and step in degrees.
RealSeries capon_spectrum(const CovarianceEstimate& cov, std::span<const double> positions,
                          double wavelength, const AngleGrid& grid);

/// w = R^-1 a / (a^H R^-1 a), normalized so that w^H a = 1.
Eigen::VectorXcd dcmp_weights(const CovarianceEstimate& cov, double constraint_deg,
                              std::span<const double> positions, double wavelength);

/// w^H a(theta).
cplx beam_response(const Eigen::VectorXcd& w, std::span<const double> positions, double wavelength,
                   double theta_deg);

/// Uniform line of n elements at the given spacing, centred on the origin.
std::vector<double> uniform_line(std::size_t n, double spacing);

struct FarFieldSource {
  double angle_deg = 0.0;
  double power = 1.0;
};

/// Independent circular Gaussian source waveforms through far-field
/// steering plus white noise of total std noise_std per channel.
ChannelMatrix synth_array_snapshots(std::span<const double> positions, double wavelength,
                                    std::span<const FarFieldSource> sources, double noise_std,
                                    std::size_t snapshots, double fs, std::uint64_t seed);

}  // namespace uwb
