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

#include "uwbsense/array.hpp"

#include <cmath>
#include <random>
#include <string>

#include "uwbsense/errors.hpp"

namespace uwb {

namespace {

void check_finite(const Eigen::MatrixXcd& m) {
  if (!m.allFinite()) throw NumericalError("channel matrix contains non-finite samples");
}

// Factorization shared by Capon and DCMP.
Eigen::LLT<Eigen::MatrixXcd> factor(const CovarianceEstimate& cov) {
  if (cov.r.rows() == 0 || cov.r.rows() != cov.r.cols()) throw InvalidArgument("covariance must be square");
  Eigen::LLT<Eigen::MatrixXcd> llt(cov.r);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14))
    throw NumericalError("covariance is singular; increase diagonal loading");
  return llt;
}

void check_positions(std::span<const double> positions, Eigen::Index n, double wavelength) {
  if (static_cast<Eigen::Index>(positions.size()) != n)
    throw InvalidArgument("position count " + std::to_string(positions.size()) +
                          " does not match channel count " + std::to_string(n));
  if (!(wavelength > 0.0)) throw InvalidArgument("wavelength must be > 0");
}

}  // namespace

CovarianceEstimate estimate_covariance(const ChannelMatrix& m, double loading_rel) {
  if (m.channels() == 0) throw InvalidArgument("channel matrix is empty");
  if (m.samples() < m.channels())
    throw InvalidArgument("too few samples: " + std::to_string(m.samples()) + " < " +
                          std::to_string(m.channels()) + " channels");
  if (!(loading_rel >= 0.0)) throw InvalidArgument("loading must be >= 0");
  check_finite(m.snapshots);
  CovarianceEstimate c;
  c.samples = m.samples();
  c.r = m.snapshots * m.snapshots.adjoint() / static_cast<double>(m.samples());
  c.r = 0.5 * (c.r + c.r.adjoint()).eval();
  const double tr = c.r.trace().real();
  c.loading = loading_rel * tr / static_cast<double>(m.channels());
  c.r.diagonal().array() += c.loading;
  return c;
}

Eigen::VectorXcd steering_vector(std::span<const double> positions, double wavelength, double theta_deg) {
  const double s = std::sin(theta_deg * kPi / 180.0);
  Eigen::VectorXcd a(static_cast<Eigen::Index>(positions.size()));
  for (std::size_t n = 0; n < positions.size(); ++n)
    a(static_cast<Eigen::Index>(n)) = std::polar(1.0, kTwoPi * positions[n] * s / wavelength);
  return a;
}

MrcResult mrc_combine(const ChannelMatrix& m) {
  if (m.channels() < 2) throw InvalidArgument("MRC needs at least 2 channels");
  const CovarianceEstimate cov = estimate_covariance(m, 0.0);
  const Eigen::MatrixXcd& r = cov.r;

  Eigen::Index start = 0;
  r.colwise().norm().maxCoeff(&start);
  Eigen::VectorXcd v = r.col(start);
  if (!(v.norm() > 0.0)) throw NumericalError("MRC on an all-zero channel matrix");
  v.normalize();

  constexpr std::size_t kMaxIter = 200;
  double lambda = (v.adjoint() * r * v)(0).real();
  std::size_t it = 0;
  bool converged = false;
  while (it < kMaxIter) {
    ++it;
    Eigen::VectorXcd w = r * v;
    const double nw = w.norm();
    if (!(nw > 0.0)) throw NumericalError("MRC power iteration collapsed to zero");
    v = w / nw;
    const double next = (v.adjoint() * r * v)(0).real();
    const double change = std::abs(next - lambda) / std::max(std::abs(next), 1e-300);
    lambda = next;
    if (change < 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericalError("MRC power iteration did not converge after " + std::to_string(it) + " iterations");

  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * v.norm()) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      break;
    }
  }

  MrcResult res;
  res.weights = v;
  res.eigenvalue = lambda;
  res.iterations = it;
  res.output.dt = 1.0 / m.fs;
  const Eigen::RowVectorXcd y = v.adjoint() * m.snapshots;
  res.output.samples.assign(y.data(), y.data() + y.size());
  return res;
}

RealSeries capon_spectrum(const CovarianceEstimate& cov, std::span<const double> positions,
                          double wavelength, const AngleGrid& grid) {
  check_positions(positions, cov.r.rows(), wavelength);
  if (grid.count == 0 || !(grid.step_deg > 0.0)) throw InvalidArgument("angle grid needs count >= 1 and step > 0");
  const auto llt = factor(cov);
  RealSeries out{std::vector<double>(grid.count), grid.step_deg, grid.start_deg};
  for (std::size_t i = 0; i < grid.count; ++i) {
    const Eigen::VectorXcd a = steering_vector(positions, wavelength, grid.at(i));
    const Eigen::VectorXcd v = llt.solve(a);
    const double q = a.dot(v).real();  // a^H R^-1 a
    if (!(q > 0.0)) throw NumericalError("covariance is singular; increase diagonal loading");
    out.samples[i] = 1.0 / q;
  }
  return out;
}

Eigen::VectorXcd dcmp_weights(const CovarianceEstimate& cov, double constraint_deg,
                              std::span<const double> positions, double wavelength) {
  check_positions(positions, cov.r.rows(), wavelength);
  const auto llt = factor(cov);
  const Eigen::VectorXcd a = steering_vector(positions, wavelength, constraint_deg);
  const Eigen::VectorXcd v = llt.solve(a);
  const cplx s = v.dot(a);  // v^H a
  if (!(std::abs(s) > 0.0)) throw NumericalError("covariance is singular; increase diagonal loading");
  return v / std::conj(s);
}

cplx beam_response(const Eigen::VectorXcd& w, std::span<const double> positions, double wavelength,
                   double theta_deg) {
  check_positions(positions, w.size(), wavelength);
  return w.dot(steering_vector(positions, wavelength, theta_deg));
}

std::vector<double> uniform_line(std::size_t n, double spacing) {
  std::vector<double> p(n);
  const double c = 0.5 * static_cast<double>(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) p[i] = (static_cast<double>(i) - c) * spacing;
  return p;
}

ChannelMatrix synth_array_snapshots(std::span<const double> positions, double wavelength,
                                    std::span<const FarFieldSource> sources, double noise_std,
                                    std::size_t snapshots, double fs, std::uint64_t seed) {
  if (positions.empty()) throw InvalidArgument("array needs at least one element");
  if (!(wavelength > 0.0) || !(fs > 0.0)) throw InvalidArgument("wavelength and fs must be > 0");
  if (snapshots == 0) throw InvalidArgument("snapshots must be >= 1");
  if (!(noise_std >= 0.0)) throw InvalidArgument("noise_std must be >= 0");
  const auto n = static_cast<Eigen::Index>(positions.size());
  const auto t = static_cast<Eigen::Index>(snapshots);

  ChannelMatrix m;
  m.fs = fs;
  m.positions.assign(positions.begin(), positions.end());
  m.snapshots = Eigen::MatrixXcd::Zero(n, t);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(2.0));
  for (const auto& src : sources) {
    if (!(src.power >= 0.0)) throw InvalidArgument("source power must be >= 0");
    const Eigen::VectorXcd a = steering_vector(positions, wavelength, src.angle_deg);
    const double amp = std::sqrt(src.power);
    for (Eigen::Index k = 0; k < t; ++k) {
      const double re = g(rng);
      const double im = g(rng);
      m.snapshots.col(k) += a * (amp * cplx{re, im});
    }
  }
  if (noise_std > 0.0) {
    for (Eigen::Index k = 0; k < t; ++k) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double re = g(rng);
        const double im = g(rng);
        m.snapshots(i, k) += noise_std * cplx{re, im};
      }
    }
  }
  return m;
}

}  // namespace uwb
