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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "uwbsense/errors.hpp"
#include "uwbsense/scene.hpp"

namespace uwb {
namespace {

const ApertureGrid kGrid = ApertureGrid::centered(16, 12, 5e-3, 5e-3);

TEST(Aperture, CenteredIsSymmetric) {
  const auto g = ApertureGrid::centered(4, 3, 0.01, 0.02);
  EXPECT_DOUBLE_EQ(g.x(0), -g.x(3));
  EXPECT_DOUBLE_EQ(g.y(1), 0.0);
  EXPECT_THROW(ApertureGrid::centered(1, 3, 0.01, 0.01).validate(), InvalidArgument);
  EXPECT_THROW(ApertureGrid::centered(2, 3, 0.0, 0.01).validate(), InvalidArgument);
}

TEST(Pulse, EnvelopeShapeAndValidation) {
  PulseSpec p;
  EXPECT_DOUBLE_EQ(p.envelope_at(0.0), 1.0);
  EXPECT_NEAR(p.envelope_at(0.5 / p.bandwidth), 0.5, 1e-12);
  EXPECT_EQ(p.envelope_at(1.01 / p.bandwidth), 0.0);
  p.envelope = Envelope::Gaussian;
  EXPECT_NEAR(p.envelope_at(0.5 / p.bandwidth), 0.5, 1e-12);
  PulseSpec bad;
  bad.dt = 1.0 / bad.bandwidth;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = PulseSpec{};
  bad.bandwidth = 2.0 * bad.fc;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  EXPECT_EQ(parse_envelope("gaussian"), Envelope::Gaussian);
  EXPECT_THROW(parse_envelope("boxcar"), InvalidArgument);
}

TEST(Bst, PlaneIsExactlyConstant) {
  const auto wf = bst_forward(Surface{PlaneSurface{0.8, 1.0}}, kGrid);
  ASSERT_EQ(wf.valid_count(), kGrid.elements());
  for (double z : wf.z) EXPECT_EQ(z, 0.8);
}

TEST(Bst, PointIsTwoWayPathOverTwo) {
  const auto wf = bst_forward(Surface{SphereSurface{{0.0, 0.0, 0.5}, 0.0, 1.0}}, kGrid);
  for (std::size_t i = 0; i < kGrid.nx; ++i)
    for (std::size_t j = 0; j < kGrid.ny; ++j)
      EXPECT_NEAR(wf.z[wf.index(i, j)], std::hypot(kGrid.x(i), kGrid.y(j), 0.5), 1e-12);
}

TEST(Bst, SphereClosedFormAndDenseSampling) {
  const SphereSurface s{{0.004, -0.003, 0.6}, 0.08, 1.0};
  const auto wf = bst_forward(Surface{s}, kGrid);
  for (std::size_t i = 0; i < kGrid.nx; ++i)
    for (std::size_t j = 0; j < kGrid.ny; ++j) {
      const double ref = std::hypot(kGrid.x(i) - s.center.x, kGrid.y(j) - s.center.y, s.center.z) - s.radius;
      EXPECT_NEAR(wf.z[wf.index(i, j)], ref, 1e-9);
    }

  const EllipsoidSurface e{s.center, {s.radius, s.radius, s.radius}, 1.0};
  const auto sampled = bst_forward_sampled(e, kGrid, BstOptions{8});
  std::size_t compared = 0;
  for (std::size_t k = 0; k < sampled.z.size(); ++k) {
    if (!sampled.mask[k]) continue;
    EXPECT_LT(std::abs(sampled.z[k] - wf.z[k]), kGrid.dx);
    ++compared;
  }
  EXPECT_GT(compared, kGrid.elements() / 2);
}

TEST(Bst, EmptySceneClearsMask) {
  const auto wf = bst_forward(Scene{}, kGrid);
  EXPECT_EQ(wf.valid_count(), 0u);
}

TEST(Bst, FirstArrivalKeepsNearerSurface) {
  Scene scene;
  scene.surfaces.emplace_back(PlaneSurface{1.2, 1.0});
  scene.surfaces.emplace_back(PlaneSurface{0.7, 1.0});
  const auto wf = bst_forward(scene, kGrid);
  for (double z : wf.z) EXPECT_EQ(z, 0.7);
}

TEST(Bst, FlatHeightMapMatchesPlane) {
  HeightMapSurface hm;
  hm.nx = 41;
  hm.ny = 41;
  hm.dx = hm.dy = 2.5e-3;
  hm.x0 = hm.y0 = -0.05;
  hm.z.assign(hm.nx * hm.ny, 0.9);
  const auto wf = bst_forward(Surface{hm}, kGrid);
  EXPECT_EQ(wf.valid_count(), kGrid.elements());
  for (std::size_t k = 0; k < wf.z.size(); ++k) EXPECT_NEAR(wf.z[k], 0.9, 1e-12);
}

TEST(SceneValidation, RejectsSurfacesBehindAperture) {
  Scene s;
  s.surfaces.emplace_back(PlaneSurface{-0.1, 1.0});
  EXPECT_THROW(s.validate(), InvalidArgument);
  Scene p;
  p.points.push_back({{0.0, 0.0, -1.0}, 1.0});
  EXPECT_THROW(p.validate(), InvalidArgument);
}

PulseSpec short_pulse() {
  PulseSpec p;
  p.nt = 128;
  return p;
}

TEST(Synth, PointPeakAtRoundTripDelay) {
  Scene scene;
  scene.points.push_back({{0.01, -0.005, 1.3}, 1.0});
  const auto p = short_pulse();
  const auto cube = synth_echo_cube(scene, kGrid, p, 0.0, 1);
  for (std::size_t i = 0; i < kGrid.nx; ++i)
    for (std::size_t j = 0; j < kGrid.ny; ++j) {
      const auto tr = cube.trace(i, j);
      std::size_t best = 0;
      for (std::size_t k = 1; k < tr.size(); ++k)
        if (std::abs(tr[k]) > std::abs(tr[best])) best = k;
      const double r = std::hypot(kGrid.x(i) - 0.01, kGrid.y(j) + 0.005, 1.3);
      EXPECT_LE(std::abs(static_cast<double>(best) * p.dt - 2.0 * r / kSpeedOfLight), p.dt / 2.0 + 1e-15);
    }
}

TEST(Synth, CoincidentPointsAddCoherently) {
  Scene one, two;
  one.points.push_back({{0.0, 0.0, 1.0}, 1.0});
  two.points = {one.points[0], one.points[0]};
  const auto p = short_pulse();
  const auto a = synth_echo_cube(one, kGrid, p, 0.0, 1);
  const auto b = synth_echo_cube(two, kGrid, p, 0.0, 1);
  for (std::size_t k = 0; k < a.data.size(); ++k) EXPECT_NEAR(std::abs(b.data[k] - 2.0 * a.data[k]), 0.0, 1e-12);
}

TEST(Synth, PlaneGivesIdenticalTraces) {
  Scene scene;
  scene.surfaces.emplace_back(PlaneSurface{1.1, 1.0});
  const auto p = short_pulse();
  const auto cube = synth_echo_cube(scene, kGrid, p, 0.0, 1);
  const auto ref = cube.trace(0, 0);
  std::size_t best = 0;
  for (std::size_t k = 1; k < ref.size(); ++k)
    if (std::abs(ref[k]) > std::abs(ref[best])) best = k;
  EXPECT_LE(std::abs(static_cast<double>(best) * p.dt - 2.0 * 1.1 / kSpeedOfLight), p.dt / 2.0);
  for (std::size_t i = 0; i < kGrid.nx; ++i)
    for (std::size_t j = 0; j < kGrid.ny; ++j) {
      const auto tr = cube.trace(i, j);
      for (std::size_t k = 0; k < tr.size(); ++k) EXPECT_EQ(tr[k], ref[k]);
    }
}

TEST(SynthProperty, LinearInReflectivities) {
  const auto p = short_pulse();
  Scene s1, s2, mix;
  s1.points.push_back({{0.01, 0.0, 0.9}, {1.0, 0.5}});
  s1.surfaces.emplace_back(PlaneSurface{1.4, 0.7});
  s2.points.push_back({{-0.02, 0.01, 1.2}, {-0.3, 0.8}});
  const cplx a{0.6, -0.2};
  const double b = 1.7;
  // Surface reflectivities are real, so only the point scales by a complex factor.
  mix.points = {{s1.points[0].position, a * s1.points[0].reflectivity},
                {s2.points[0].position, b * s2.points[0].reflectivity}};
  Scene s1_points{{}, s1.points}, s1_plane{s1.surfaces, {}};
  mix.surfaces.emplace_back(PlaneSurface{1.4, 0.7 * 2.0});
  const auto c_pts = synth_echo_cube(s1_points, kGrid, p, 0.0, 0);
  const auto c_pln = synth_echo_cube(s1_plane, kGrid, p, 0.0, 0);
  const auto c2 = synth_echo_cube(s2, kGrid, p, 0.0, 0);
  const auto cm = synth_echo_cube(mix, kGrid, p, 0.0, 0);
  for (std::size_t k = 0; k < cm.data.size(); ++k) {
    const cplx ref = a * c_pts.data[k] + 2.0 * c_pln.data[k] + b * c2.data[k];
    ASSERT_NEAR(std::abs(cm.data[k] - ref), 0.0, 1e-12);
  }
}

TEST(Synth, SeededNoiseIsDeterministic) {
  Scene scene;
  scene.points.push_back({{0.0, 0.0, 1.0}, 1.0});
  const auto p = short_pulse();
  const auto a = synth_echo_cube(scene, kGrid, p, 0.1, 9);
  const auto b = synth_echo_cube(scene, kGrid, p, 0.1, 9);
  const auto c = synth_echo_cube(scene, kGrid, p, 0.1, 10);
  EXPECT_EQ(a.data, b.data);
  EXPECT_NE(a.data, c.data);
  double var = 0.0;
  const auto clean = synth_echo_cube(scene, kGrid, p, 0.0, 9);
  for (std::size_t k = 0; k < a.data.size(); ++k) var += std::norm(a.data[k] - clean.data[k]);
  EXPECT_NEAR(std::sqrt(var / static_cast<double>(a.data.size())), 0.1, 0.005);
}

TEST(Synth, RangeWindowOverflowNamesTarget) {
  Scene scene;
  scene.points.push_back({{0.0, 0.0, 0.5}, 1.0});
  scene.points.push_back({{0.0, 0.0, 40.0}, 1.0});
  try {
    synth_echo_cube(scene, kGrid, short_pulse(), 0.0, 0);
    FAIL() << "expected overflow";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("range window overflow: point 1"), std::string::npos);
  }
}

TEST(Codebook, SinglePairUnitEnergy) {
  const auto book = gen_port_codebook(1, 256, 1e-9, 3);
  ASSERT_EQ(book.pairs(), 1u);
  double e = 0.0;
  for (double v : book.responses[0]) e += v * v;
  EXPECT_NEAR(e, 1.0, 1e-12);
}

TEST(Codebook, SixteenPairsMeetCorrelationBound) {
  const auto book = gen_port_codebook(16, 4096, 1e-9, 11);
  EXPECT_LT(max_pairwise_correlation(book), 0.3);
  // Independent oracle: direct lag scan on a few pairs.
  for (std::size_t a : {0u, 5u}) {
    const std::size_t b = a + 7;
    const auto& x = book.responses[a];
    const auto& y = book.responses[b];
    double worst = 0.0;
    for (long l = -4095; l <= 4095; l += 1) {
      double acc = 0.0;
      for (long n = std::max(0L, -l); n < std::min(4096L, 4096L - l); ++n) acc += x[n + l] * y[n];
      worst = std::max(worst, std::abs(acc));
    }
    EXPECT_LT(worst, 0.3);
    EXPECT_LE(worst, max_pairwise_correlation(book) + 1e-12);
  }
}

TEST(Codebook, DeterministicAndValidated) {
  const auto a = gen_port_codebook(3, 512, 1e-9, 5);
  const auto b = gen_port_codebook(3, 512, 1e-9, 5);
  EXPECT_EQ(a.responses, b.responses);
  EXPECT_THROW(gen_port_codebook(4, 200, 1e-9, 5), InvalidArgument);
  EXPECT_THROW(gen_port_codebook(0, 200, 1e-9, 5), InvalidArgument);
}

PortCodeBook manual_book(std::vector<std::vector<double>> codes) {
  PortCodeBook b;
  b.dt = 1.0;
  b.length = codes[0].size();
  b.responses = std::move(codes);
  return b;
}

TEST(Encode, IdentityCodePassesChannelThrough) {
  const auto book = manual_book({{1.0, 0.0, 0.0}});
  const std::vector<ComplexSeries> ch{{{{1.0, 2.0}, {-1.0, 0.5}, {3.0, 0.0}}, 1.0, 0.0}};
  const auto out = cavity_encode(ch, book);
  ASSERT_EQ(out.size(), 5u);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_NEAR(std::abs(out.samples[n] - ch[0].samples[n]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(out.samples[3]) + std::abs(out.samples[4]), 0.0, 1e-12);
}

TEST(Encode, DisjointImpulsesGiveShiftedCodes) {
  const auto book = gen_port_codebook(4, 256, 1.0, 2);
  std::vector<ComplexSeries> ch(4, ComplexSeries{std::vector<cplx>(8), 1.0, 0.0});
  for (std::size_t i = 0; i < 4; ++i) ch[i].samples[2 * i] = cplx(1.0 + i, 0.0);
  const auto out = cavity_encode(ch, book);
  ASSERT_EQ(out.size(), 8u + 256u - 1u);
  std::vector<double> ref(out.size(), 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t n = 0; n < 256; ++n) ref[2 * i + n] += (1.0 + i) * book.responses[i][n];
  for (std::size_t n = 0; n < ref.size(); ++n) EXPECT_NEAR(std::abs(out.samples[n] - ref[n]), 0.0, 1e-12);

  std::vector<ComplexSeries> zero(4, ComplexSeries{std::vector<cplx>(8), 1.0, 0.0});
  for (const auto& v : cavity_encode(zero, book).samples) EXPECT_EQ(std::abs(v), 0.0);
  EXPECT_THROW(cavity_encode(std::span(zero).first(3), book), InvalidArgument);
}

TEST(EncodeProperty, LinearInChannels) {
  const auto book = gen_port_codebook(2, 128, 1.0, 4);
  std::vector<ComplexSeries> a(2, ComplexSeries{std::vector<cplx>(20), 1.0, 0.0}), b = a, mix = a;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t n = 0; n < 20; ++n) {
      a[i].samples[n] = {std::sin(0.3 * n + i), std::cos(0.7 * n)};
      b[i].samples[n] = {0.1 * n, -0.2 * i};
      mix[i].samples[n] = 2.0 * a[i].samples[n] - cplx(0.0, 1.0) * b[i].samples[n];
    }
  const auto ea = cavity_encode(a, book), eb = cavity_encode(b, book), em = cavity_encode(mix, book);
  for (std::size_t n = 0; n < em.size(); ++n)
    EXPECT_NEAR(std::abs(em.samples[n] - (2.0 * ea.samples[n] - cplx(0.0, 1.0) * eb.samples[n])), 0.0, 1e-12);
}

}  // namespace
}  // namespace uwb
