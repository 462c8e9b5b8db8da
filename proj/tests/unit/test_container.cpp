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

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "uwbsense/container.hpp"
#include "uwbsense/errors.hpp"

namespace uwb {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("uwbsense_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

float as_f32(double v) { return static_cast<float>(v); }

// write -> read -> write must reproduce header and payload bytes.
void expect_bit_exact(const Container& c, const fs::path& dir) {
  write_container(dir / "a.json", c);
  Container back = read_container(dir / "a.json");
  EXPECT_EQ(back.payload, c.payload);
  back.payload_file.clear();
  write_container(dir / "b.json", back);
  EXPECT_EQ(read_text(dir / "a.bin"), read_text(dir / "b.bin"));
  // Headers differ only in the payload file name.
  auto ha = header_json(read_container(dir / "a.json"));
  auto hb = header_json(read_container(dir / "b.json"));
  ha.erase("payload_file");
  hb.erase("payload_file");
  EXPECT_EQ(ha.dump(), hb.dump());
}

EchoCube small_cube(std::uint64_t seed) {
  EchoCube cube;
  cube.aperture = ApertureGrid::centered(3, 4, 4e-3, 5e-3);
  cube.pulse.nt = 16;
  cube.pulse.envelope = Envelope::Gaussian;
  cube.data.resize(cube.aperture.elements() * cube.pulse.nt);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (auto& v : cube.data) v = {g(rng), g(rng)};
  return cube;
}

TEST(Container, DtypeNamesAndSizes) {
  EXPECT_EQ(parse_dtype("c64le"), DType::C64LE);
  EXPECT_EQ(parse_dtype("f32le"), DType::F32LE);
  EXPECT_EQ(dtype_name(DType::C64LE), "c64le");
  EXPECT_EQ(dtype_size(DType::C64LE), 8u);
  EXPECT_EQ(dtype_size(DType::F32LE), 4u);
  EXPECT_THROW(parse_dtype("f64le"), InvalidArgument);
}

TEST(Container, EchoCubeRoundTrip) {
  TempDir tmp;
  const EchoCube cube = small_cube(1);
  const Container c = to_container(cube);
  EXPECT_EQ(c.dims, (std::vector<std::size_t>{3, 4, 16}));
  EXPECT_EQ(c.payload.size(), 3u * 4u * 16u * 8u);
  expect_bit_exact(c, tmp.path());
  const EchoCube back = echo_cube_from(read_container(tmp.path() / "a.json"));
  EXPECT_EQ(back.aperture.nx, 3u);
  EXPECT_EQ(back.aperture.ny, 4u);
  EXPECT_DOUBLE_EQ(back.aperture.dy, cube.aperture.dy);
  EXPECT_DOUBLE_EQ(back.aperture.x0, cube.aperture.x0);
  EXPECT_DOUBLE_EQ(back.pulse.dt, cube.pulse.dt);
  EXPECT_EQ(back.pulse.envelope, Envelope::Gaussian);
  for (std::size_t i = 0; i < cube.data.size(); ++i) {
    EXPECT_EQ(as_f32(back.data[i].real()), as_f32(cube.data[i].real()));
    EXPECT_EQ(as_f32(back.data[i].imag()), as_f32(cube.data[i].imag()));
  }
}

TEST(Container, LastDimensionFastest) {
  EchoCube cube = small_cube(2);
  for (std::size_t i = 0; i < cube.data.size(); ++i) cube.data[i] = {static_cast<double>(i), 0.0};
  const Container c = to_container(cube);
  // Element (1, 2, 5) sits at flat index (1 * 4 + 2) * 16 + 5.
  const std::size_t flat = (1 * 4 + 2) * 16 + 5;
  EXPECT_EQ(echo_cube_from(c).data[flat].real(), static_cast<double>(cube.index(1, 2, 5)));
  EXPECT_EQ(cube.index(1, 2, 5), flat);
}

TEST(Container, IqTraceRoundTrip) {
  TempDir tmp;
  IQTrace iq;
  iq.fs = 100.0;
  iq.k = 553.0;
  iq.s_dc = {3.0, -2.0};
  iq.samples = {std::vector<cplx>{{1, 2}, {0.1, -0.3}, {7, 8}}, 0.01, 0.5};
  expect_bit_exact(to_container(iq), tmp.path());
  const IQTrace back = iq_trace_from(read_container(tmp.path() / "a.json"));
  EXPECT_DOUBLE_EQ(back.fs, 100.0);
  EXPECT_DOUBLE_EQ(back.k, 553.0);
  EXPECT_EQ(back.s_dc, iq.s_dc);
  EXPECT_DOUBLE_EQ(back.samples.t0, 0.5);
  ASSERT_EQ(back.samples.size(), 3u);
  EXPECT_EQ(as_f32(back.samples.samples[1].imag()), as_f32(-0.3));
}

TEST(Container, ChannelMatrixRoundTrip) {
  TempDir tmp;
  const auto pos = uniform_line(3, 0.005);
  const ChannelMatrix m = synth_array_snapshots(pos, 0.01, {}, 1.0, 20, 50.0, 4);
  expect_bit_exact(to_container(m, 0.01), tmp.path());
  const ChannelMatrix back = channel_matrix_from(read_container(tmp.path() / "a.json"));
  EXPECT_EQ(back.channels(), 3u);
  EXPECT_EQ(back.samples(), 20u);
  EXPECT_DOUBLE_EQ(back.fs, 50.0);
  EXPECT_EQ(back.positions, pos);
  EXPECT_EQ(as_f32(back.snapshots(2, 7).real()), as_f32(m.snapshots(2, 7).real()));
  EXPECT_THROW(iq_trace_from(to_container(m, 0.01)), InvalidArgument);
}

TEST(Container, WavefrontRoundTripZeroesMaskedCells) {
  TempDir tmp;
  QuasiWavefront wf = QuasiWavefront::empty(ApertureGrid::centered(3, 2, 1e-3, 2e-3));
  for (std::size_t i = 0; i < wf.z.size(); ++i) {
    wf.z[i] = 0.1 + 0.01 * static_cast<double>(i);
    wf.mask[i] = i % 2;
  }
  expect_bit_exact(to_container(wf), tmp.path());
  const QuasiWavefront back = wavefront_from(read_container(tmp.path() / "a.json"));
  EXPECT_EQ(back.mask, wf.mask);
  for (std::size_t i = 0; i < wf.z.size(); ++i)
    EXPECT_EQ(as_f32(back.z[i]), wf.mask[i] ? as_f32(wf.z[i]) : 0.0f);
}

TEST(Container, VolumeAndSpectrogramRoundTrip) {
  TempDir tmp;
  VolumeImage v;
  v.grid = {2, 3, 4, 1e-3, 2e-3, 3e-3, -1.0, 0.5, 0.2};
  v.aperture_undersampled = true;
  for (std::size_t i = 0; i < v.grid.voxels(); ++i) v.values.push_back(0.5 * static_cast<double>(i));
  expect_bit_exact(to_container(v), tmp.path());
  const VolumeImage vb = volume_from(read_container(tmp.path() / "a.json"));
  EXPECT_TRUE(vb.aperture_undersampled);
  EXPECT_EQ(vb.values, v.values);
  EXPECT_DOUBLE_EQ(vb.grid.z0, 0.2);

  Spectrogram s;
  s.frames = 3;
  s.bins = 2;
  s.values = {1, 2, 3, 4, 5, 6};
  s.frame_dt = 0.032;
  s.freq_step = 0.1;
  s.freq_origin = -0.1;
  const Container sc = to_container(s, "m/s");
  EXPECT_EQ(sc.axes[1].unit, "m/s");
  expect_bit_exact(sc, tmp.path());
  const Spectrogram sb = spectrogram_from(read_container(tmp.path() / "a.json"));
  EXPECT_EQ(sb.values, s.values);
  EXPECT_DOUBLE_EQ(sb.freq_origin, -0.1);
}

TEST(ContainerProperty, RandomPayloadsBitExact) {
  TempDir tmp;
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<std::size_t> dim(1, 9);
  for (int trial = 0; trial < 20; ++trial) {
    Container c;
    c.kind = "volume";
    c.dims = {dim(rng), dim(rng)};
    c.axes = {{"a", 1.0, 0.0, ""}, {"b", 0.5, -2.0, "m"}};
    c.dtype = trial % 2 ? DType::C64LE : DType::F32LE;
    c.seed = rng();
    c.provenance = "trial " + std::to_string(trial);
    c.payload.resize(c.elements() * dtype_size(c.dtype));
    for (auto& b : c.payload) b = static_cast<std::uint8_t>(byte(rng));
    expect_bit_exact(c, tmp.path());
    const Container back = read_container(tmp.path() / "a.json");
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_EQ(back.provenance, c.provenance);
  }
}

TEST(Container, Validation) {
  TempDir tmp;
  Container c = to_container(small_cube(3));
  Container truncated = c;
  truncated.payload.pop_back();
  EXPECT_THROW(truncated.validate(), InvalidArgument);
  EXPECT_THROW(write_container(tmp.path() / "x.json", truncated), InvalidArgument);

  Container wrong_version = c;
  wrong_version.format_version = 2;
  EXPECT_THROW(wrong_version.validate(), InvalidArgument);

  write_container(tmp.path() / "c.json", c);
  auto h = header_json(read_container(tmp.path() / "c.json"));
  h["format_version"] = 7;
  write_text(tmp.path() / "v.json", h.dump());
  EXPECT_THROW(read_container(tmp.path() / "v.json"), InvalidArgument);

  write_text(tmp.path() / "bad.json", "{ not json");
  EXPECT_THROW(read_container(tmp.path() / "bad.json"), InvalidArgument);
  EXPECT_THROW(read_container(tmp.path() / "missing.json"), IoError);

  h = header_json(c);
  h["payload_file"] = "nowhere.bin";
  write_text(tmp.path() / "p.json", h.dump());
  EXPECT_THROW(read_container(tmp.path() / "p.json"), IoError);

  // Short payload on disk.
  write_text(tmp.path() / "c.bin", read_text(tmp.path() / "c.bin").substr(8));
  EXPECT_THROW(read_container(tmp.path() / "c.json"), InvalidArgument);

  EXPECT_THROW(volume_from(c), InvalidArgument);
  EXPECT_THROW(write_container(tmp.path() / "no_such_dir" / "x.json", c), IoError);
}

TEST(IbiCsv, RoundTrip) {
  TempDir tmp;
  IBISeries s = ibi_from_beats({0.5, 1.42, 2.4, 3.51});
  s.quality = {0.9, 0.8, 1.0, 0.25};
  write_ibi_csv(tmp.path() / "ibi.csv", s);
  const std::string text = read_text(tmp.path() / "ibi.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "beat_time,interval,quality");
  const IBISeries back = read_ibi_csv(tmp.path() / "ibi.csv");
  EXPECT_EQ(back.beat_times, s.beat_times);
  EXPECT_EQ(back.quality, s.quality);
  ASSERT_EQ(back.intervals.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back.intervals[i], s.intervals[i], 1e-12);

  write_text(tmp.path() / "other.csv", "x,y\n1,2\n");
  EXPECT_THROW(read_ibi_csv(tmp.path() / "other.csv"), InvalidArgument);
  write_text(tmp.path() / "junk.csv", "beat_time,interval,quality\n0.5,,1\nabc,1,1\n");
  EXPECT_THROW(read_ibi_csv(tmp.path() / "junk.csv"), InvalidArgument);
}

TEST(PointCloudCsv, Format) {
  TempDir tmp;
  PointCloud pc;
  pc.points.push_back({0.25, -0.5, 1.0, 0.75});
  write_point_cloud_csv(tmp.path() / "pc.csv", pc);
  EXPECT_EQ(read_text(tmp.path() / "pc.csv"), "x,y,z,confidence\n0.25,-0.5,1,0.75\n");
}

}  // namespace
}  // namespace uwb
