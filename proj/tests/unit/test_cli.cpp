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
#include <filesystem>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "uwbsense/container.hpp"

namespace uwb::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("uwbsense_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string config(const std::string& name, const json& doc) const {
    write_text(dir_ / name, doc.dump());
    return path(name);
  }

  int run(std::vector<std::string> args) {
    args.push_back("--quiet");
    std::ostringstream err;
    const int rc = uwb::cli::run(args, err);
    last_err_ = err.str();
    return rc;
  }

  json read_json(const std::string& name) const { return json::parse(read_text(dir_ / name)); }

  fs::path dir_;
  std::string last_err_;
};

json point_scene_config() {
  return {{"kind", "scene"},
          {"aperture", {{"nx", 24}, {"ny", 24}, {"dx", 4e-3}}},
          {"pulse", {{"nt", 128}}},
          {"scene", {{"points", json::array({{{"position", {0.008, -0.004, 0.3}}}})}}}};
}

std::vector<std::uint8_t> pgm_pixels(const std::string& bytes, std::size_t& cols, std::size_t& rows) {
  std::istringstream in(bytes);
  std::string magic;
  int maxval = 0;
  in >> magic >> cols >> rows >> maxval;
  in.get();
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(maxval, 255);
  const auto offset = static_cast<std::size_t>(in.tellg());
  return {bytes.begin() + static_cast<long>(offset), bytes.end()};
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(run({"image", "warp", "--in", "x.json"}), kExitUsage);
  EXPECT_EQ(run({"microdoppler", "track"}), kExitUsage);
  EXPECT_NE(last_err_.find("needs --in"), std::string::npos);
}

TEST_F(CliTest, UnknownConfigKeyIsNamed) {
  const auto cfg = config("bad.json", {{"kind", "scene"}, {"aperture", {{"nx", 4}, {"wobble", 1}}}});
  EXPECT_EQ(run({"simulate", "--config", cfg, "--out", path("c.json")}), kExitUsage);
  EXPECT_NE(last_err_.find("aperture.wobble"), std::string::npos) << last_err_;
  EXPECT_FALSE(fs::exists(dir_ / "c.json"));
}

TEST_F(CliTest, IoErrors) {
  EXPECT_EQ(run({"image", "fk", "--in", path("missing.json"), "--out", path("v.json")}), kExitIo);
  EXPECT_EQ(run({"simulate", "--config", path("missing_config.json"), "--out", path("c.json")}), kExitIo);
  const auto cfg = config("vitals.json", {{"kind", "vitals"}, {"duration", 10}});
  EXPECT_EQ(run({"simulate", "--config", cfg, "--out", path("no/such/dir/iq.json")}), kExitIo);
}

TEST_F(CliTest, SimulateSceneHeader) {
  const auto cfg = config("scene.json", point_scene_config());
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out", path("cube.json"), "--seed", "3"}), kExitOk) << last_err_;
  const json h = read_json("cube.json");
  EXPECT_EQ(h["kind"], "echo_cube");
  EXPECT_EQ(h["dims"], json({24, 24, 128}));
  EXPECT_EQ(h["dtype"], "c64le");
  EXPECT_EQ(h["seed"], 3);
  EXPECT_EQ(fs::file_size(dir_ / "cube.bin"), 24u * 24u * 128u * 8u);
}

TEST_F(CliTest, SeededRunsAreByteIdentical) {
  json scene = point_scene_config();
  scene["noise_std"] = 0.05;
  const auto cfg = config("scene.json", scene);
  const auto vcfg = config("vitals.json", {{"kind", "vitals"}, {"duration", 20}});
  for (const char* tag : {"a", "b"}) {
    const std::string t(tag);
    fs::create_directories(dir_ / t);
    ASSERT_EQ(run({"simulate", "--config", cfg, "--out", path(t + "/cube.json"), "--seed", "9"}), kExitOk);
    ASSERT_EQ(run({"simulate", "--config", vcfg, "--out", path(t + "/iq.json"), "--seed", "9"}), kExitOk);
  }
  for (const char* f : {"cube.json", "cube.bin", "iq.json", "iq.bin", "iq.truth.json"})
    EXPECT_EQ(read_text(dir_ / "a" / f), read_text(dir_ / "b" / f)) << f;
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out", path("c_cube.json"), "--seed", "10"}), kExitOk);
  EXPECT_NE(read_text(dir_ / "a" / "cube.bin"), read_text(dir_ / "c_cube.bin"));
}

TEST_F(CliTest, FkAndStackAgreeOnPointTarget) {
  const auto cfg = config("scene.json", point_scene_config());
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out", path("cube.json")}), kExitOk);
  ASSERT_EQ(run({"image", "fk", "--in", path("cube.json"), "--out", path("fk.json")}), kExitOk) << last_err_;
  ASSERT_EQ(run({"image", "stack", "--in", path("cube.json"), "--out", path("st.json")}), kExitOk) << last_err_;
  const VolumeImage fk = volume_from(read_container(dir_ / "fk.json"));
  const VolumeImage st = volume_from(read_container(dir_ / "st.json"));
  const auto a = fk.argmax(), b = st.argmax();
  EXPECT_NEAR(fk.grid.x(a[0]), 0.008, fk.grid.dx);
  EXPECT_NEAR(fk.grid.y(a[1]), -0.004, fk.grid.dy);
  EXPECT_NEAR(fk.grid.z(a[2]), 0.3, fk.grid.dz);
  EXPECT_NEAR(st.grid.x(b[0]), fk.grid.x(a[0]), std::max(fk.grid.dx, st.grid.dx));
  EXPECT_NEAR(st.grid.y(b[1]), fk.grid.y(a[1]), std::max(fk.grid.dy, st.grid.dy));
  EXPECT_NEAR(st.grid.z(b[2]), fk.grid.z(a[2]), std::max(fk.grid.dz, st.grid.dz));

  const json timing = read_json("fk.timing.json");
  EXPECT_GE(timing["wall_seconds"].get<double>(), 0.0);
  EXPECT_EQ(timing["mode"], "fk");
  EXPECT_NE(timing["peak_note"].get<std::string>().find("argmax"), std::string::npos);
}

TEST_F(CliTest, SeabedSphereCloud) {
  const double h = 0.6, r = 0.15;
  const json doc = {{"kind", "scene"},
                    {"aperture", {{"nx", 32}, {"ny", 32}, {"dx", 2.8e-3}}},
                    {"pulse", {{"nt", 512}}},
                    {"scene", {{"surfaces", json::array({{{"type", "sphere"}, {"center", {0, 0, h}}, {"radius", r}}})}}}};
  ASSERT_EQ(run({"simulate", "--config", config("sphere.json", doc), "--out", path("cube.json")}), kExitOk)
      << last_err_;
  ASSERT_EQ(run({"image", "seabed", "--in", path("cube.json"), "--out", path("cloud.csv")}), kExitOk) << last_err_;
  EXPECT_EQ(read_container(dir_ / "cloud.wavefront.json").kind, "wavefront");

  std::istringstream in(read_text(dir_ / "cloud.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,z,confidence");
  std::vector<double> err;
  while (std::getline(in, line)) {
    double x = 0, y = 0, z = 0, c = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &y, &z, &c), 4);
    err.push_back(std::abs(std::hypot(x, y, z - h) - r));
  }
  ASSERT_GT(err.size(), 32u * 32u / 2u);
  std::nth_element(err.begin(), err.begin() + static_cast<long>(err.size() / 2), err.end());
  EXPECT_LT(err[err.size() / 2], 2.8e-3);
}

TEST_F(CliTest, ImageRejectsWrongKindAndNonFiniteData) {
  const auto vcfg = config("vitals.json", {{"kind", "vitals"}, {"duration", 10}});
  ASSERT_EQ(run({"simulate", "--config", vcfg, "--out", path("iq.json")}), kExitOk);
  EXPECT_EQ(run({"image", "fk", "--in", path("iq.json"), "--out", path("v.json")}), kExitUsage);
  EXPECT_NE(last_err_.find("echo_cube"), std::string::npos);

  EchoCube cube;
  cube.aperture = ApertureGrid::centered(4, 4, 4e-3, 4e-3);
  cube.pulse.nt = 32;
  cube.data.assign(4 * 4 * 32, cplx{0.0, 0.0});
  cube.data[7] = {std::nan(""), 0.0};
  write_container(dir_ / "nan.json", to_container(cube));
  EXPECT_EQ(run({"image", "fk", "--in", path("nan.json"), "--out", path("v.json")}), kExitNumerical);
}

TEST_F(CliTest, VitalsEstimateWithAndWithoutTruth) {
  const auto cfg = config("vitals.json", {{"kind", "vitals"}});
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out", path("iq.json"), "--seed", "2"}), kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "iq.truth.json"));
  ASSERT_EQ(run({"vitals", "estimate", "--in", path("iq.json"), "--out", path("ibi.csv")}), kExitOk) << last_err_;
  const json s = read_json("ibi.summary.json");
  ASSERT_TRUE(s.contains("rmse_ms"));
  EXPECT_LT(s["rmse_ms"].get<double>(), 20.0);
  EXPECT_NEAR(s["mean_hr"].get<double>(), 60.0, 3.0);

  fs::remove(dir_ / "iq.truth.json");
  ASSERT_EQ(run({"vitals", "estimate", "--in", path("iq.json"), "--out", path("ibi2.csv")}), kExitOk);
  EXPECT_FALSE(read_json("ibi2.summary.json").contains("rmse_ms"));

  ASSERT_EQ(run({"vitals", "hrv", "--in", path("ibi.csv"), "--out", path("hrv.json")}), kExitOk) << last_err_;
  const json hrv = read_json("hrv.json");
  EXPECT_TRUE(hrv.contains("lf_power"));
  EXPECT_GT(hrv["record_span"].get<double>(), 100.0);
}

TEST_F(CliTest, VitalsKindMismatchAndShortRecord) {
  const auto cfg = config("scene.json", point_scene_config());
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out", path("cube.json")}), kExitOk);
  EXPECT_EQ(run({"vitals", "estimate", "--in", path("cube.json"), "--out", path("ibi.csv")}), kExitUsage);

  const auto vcfg = config("vitals.json", {{"kind", "vitals"}, {"duration", 20}});
  ASSERT_EQ(run({"simulate", "--config", vcfg, "--out", path("iq.json")}), kExitOk);
  ASSERT_EQ(run({"vitals", "estimate", "--in", path("iq.json"), "--out", path("ibi.csv")}), kExitOk) << last_err_;
  EXPECT_EQ(run({"vitals", "hrv", "--in", path("ibi.csv"), "--out", path("hrv.json")}), kExitDomain);
  EXPECT_NE(last_err_.find("record too short for LF"), std::string::npos) << last_err_;
}

TEST_F(CliTest, RasterOfZeroGridIsBlack) {
  VolumeImage v;
  v.grid = {3, 5, 2, 1e-3, 1e-3, 1e-3, 0.0, 0.0, 0.0};
  v.values.assign(v.grid.voxels(), 0.0);
  write_container(dir_ / "zero.json", to_container(v));
  ASSERT_EQ(run({"export-raster", "--in", path("zero.json"), "--out", path("z.pgm")}), kExitOk) << last_err_;
  std::size_t cols = 0, rows = 0;
  const auto px = pgm_pixels(read_text(dir_ / "z.pgm"), cols, rows);
  EXPECT_EQ(rows, 3u);
  EXPECT_EQ(cols, 5u);
  ASSERT_EQ(px.size(), 15u);
  for (auto p : px) EXPECT_EQ(p, 0);
}

TEST_F(CliTest, RasterHotCell) {
  VolumeImage v;
  v.grid = {4, 6, 3, 1e-3, 1e-3, 1e-3, 0.0, 0.0, 0.0};
  v.values.assign(v.grid.voxels(), 0.0);
  v.values[(2 * 6 + 5) * 3 + 1] = 7.0;
  write_container(dir_ / "hot.json", to_container(v));
  ASSERT_EQ(run({"export-raster", "--in", path("hot.json"), "--out", path("h.pgm"), "--db-floor", "-30"}), kExitOk);
  std::size_t cols = 0, rows = 0;
  const auto px = pgm_pixels(read_text(dir_ / "h.pgm"), cols, rows);
  ASSERT_EQ(px.size(), 24u);
  for (std::size_t k = 0; k < px.size(); ++k) EXPECT_EQ(px[k], k == 2 * 6 + 5 ? 255 : 0) << k;
  EXPECT_EQ(run({"export-raster", "--in", path("hot.json"), "--out", path("h.pgm"), "--slice", "3"}), kExitUsage);
}

TEST_F(CliTest, RasterToneSpectrogramHasOneBrightRow) {
  const auto cfg = config("walk.json", {{"n_pulses", 1024}, {"walkers", json::array({{{"torso_velocity", 1.0}}})}});
  ASSERT_EQ(run({"microdoppler", "sim", "--config", cfg, "--out", path("walk.json")}), kExitOk) << last_err_;
  ASSERT_EQ(run({"microdoppler", "spectrogram", "--in", path("walk.json"), "--out", path("spec.json")}), kExitOk)
      << last_err_;
  ASSERT_EQ(run({"export-raster", "--in", path("spec.json"), "--out", path("s.pgm")}), kExitOk) << last_err_;
  std::size_t cols = 0, rows = 0;
  const auto px = pgm_pixels(read_text(dir_ / "s.pgm"), cols, rows);
  ASSERT_EQ(px.size(), rows * cols);
  std::vector<double> row_mean(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) row_mean[r] += px[r * cols + c] / static_cast<double>(cols);
  const auto best = static_cast<std::size_t>(std::max_element(row_mean.begin(), row_mean.end()) - row_mean.begin());
  EXPECT_GT(row_mean[best], 250.0);
  for (std::size_t r = 0; r < rows; ++r)
    if (r + 1 < best || r > best + 1) EXPECT_LT(row_mean[r], 0.8 * row_mean[best]) << r;

  const auto vcfg = config("vitals.json", {{"kind", "vitals"}, {"duration", 10}});
  ASSERT_EQ(run({"simulate", "--config", vcfg, "--out", path("iq.json")}), kExitOk);
  EXPECT_EQ(run({"export-raster", "--in", path("iq.json"), "--out", path("x.pgm")}), kExitUsage);
}

TEST_F(CliTest, BeamformAndCavityPipelines) {
  const auto acfg = config("array.json", {{"kind", "array"}, {"snapshots", 500}});
  ASSERT_EQ(run({"simulate", "--config", acfg, "--out", path("arr.json"), "--seed", "4"}), kExitOk) << last_err_;
  ASSERT_EQ(run({"beamform", "capon", "--in", path("arr.json"), "--out", path("capon.csv")}), kExitOk) << last_err_;
  ASSERT_EQ(run({"beamform", "dcmp", "--in", path("arr.json"), "--out", path("w.json")}), kExitOk) << last_err_;
  ASSERT_EQ(run({"beamform", "mrc", "--in", path("arr.json"), "--out", path("mrc.json")}), kExitOk) << last_err_;
  EXPECT_TRUE(fs::exists(dir_ / "mrc.weights.json"));

  const auto bcfg = config("book.json", {{"n_pairs", 4}, {"length", 512}});
  ASSERT_EQ(run({"cavity", "codebook", "--config", bcfg, "--out", path("book.json"), "--seed", "1"}), kExitOk)
      << last_err_;
  const auto ccfg = config("ch.json", {{"kind", "cavity_channels"}, {"n_channels", 4}, {"length", 8}});
  ASSERT_EQ(run({"simulate", "--config", ccfg, "--out", path("ch.json"), "--seed", "1"}), kExitOk) << last_err_;
  const auto use = config("use.json", {{"codebook", path("book.json")}});
  ASSERT_EQ(run({"cavity", "encode", "--config", use, "--in", path("ch.json"), "--out", path("mix.json")}), kExitOk)
      << last_err_;
  ASSERT_EQ(run({"cavity", "decode", "--config", use, "--in", path("mix.json"), "--out", path("dec.json")}), kExitOk)
      << last_err_;
  const ChannelMatrix truth = channel_matrix_from(read_container(dir_ / "ch.json"));
  const ChannelMatrix dec = channel_matrix_from(read_container(dir_ / "dec.json"));
  ASSERT_EQ(dec.channels(), 4u);
  ASSERT_GE(dec.samples(), 8u);
  const Eigen::MatrixXcd head = dec.snapshots.leftCols(8);
  EXPECT_LT((head - truth.snapshots).squaredNorm(), 0.1 * truth.snapshots.squaredNorm());
}

}  // namespace
}  // namespace uwb::cli
