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

#include <chrono>
#include <cstdio>

#include "commands.hpp"
#include "uwbsense/container.hpp"
#include "uwbsense/imaging.hpp"

namespace uwb::cli {

using nlohmann::json;

namespace {

std::string fmt(const char* pattern, double a, double b, double c, double d) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

std::string volume_note(const VolumeImage& v) {
  const auto [i, j, k] = v.argmax();
  std::string note = fmt("argmax at (%.4f, %.4f, %.4f) m, value %.6g", v.grid.x(i), v.grid.y(j), v.grid.z(k),
                         v.at(i, j, k));
  if (v.aperture_undersampled) note += "; aperture undersampled";
  return note;
}

}  // namespace

int cmd_image(const Invocation& inv) {
  ConfigNode cfg(load_config(inv.config_path), "");
  const std::string& mode = inv.stage;
  const double c = cfg.get<double>("c", kSpeedOfLight);

  double threshold = 0.3, sigma_xy = 0.0, sigma_z = 0.0;
  WavefrontOptions wopts;
  FkOptions fk;
  VolumeSpec vol;
  bool custom_volume = false;
  if (mode == "seabed") {
    threshold = cfg.get<double>("threshold_rel", threshold);
    sigma_xy = cfg.get<double>("sigma_xy", 0.0);
    sigma_z = cfg.get<double>("sigma_z", 0.0);
    wopts.noise_floor_factor = cfg.get<double>("noise_floor_factor", wopts.noise_floor_factor);
  } else if (mode == "fk") {
    fk.time_padding = cfg.get<std::size_t>("time_padding", fk.time_padding);
    fk.spatial_padding = cfg.get<std::size_t>("spatial_padding", fk.spatial_padding);
  } else if (mode == "stack" && cfg.has("volume")) {
    ConfigNode& v = cfg.child("volume");
    vol.nx = v.require<std::size_t>("nx");
    vol.ny = v.require<std::size_t>("ny");
    vol.nz = v.require<std::size_t>("nz");
    vol.dx = v.require<double>("dx");
    vol.dy = v.get<double>("dy", vol.dx);
    vol.dz = v.require<double>("dz");
    vol.x0 = v.get<double>("x0", 0.0);
    vol.y0 = v.get<double>("y0", 0.0);
    vol.z0 = v.get<double>("z0", 0.0);
    custom_volume = true;
  }
  cfg.finish();

  const Container in = read_container(inv.require_in());
  if (in.kind != "echo_cube") throw InvalidArgument("image needs an echo_cube container, got " + in.kind);
  const EchoCube cube = echo_cube_from(in);
  const std::filesystem::path out = inv.require_out();

  json timing;
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  if (mode == "fk" || mode == "stack") {
    VolumeImage v;
    if (mode == "fk") {
      v = fk_migrate(cube, c, fk);
    } else {
      v = diffraction_stack(cube, custom_volume ? vol : migration_volume(cube, c), c);
    }
    timing["wall_seconds"] = elapsed();
    timing["peak_note"] = volume_note(v);
    Container oc = to_container(v);
    oc.seed = in.seed;
    oc.provenance = inv.provenance();
    write_container(out, std::move(oc));
    inv.say(timing["peak_note"].get<std::string>());
  } else {
    const double cell = std::max(cube.aperture.dx, cube.aperture.dy);
    if (sigma_xy <= 0.0) sigma_xy = 1.5 * cell;
    if (sigma_z <= 0.0) sigma_z = 2.0 * c * cube.pulse.dt;
    const QuasiWavefront wf = extract_quasi_wavefront(cube, threshold, wopts, c);
    const GradientField g = rpm_smooth_gradients(wf, sigma_xy, sigma_z);
    const IbstResult res = ibst(wf, g);
    timing["wall_seconds"] = elapsed();
    timing["peak_note"] = std::to_string(res.cloud.points.size()) + " points, " + std::to_string(res.dropped) +
                          " dropped, " + std::to_string(wf.valid_count()) + " wavefront samples";
    write_point_cloud_csv(out, res.cloud);
    Container wc = to_container(wf);
    wc.seed = in.seed;
    wc.provenance = inv.provenance();
    write_container(sibling(out, ".wavefront.json"), std::move(wc));
    inv.say(timing["peak_note"].get<std::string>());
  }
  timing["mode"] = mode;
  write_json(sibling(out, ".timing.json"), timing);
  return 0;
}

}  // namespace uwb::cli
