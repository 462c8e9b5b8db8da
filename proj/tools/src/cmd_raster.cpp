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

#include <cmath>

#include "commands.hpp"
#include "raster.hpp"
#include "uwbsense/container.hpp"

namespace uwb::cli {

Raster raster_from(const Container& c, std::optional<std::size_t> slice) {
  Raster r;
  if (c.kind == "spectrogram") {
    const Spectrogram s = spectrogram_from(c);
    r.rows = s.bins;
    r.cols = s.frames;
    r.values.resize(r.rows * r.cols);
    for (std::size_t b = 0; b < s.bins; ++b)
      for (std::size_t f = 0; f < s.frames; ++f) r.values[b * r.cols + f] = s.at(f, b);
    return r;
  }
  if (c.kind == "wavefront") {
    const QuasiWavefront wf = wavefront_from(c);
    r.rows = wf.grid.nx;
    r.cols = wf.grid.ny;
    r.values.resize(r.rows * r.cols);
    for (std::size_t i = 0; i < wf.z.size(); ++i) r.values[i] = wf.mask[i] ? wf.z[i] : 0.0;
    return r;
  }
  if (c.kind == "volume") {
    const VolumeImage v = volume_from(c);
    const std::size_t k = slice ? *slice : v.argmax()[2];
    if (k >= v.grid.nz)
      throw InvalidArgument("slice " + std::to_string(k) + " outside volume depth " + std::to_string(v.grid.nz));
    r.rows = v.grid.nx;
    r.cols = v.grid.ny;
    r.values.resize(r.rows * r.cols);
    for (std::size_t i = 0; i < v.grid.nx; ++i)
      for (std::size_t j = 0; j < v.grid.ny; ++j) r.values[i * r.cols + j] = v.at(i, j, k);
    return r;
  }
  throw InvalidArgument("a " + c.kind + " container cannot be reduced to 2D (use spectrogram, wavefront or volume)");
}

std::vector<std::uint8_t> to_pgm(const Raster& r, double db_floor) {
  if (!(db_floor < 0.0)) throw InvalidArgument("db_floor must be negative");
  double peak = 0.0;
  for (double v : r.values) peak = std::max(peak, std::abs(v));
  const std::string head = "P5\n" + std::to_string(r.cols) + " " + std::to_string(r.rows) + "\n255\n";
  std::vector<std::uint8_t> out(head.begin(), head.end());
  out.reserve(head.size() + r.values.size());
  for (double v : r.values) {
    std::uint8_t px = 0;
    const double a = std::abs(v);
    if (peak > 0.0 && a > 0.0) {
      const double db = std::max(20.0 * std::log10(a / peak), db_floor);
      px = static_cast<std::uint8_t>(std::lround(255.0 * (db - db_floor) / -db_floor));
    }
    out.push_back(px);
  }
  return out;
}

int cmd_export_raster(const Invocation& inv) {
  ConfigNode cfg(load_config(inv.config_path), "");
  double db_floor = cfg.get<double>("db_floor", -40.0);
  std::optional<std::size_t> slice;
  if (cfg.has("slice")) slice = cfg.require<std::size_t>("slice");
  cfg.finish();
  if (inv.db_floor) db_floor = *inv.db_floor;
  if (inv.slice) slice = inv.slice;

  const Raster r = raster_from(read_container(inv.require_in()), slice);
  const auto bytes = to_pgm(r, db_floor);
  write_text(inv.require_out(), std::string(bytes.begin(), bytes.end()));
  inv.say("raster " + std::to_string(r.rows) + " x " + std::to_string(r.cols));
  return 0;
}

}  // namespace uwb::cli
