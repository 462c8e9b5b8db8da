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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "config.hpp"
#include "uwbsense/scene.hpp"
#include "uwbsense/vitals.hpp"

namespace uwb::cli {

/// Everything a subcommand needs from the command line.
struct Invocation {
  std::string command;
  std::string stage;  ///< mode or stage positional, when the command has one
  std::string config_path;
  std::string in_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  std::optional<double> db_floor;
  std::optional<std::size_t> slice;

  /// --seed if given, else the config "seed" key, else 0.
  std::uint64_t resolve_seed(ConfigNode& cfg) const;
  /// Deterministic description of the run stored in container headers.
  std::string provenance() const;
  void say(const std::string& line) const;
  const std::string& require_in() const;
  const std::string& require_out() const;
};

/// `out` with its extension replaced by `suffix` (for example ".timing.json").
std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix);

int cmd_simulate(const Invocation& inv);
int cmd_image(const Invocation& inv);
int cmd_vitals(const Invocation& inv);
int cmd_microdoppler(const Invocation& inv);
int cmd_beamform(const Invocation& inv);
int cmd_cavity(const Invocation& inv);
int cmd_export_raster(const Invocation& inv);

// Config parsers shared between subcommands.
ApertureGrid parse_aperture(ConfigNode& node);
PulseSpec parse_pulse(ConfigNode& node);
Scene parse_scene(ConfigNode& node);
DisplacementModel parse_displacement_model(ConfigNode& node, double duration);
PortCodeBook read_codebook(const std::filesystem::path& path);
void write_codebook(const std::filesystem::path& path, const PortCodeBook& book, std::uint64_t seed);

/// Writes a small JSON document with two-space indentation.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace uwb::cli
