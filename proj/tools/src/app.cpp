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

#include "app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "uwbsense/errors.hpp"

namespace uwb::cli {

namespace {

struct Parsed {
  Invocation inv;
  std::uint64_t seed_value = 0;
  double db_floor_value = -40.0;
  std::size_t slice_value = 0;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Parsed& p) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->fallthrough();
  sub->callback([&p, name] { p.inv.command = name; });
  return sub;
}

void add_stage(CLI::App* sub, const std::string& label, std::vector<std::string> choices, Parsed& p) {
  sub->add_option(label, p.inv.stage, label)->required()->check(CLI::IsMember(std::move(choices)));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& err) {
  Parsed p;
  CLI::App app{"uwbsense: ultra-wideband radar simulation and reconstruction toolkit", "uwbsense"};
  app.require_subcommand(1);
  app.add_option("--config", p.inv.config_path, "JSON run configuration");
  auto* seed_opt = app.add_option("--seed", p.seed_value, "random seed (overrides the config)");
  app.add_option("--out", p.inv.out_path, "output path");
  app.add_flag("--quiet", p.inv.quiet, "suppress progress output");

  add_command(app, "simulate", "synthesize echo cubes, wavefronts, IQ traces or array snapshots", p);

  auto* image = add_command(app, "image", "F-K migration, SEABED/IBST shape recovery or diffraction stack", p);
  add_stage(image, "mode", {"fk", "seabed", "stack"}, p);
  image->add_option("--in", p.inv.in_path, "echo_cube container")->required();

  auto* vitals = add_command(app, "vitals", "interbeat intervals and HRV", p);
  add_stage(vitals, "stage", {"estimate", "hrv"}, p);
  vitals->add_option("--in", p.inv.in_path, "iq_trace container or IBI CSV")->required();

  auto* md = add_command(app, "microdoppler", "walker simulation, velocity spectrogram and tracking", p);
  add_stage(md, "stage", {"sim", "spectrogram", "track"}, p);
  md->add_option("--in", p.inv.in_path, "input container");

  auto* bf = add_command(app, "beamform", "Capon spectrum, DCMP weights or MRC combining", p);
  add_stage(bf, "stage", {"capon", "dcmp", "mrc"}, p);
  bf->add_option("--in", p.inv.in_path, "multichannel iq_trace container")->required();

  auto* cav = add_command(app, "cavity", "cavity-coded MIMO codebook, encoding and decoding", p);
  add_stage(cav, "stage", {"codebook", "encode", "decode"}, p);
  cav->add_option("--in", p.inv.in_path, "channel or mixture container");

  auto* ras = add_command(app, "export-raster", "dB-scaled 8-bit PGM of a 2D-reducible container", p);
  ras->add_option("--in", p.inv.in_path, "spectrogram, wavefront or volume container")->required();
  auto* floor_opt = ras->add_option("--db-floor", p.db_floor_value, "lowest dB level mapped to 0");
  auto* slice_opt = ras->add_option("--slice", p.slice_value, "volume z slice index");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (seed_opt->count() > 0) p.inv.seed = p.seed_value;
  if (floor_opt->count() > 0) p.inv.db_floor = p.db_floor_value;
  if (slice_opt->count() > 0) p.inv.slice = p.slice_value;
  if (p.inv.command == "microdoppler" && p.inv.stage != "sim" && p.inv.in_path.empty()) {
    err << "error: microdoppler " << p.inv.stage << " needs --in\n";
    return kExitUsage;
  }
  if (p.inv.command == "cavity" && p.inv.stage != "codebook" && p.inv.in_path.empty()) {
    err << "error: cavity " << p.inv.stage << " needs --in\n";
    return kExitUsage;
  }

  try {
    const auto& c = p.inv.command;
    if (c == "simulate") return cmd_simulate(p.inv);
    if (c == "image") return cmd_image(p.inv);
    if (c == "vitals") return cmd_vitals(p.inv);
    if (c == "microdoppler") return cmd_microdoppler(p.inv);
    if (c == "beamform") return cmd_beamform(p.inv);
    if (c == "cavity") return cmd_cavity(p.inv);
    if (c == "export-raster") return cmd_export_raster(p.inv);
    err << "error: no subcommand\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace uwb::cli
