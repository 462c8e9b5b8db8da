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

#include <iostream>

#include "commands.hpp"
#include "uwbsense/container.hpp"

namespace uwb::cli {

using nlohmann::json;

std::uint64_t Invocation::resolve_seed(ConfigNode& cfg) const {
  const auto from_cfg = cfg.get<std::uint64_t>("seed", 0);
  return seed ? *seed : from_cfg;
}

std::string Invocation::provenance() const {
  std::string p = "uwbsense " + command;
  if (!stage.empty()) p += " " + stage;
  if (!config_path.empty()) p += " --config " + std::filesystem::path(config_path).filename().string();
  if (seed) p += " --seed " + std::to_string(*seed);
  return p;
}

void Invocation::say(const std::string& line) const {
  if (!quiet) std::cout << line << "\n";
}

const std::string& Invocation::require_in() const {
  if (in_path.empty()) throw InvalidArgument(command + " needs --in");
  return in_path;
}

const std::string& Invocation::require_out() const {
  if (out_path.empty()) throw InvalidArgument(command + " needs --out");
  return out_path;
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
  return out.parent_path() / (out.stem().string() + suffix);
}

void write_json(const std::filesystem::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

// ---------------------------------------------------------------------------
// Scene
// ---------------------------------------------------------------------------

namespace {

Vec3 vec3(ConfigNode& node, const std::string& key, Vec3 fallback) {
  const auto v = node.get<std::vector<double>>(key, {});
  if (v.empty()) return fallback;
  if (v.size() != 3) throw InvalidArgument("config key '" + node.path() + "." + key + "' needs 3 values");
  return {v[0], v[1], v[2]};
}

}  // namespace

ApertureGrid parse_aperture(ConfigNode& node) {
  const auto nx = node.get<std::size_t>("nx", 64);
  const auto ny = node.get<std::size_t>("ny", 64);
  const double dx = node.get<double>("dx", 2.8e-3);
  const double dy = node.get<double>("dy", dx);
  ApertureGrid g = ApertureGrid::centered(nx, ny, dx, dy);
  g.x0 = node.get<double>("x0", g.x0);
  g.y0 = node.get<double>("y0", g.y0);
  g.validate();
  return g;
}

PulseSpec parse_pulse(ConfigNode& node) {
  PulseSpec p;
  p.fc = node.get<double>("fc", p.fc);
  p.bandwidth = node.get<double>("bandwidth", p.bandwidth);
  p.dt = node.get<double>("dt", p.dt);
  p.nt = node.get<std::size_t>("nt", p.nt);
  p.envelope = parse_envelope(node.get<std::string>("envelope", std::string(envelope_name(p.envelope))));
  p.validate();
  return p;
}

Scene parse_scene(ConfigNode& node) {
  Scene s;
  for (ConfigNode* sn : node.children("surfaces")) {
    const auto type = sn->require<std::string>("type");
    const double refl = sn->get<double>("reflectivity", 1.0);
    if (type == "plane") {
      s.surfaces.emplace_back(PlaneSurface{sn->require<double>("z0"), refl});
    } else if (type == "sphere") {
      s.surfaces.emplace_back(SphereSurface{vec3(*sn, "center", {}), sn->require<double>("radius"), refl});
    } else if (type == "ellipsoid") {
      s.surfaces.emplace_back(
          EllipsoidSurface{vec3(*sn, "center", {}), vec3(*sn, "semi_axes", {0.1, 0.1, 0.1}), refl});
    } else if (type == "height_map") {
      HeightMapSurface h;
      h.nx = sn->require<std::size_t>("nx");
      h.ny = sn->require<std::size_t>("ny");
      h.dx = sn->require<double>("dx");
      h.dy = sn->get<double>("dy", h.dx);
      h.x0 = sn->get<double>("x0", -0.5 * h.dx * static_cast<double>(h.nx - 1));
      h.y0 = sn->get<double>("y0", -0.5 * h.dy * static_cast<double>(h.ny - 1));
      h.z = sn->require<std::vector<double>>("z");
      h.reflectivity = refl;
      s.surfaces.emplace_back(std::move(h));
    } else {
      throw InvalidArgument("unknown surface type '" + type + "' at " + sn->path());
    }
  }
  for (ConfigNode* pn : node.children("points")) {
    PointScatterer p;
    p.position = vec3(*pn, "position", {});
    p.reflectivity = pn->get_complex("reflectivity", {1.0, 0.0});
    s.points.push_back(p);
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Vitals model
// ---------------------------------------------------------------------------

DisplacementModel parse_displacement_model(ConfigNode& node, double duration) {
  DisplacementModel m;
  m.d0 = node.get<double>("d0", m.d0);
  ConfigNode& drift = node.child("drift");
  m.drift.knot_times = drift.get<std::vector<double>>("knot_times", {});
  m.drift.values = drift.get<std::vector<double>>("values", {});

  ConfigNode& resp = node.child("resp");
  m.resp.period = resp.get<double>("period", m.resp.period);
  m.resp.amplitude = resp.get<double>("amplitude", m.resp.amplitude);
  m.resp.inhale_fraction = resp.get<double>("inhale_fraction", m.resp.inhale_fraction);
  m.resp.phase = resp.get<double>("phase", m.resp.phase);

  ConfigNode& heart = node.child("heart");
  m.heart.amplitude = heart.get<double>("amplitude", m.heart.amplitude);
  m.heart.first_beat = heart.get<double>("first_beat", m.heart.first_beat);
  const bool has_seq = heart.has("ibi_sequence");
  m.heart.ibi_sequence = heart.get<std::vector<double>>("ibi_sequence", m.heart.ibi_sequence);
  ConfigNode& mod = heart.child("ibi_modulation");
  const double mean_ibi = mod.get<double>("mean", 1.0);
  const double depth = mod.get<double>("depth", 0.1);
  const double freq = mod.get<double>("freq", 0.1);
  const double phase = mod.get<double>("phase", 0.0);
  if (heart.has("ibi_modulation") && has_seq)
    throw InvalidArgument("config sets both heart.ibi_sequence and heart.ibi_modulation");
  if (!has_seq) {
    m.heart.ibi_sequence = modulated_ibi_sequence(mean_ibi, depth, freq, duration, m.heart.first_beat, phase);
  }
  ConfigNode& shape = heart.child("shape");
  auto& s = m.heart.shape;
  s.rise = shape.get<double>("rise", s.rise);
  s.fall = shape.get<double>("fall", s.fall);
  s.second_amplitude = shape.get<double>("second_amplitude", s.second_amplitude);
  s.second_onset = shape.get<double>("second_onset", s.second_onset);
  s.second_rise = shape.get<double>("second_rise", s.second_rise);
  s.second_fall = shape.get<double>("second_fall", s.second_fall);
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// Codebook file
// ---------------------------------------------------------------------------

void write_codebook(const std::filesystem::path& path, const PortCodeBook& book, std::uint64_t seed) {
  json doc;
  doc["kind"] = "port_codebook";
  doc["format_version"] = 1;
  doc["dt"] = book.dt;
  doc["length"] = book.length;
  doc["seed"] = seed;
  doc["max_pairwise_correlation"] = max_pairwise_correlation(book);
  doc["responses"] = book.responses;
  write_text(path, doc.dump() + "\n");
}

PortCodeBook read_codebook(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw InvalidArgument("codebook '" + path.string() + "' is not valid JSON: " + e.what());
  }
  PortCodeBook book;
  try {
    if (doc.value("kind", std::string()) != "port_codebook")
      throw InvalidArgument("'" + path.string() + "' is not a port codebook");
    book.dt = doc.at("dt").get<double>();
    book.length = doc.at("length").get<std::size_t>();
    book.responses = doc.at("responses").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw InvalidArgument("invalid codebook '" + path.string() + "': " + e.what());
  }
  for (const auto& r : book.responses)
    if (r.size() != book.length) throw InvalidArgument("codebook responses differ from the declared length");
  return book;
}

}  // namespace uwb::cli
