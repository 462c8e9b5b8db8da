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

#include "uwbsense/container.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "uwbsense/errors.hpp"

namespace uwb {

using nlohmann::json;

std::string_view dtype_name(DType t) { return t == DType::C64LE ? "c64le" : "f32le"; }

DType parse_dtype(std::string_view name) {
  if (name == "c64le") return DType::C64LE;
  if (name == "f32le") return DType::F32LE;
  throw InvalidArgument("unknown dtype '" + std::string(name) + "'");
}

std::size_t dtype_size(DType t) { return t == DType::C64LE ? 8 : 4; }

std::size_t Container::elements() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return dims.empty() ? 0 : n;
}

void Container::validate() const {
  if (format_version != 1) throw InvalidArgument("unsupported format_version " + std::to_string(format_version));
  if (kind.empty()) throw InvalidArgument("container kind is empty");
  if (!axes.empty() && axes.size() != dims.size())
    throw InvalidArgument("container axes count differs from dims count");
  if (payload.size() != elements() * dtype_size(dtype))
    throw InvalidArgument("payload holds " + std::to_string(payload.size()) + " bytes, dims imply " +
                          std::to_string(elements() * dtype_size(dtype)));
}

void expect_kind(const Container& c, std::string_view kind) {
  if (c.kind != kind)
    throw InvalidArgument("expected a " + std::string(kind) + " container, got " + c.kind);
}

// ---------------------------------------------------------------------------
// Raw float32 little-endian payload
// ---------------------------------------------------------------------------

namespace {

void put_f32(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>((bits >> (8 * b)) & 0xffu));
}

double get_f32(const std::vector<std::uint8_t>& in, std::size_t index) {
  std::uint32_t bits = 0;
  for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(in[4 * index + static_cast<std::size_t>(b)]) << (8 * b);
  return static_cast<double>(std::bit_cast<float>(bits));
}

std::vector<std::uint8_t> pack(std::span<const cplx> v) {
  std::vector<std::uint8_t> out;
  out.reserve(v.size() * 8);
  for (const auto& s : v) {
    put_f32(out, s.real());
    put_f32(out, s.imag());
  }
  return out;
}

std::vector<std::uint8_t> pack(std::span<const double> v) {
  std::vector<std::uint8_t> out;
  out.reserve(v.size() * 4);
  for (double s : v) put_f32(out, s);
  return out;
}

std::vector<cplx> unpack_c(const Container& c) {
  if (c.dtype != DType::C64LE) throw InvalidArgument(c.kind + " payload must be c64le");
  std::vector<cplx> out(c.elements());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {get_f32(c.payload, 2 * i), get_f32(c.payload, 2 * i + 1)};
  return out;
}

std::vector<double> unpack_r(const Container& c) {
  if (c.dtype != DType::F32LE) throw InvalidArgument(c.kind + " payload must be f32le");
  std::vector<double> out(c.elements());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = get_f32(c.payload, i);
  return out;
}

json cplx_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx json_cplx(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("complex attribute must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
T attr(const Container& c, const char* key) {
  if (!c.attrs.contains(key)) throw InvalidArgument(c.kind + " container lacks attribute '" + key + "'");
  try {
    return c.attrs.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(c.kind + " attribute '" + key + "': " + e.what());
  }
}

void expect_dims(const Container& c, std::size_t rank) {
  if (c.dims.size() != rank)
    throw InvalidArgument(c.kind + " container must have " + std::to_string(rank) + " dims");
  if (c.axes.size() != rank) throw InvalidArgument(c.kind + " container must have " + std::to_string(rank) + " axes");
}

}  // namespace

// ---------------------------------------------------------------------------
// Header I/O
// ---------------------------------------------------------------------------

json header_json(const Container& c) {
  json h;
  h["format_version"] = c.format_version;
  h["kind"] = c.kind;
  h["dims"] = c.dims;
  json axes = json::array();
  for (const auto& a : c.axes)
    axes.push_back({{"name", a.name}, {"step", a.step}, {"origin", a.origin}, {"unit", a.unit}});
  h["axes"] = axes;
  h["dtype"] = std::string(dtype_name(c.dtype));
  h["payload_file"] = c.payload_file;
  h["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  h["provenance"] = c.provenance;
  h["attrs"] = c.attrs;
  return h;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_container(const std::filesystem::path& header_path, Container c) {
  if (c.payload_file.empty()) c.payload_file = header_path.stem().string() + ".bin";
  c.validate();
  const auto payload_path = header_path.parent_path() / c.payload_file;
  std::ofstream p(payload_path, std::ios::binary | std::ios::trunc);
  if (!p) throw IoError("cannot open '" + payload_path.string() + "' for writing");
  p.write(reinterpret_cast<const char*>(c.payload.data()), static_cast<std::streamsize>(c.payload.size()));
  if (!p) throw IoError("write failed for '" + payload_path.string() + "'");
  write_text(header_path, header_json(c).dump(2) + "\n");
}

Container read_container(const std::filesystem::path& header_path) {
  json h;
  try {
    h = json::parse(read_text(header_path));
  } catch (const json::parse_error& e) {
    throw InvalidArgument("malformed container header '" + header_path.string() + "': " + e.what());
  }
  Container c;
  try {
    c.format_version = h.at("format_version").get<int>();
    c.kind = h.at("kind").get<std::string>();
    c.dims = h.at("dims").get<std::vector<std::size_t>>();
    for (const auto& a : h.at("axes"))
      c.axes.push_back({a.at("name").get<std::string>(), a.at("step").get<double>(),
                        a.at("origin").get<double>(), a.at("unit").get<std::string>()});
    c.dtype = parse_dtype(h.at("dtype").get<std::string>());
    c.payload_file = h.at("payload_file").get<std::string>();
    if (h.contains("seed") && !h["seed"].is_null()) c.seed = h["seed"].get<std::uint64_t>();
    if (h.contains("provenance")) c.provenance = h["provenance"].get<std::string>();
    if (h.contains("attrs")) c.attrs = h["attrs"];
  } catch (const json::exception& e) {
    throw InvalidArgument("invalid container header '" + header_path.string() + "': " + e.what());
  }
  if (c.format_version != 1)
    throw InvalidArgument("unsupported format_version " + std::to_string(c.format_version));
  const auto payload_path = header_path.parent_path() / c.payload_file;
  std::ifstream p(payload_path, std::ios::binary);
  if (!p) throw IoError("cannot open payload '" + payload_path.string() + "'");
  c.payload.assign(std::istreambuf_iterator<char>(p), std::istreambuf_iterator<char>());
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Typed conversions
// ---------------------------------------------------------------------------

Container to_container(const EchoCube& cube) {
  cube.validate();
  Container c;
  c.kind = "echo_cube";
  c.dims = {cube.aperture.nx, cube.aperture.ny, cube.pulse.nt};
  c.axes = {{"x", cube.aperture.dx, cube.aperture.x0, "m"},
            {"y", cube.aperture.dy, cube.aperture.y0, "m"},
            {"t", cube.pulse.dt, 0.0, "s"}};
  c.dtype = DType::C64LE;
  c.attrs = {{"fc", cube.pulse.fc},
             {"bandwidth", cube.pulse.bandwidth},
             {"envelope", std::string(envelope_name(cube.pulse.envelope))}};
  c.payload = pack(cube.data);
  return c;
}

EchoCube echo_cube_from(const Container& c) {
  expect_kind(c, "echo_cube");
  expect_dims(c, 3);
  EchoCube cube;
  cube.aperture.nx = c.dims[0];
  cube.aperture.ny = c.dims[1];
  cube.aperture.dx = c.axes[0].step;
  cube.aperture.x0 = c.axes[0].origin;
  cube.aperture.dy = c.axes[1].step;
  cube.aperture.y0 = c.axes[1].origin;
  cube.pulse.nt = c.dims[2];
  cube.pulse.dt = c.axes[2].step;
  cube.pulse.fc = attr<double>(c, "fc");
  cube.pulse.bandwidth = attr<double>(c, "bandwidth");
  cube.pulse.envelope = parse_envelope(attr<std::string>(c, "envelope"));
  cube.data = unpack_c(c);
  cube.validate();
  return cube;
}

Container to_container(const IQTrace& iq) {
  Container c;
  c.kind = "iq_trace";
  c.dims = {1, iq.samples.size()};
  c.axes = {{"channel", 1.0, 0.0, ""}, {"t", iq.samples.dt, iq.samples.t0, "s"}};
  c.dtype = DType::C64LE;
  c.attrs = {{"fs", iq.fs}, {"k", iq.k}, {"amplitude", cplx_json(iq.amplitude)}, {"s_dc", cplx_json(iq.s_dc)}};
  c.payload = pack(iq.samples.samples);
  return c;
}

IQTrace iq_trace_from(const Container& c) {
  expect_kind(c, "iq_trace");
  expect_dims(c, 2);
  if (c.dims[0] != 1) throw InvalidArgument("expected a single-channel iq_trace, got " + std::to_string(c.dims[0]));
  IQTrace iq;
  iq.samples.samples = unpack_c(c);
  iq.samples.dt = c.axes[1].step;
  iq.samples.t0 = c.axes[1].origin;
  iq.fs = attr<double>(c, "fs");
  iq.k = attr<double>(c, "k");
  if (c.attrs.contains("amplitude")) iq.amplitude = json_cplx(c.attrs["amplitude"]);
  if (c.attrs.contains("s_dc")) iq.s_dc = json_cplx(c.attrs["s_dc"]);
  return iq;
}

Container to_container(const ChannelMatrix& m, double wavelength) {
  Container c;
  c.kind = "iq_trace";
  c.dims = {m.channels(), m.samples()};
  c.axes = {{"channel", 1.0, 0.0, ""}, {"t", 1.0 / m.fs, 0.0, "s"}};
  c.dtype = DType::C64LE;
  c.attrs = {{"fs", m.fs}};
  if (!m.positions.empty()) c.attrs["positions"] = m.positions;
  if (wavelength > 0.0) c.attrs["wavelength"] = wavelength;
  std::vector<cplx> flat;
  flat.reserve(m.channels() * m.samples());
  for (Eigen::Index i = 0; i < m.snapshots.rows(); ++i)
    for (Eigen::Index k = 0; k < m.snapshots.cols(); ++k) flat.push_back(m.snapshots(i, k));
  c.payload = pack(flat);
  return c;
}

ChannelMatrix channel_matrix_from(const Container& c) {
  expect_kind(c, "iq_trace");
  expect_dims(c, 2);
  ChannelMatrix m;
  m.fs = 1.0 / c.axes[1].step;
  if (c.attrs.contains("positions")) m.positions = attr<std::vector<double>>(c, "positions");
  const auto flat = unpack_c(c);
  const auto rows = static_cast<Eigen::Index>(c.dims[0]);
  const auto cols = static_cast<Eigen::Index>(c.dims[1]);
  m.snapshots.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) m.snapshots(i, k) = flat[static_cast<std::size_t>(i * cols + k)];
  return m;
}

Container to_container(const QuasiWavefront& wf) {
  Container c;
  c.kind = "wavefront";
  c.dims = {2, wf.grid.nx, wf.grid.ny};
  c.axes = {{"plane", 1.0, 0.0, ""}, {"X", wf.grid.dx, wf.grid.x0, "m"}, {"Y", wf.grid.dy, wf.grid.y0, "m"}};
  c.dtype = DType::F32LE;
  c.attrs = {{"planes", json::array({"Z", "mask"})}};
  std::vector<double> flat(wf.z.begin(), wf.z.end());
  for (auto m : wf.mask) flat.push_back(m ? 1.0 : 0.0);
  for (std::size_t i = 0; i < wf.z.size(); ++i)
    if (!wf.mask[i]) flat[i] = 0.0;
  c.payload = pack(flat);
  return c;
}

QuasiWavefront wavefront_from(const Container& c) {
  expect_kind(c, "wavefront");
  expect_dims(c, 3);
  if (c.dims[0] != 2) throw InvalidArgument("wavefront container needs 2 planes");
  ApertureGrid g;
  g.nx = c.dims[1];
  g.ny = c.dims[2];
  g.dx = c.axes[1].step;
  g.x0 = c.axes[1].origin;
  g.dy = c.axes[2].step;
  g.y0 = c.axes[2].origin;
  QuasiWavefront wf = QuasiWavefront::empty(g);
  const auto flat = unpack_r(c);
  const std::size_t n = g.nx * g.ny;
  for (std::size_t i = 0; i < n; ++i) {
    wf.mask[i] = flat[n + i] != 0.0 ? 1 : 0;
    wf.z[i] = wf.mask[i] ? flat[i] : 0.0;
  }
  return wf;
}

Container to_container(const VolumeImage& v) {
  Container c;
  c.kind = "volume";
  c.dims = {v.grid.nx, v.grid.ny, v.grid.nz};
  c.axes = {{"x", v.grid.dx, v.grid.x0, "m"}, {"y", v.grid.dy, v.grid.y0, "m"}, {"z", v.grid.dz, v.grid.z0, "m"}};
  c.dtype = DType::F32LE;
  c.attrs = {{"aperture_undersampled", v.aperture_undersampled}};
  c.payload = pack(v.values);
  return c;
}

VolumeImage volume_from(const Container& c) {
  expect_kind(c, "volume");
  expect_dims(c, 3);
  VolumeImage v;
  v.grid.nx = c.dims[0];
  v.grid.ny = c.dims[1];
  v.grid.nz = c.dims[2];
  v.grid.dx = c.axes[0].step;
  v.grid.x0 = c.axes[0].origin;
  v.grid.dy = c.axes[1].step;
  v.grid.y0 = c.axes[1].origin;
  v.grid.dz = c.axes[2].step;
  v.grid.z0 = c.axes[2].origin;
  if (c.attrs.contains("aperture_undersampled")) v.aperture_undersampled = attr<bool>(c, "aperture_undersampled");
  v.values = unpack_r(c);
  return v;
}

Container to_container(const Spectrogram& s, const std::string& freq_unit) {
  Container c;
  c.kind = "spectrogram";
  c.dims = {s.frames, s.bins};
  c.axes = {{"t", s.frame_dt, s.time_origin, "s"}, {"f", s.freq_step, s.freq_origin, freq_unit}};
  c.dtype = DType::F32LE;
  c.payload = pack(s.values);
  return c;
}

Spectrogram spectrogram_from(const Container& c) {
  expect_kind(c, "spectrogram");
  expect_dims(c, 2);
  Spectrogram s;
  s.frames = c.dims[0];
  s.bins = c.dims[1];
  s.frame_dt = c.axes[0].step;
  s.time_origin = c.axes[0].origin;
  s.freq_step = c.axes[1].step;
  s.freq_origin = c.axes[1].origin;
  s.values = unpack_r(c);
  return s;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud) {
  std::string out = "x,y,z,confidence\n";
  for (const auto& p : cloud.points)
    out += fmt(p.x) + "," + fmt(p.y) + "," + fmt(p.z) + "," + fmt(p.confidence) + "\n";
  write_text(path, out);
}

void write_ibi_csv(const std::filesystem::path& path, const IBISeries& ibi) {
  std::string out = "beat_time,interval,quality\n";
  for (std::size_t i = 0; i < ibi.beat_times.size(); ++i) {
    out += fmt(ibi.beat_times[i]) + ",";
    if (i > 0) out += fmt(ibi.intervals[i - 1]);
    out += "," + fmt(i < ibi.quality.size() ? ibi.quality[i] : 0.0) + "\n";
  }
  write_text(path, out);
}

IBISeries read_ibi_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("beat_time", 0) != 0)
    throw InvalidArgument("'" + path.string() + "' is not an IBI CSV (missing beat_time header)");
  std::vector<double> beats, quality;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.empty()) continue;
    try {
      beats.push_back(std::stod(cells[0]));
      quality.push_back(cells.size() > 2 && !cells[2].empty() ? std::stod(cells[2]) : 1.0);
    } catch (const std::exception&) {
      throw InvalidArgument("bad number on line " + std::to_string(row) + " of '" + path.string() + "'");
    }
  }
  IBISeries s = ibi_from_beats(std::move(beats));
  s.quality = std::move(quality);
  return s;
}

}  // namespace uwb
