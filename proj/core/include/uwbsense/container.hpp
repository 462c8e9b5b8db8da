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
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uwbsense/array.hpp"
#include "uwbsense/imaging.hpp"
#include "uwbsense/scene.hpp"
#include "uwbsense/signal.hpp"
#include "uwbsense/vitals.hpp"

namespace uwb {

enum class DType { C64LE, F32LE };

std::string_view dtype_name(DType t);
DType parse_dtype(std::string_view name);
std::size_t dtype_size(DType t);

struct ContainerAxis {
  std::string name;
  double step = 1.0;
  double origin = 0.0;
  std::string unit;
};

/// Dataset on disk: a JSON header next to a raw payload file, last listed
/// dimension fastest. c64le stores interleaved float32 real/imag pairs.
struct Container {
  int format_version = 1;
  std::string kind;  ///< echo_cube | iq_trace | wavefront | volume | spectrogram
  std::vector<std::size_t> dims;
  std::vector<ContainerAxis> axes;
  DType dtype = DType::F32LE;
  std::string payload_file;
  std::optional<std::uint64_t> seed;
  std::string provenance;
  nlohmann::json attrs = nlohmann::json::object();
  std::vector<std::uint8_t> payload;

  std::size_t elements() const;
  void validate() const;
};

/// Writes `<header_path>` and the payload beside it. An empty payload_file
/// becomes the header stem plus ".bin".
void write_container(const std::filesystem::path& header_path, Container c);
Container read_container(const std::filesystem::path& header_path);

nlohmann::json header_json(const Container& c);

// Typed conversions. Samples pass through float32.

Container to_container(const EchoCube& cube);
EchoCube echo_cube_from(const Container& c);

Container to_container(const IQTrace& iq);
IQTrace iq_trace_from(const Container& c);

Container to_container(const ChannelMatrix& m, double wavelength);
ChannelMatrix channel_matrix_from(const Container& c);

/// dims [2, nx, ny]: plane 0 is Z, plane 1 the mask.
Container to_container(const QuasiWavefront& wf);
QuasiWavefront wavefront_from(const Container& c);

Container to_container(const VolumeImage& v);
VolumeImage volume_from(const Container& c);

/// dims [frames, bins]; `freq_unit` labels the second axis (Hz or m/s).
Container to_container(const Spectrogram& s, const std::string& freq_unit);
Spectrogram spectrogram_from(const Container& c);

void expect_kind(const Container& c, std::string_view kind);

// ---------------------------------------------------------------------------
// Text exports
// ---------------------------------------------------------------------------

void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud);
void write_ibi_csv(const std::filesystem::path& path, const IBISeries& ibi);
/// Reads beat_time,interval,quality rows written by write_ibi_csv.
IBISeries read_ibi_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace uwb
