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
#include <optional>
#include <vector>

#include "uwbsense/container.hpp"

namespace uwb::cli {

/// Row-major 2D grid reduced from a container.
struct Raster {
  std::size_t rows = 0, cols = 0;
  std::vector<double> values;
};

/// Spectrograms map bins to rows and frames to columns; wavefronts and
/// volume slices map x to rows and y to columns. Volumes default to the
/// slice holding the global maximum.
Raster raster_from(const Container& c, std::optional<std::size_t> slice);

/// 20 log10(|v| / max) clipped at db_floor, mapped linearly onto 0..255,
/// written as binary P5.
std::vector<std::uint8_t> to_pgm(const Raster& r, double db_floor);

}  // namespace uwb::cli
