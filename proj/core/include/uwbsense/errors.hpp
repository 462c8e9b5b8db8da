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

#include <stdexcept>
#include <string>

namespace uwb {

// Error taxonomy. The command line front end maps each class onto a
// process exit code (2 config, 3 I/O, 4 numerical, 5 domain precondition).

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments, shapes or configuration values.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Solver breakdown, non-finite data, non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Input is well formed but violates a physical or statistical
/// precondition of the method (record too short, no periodicity, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace uwb
