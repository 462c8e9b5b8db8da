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

#include <deque>
#include <nlohmann/json.hpp>
#include <set>
#include <string>
#include <vector>

#include "uwbsense/errors.hpp"
#include "uwbsense/signal.hpp"

namespace uwb::cli {

/// Read-once view over a JSON config object. Every key that is read is
/// recorded; finish() rejects whatever was never read.
class ConfigNode {
 public:
  ConfigNode(const nlohmann::json& value, std::string path);

  bool has(const std::string& key) const;

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) {
      used_.insert(key);
      return fallback;
    }
    return require<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    used_.insert(key);
    if (!has(key)) throw InvalidArgument("missing config key '" + qualified(key) + "'");
    try {
      return value_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InvalidArgument("config key '" + qualified(key) + "' has the wrong type");
    }
  }

  cplx get_complex(const std::string& key, cplx fallback);

  /// Nested object; an absent key yields an empty object.
  ConfigNode& child(const std::string& key);
  /// Array of objects; an absent key yields an empty list.
  std::vector<ConfigNode*> children(const std::string& key);

  /// Throws InvalidArgument naming the first unread key, recursively.
  void finish() const;

  const std::string& path() const { return path_; }

 private:
  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  nlohmann::json value_;
  std::string path_;
  std::set<std::string> used_;
  std::deque<ConfigNode> owned_;
};

/// Loads a config file; an empty path gives an empty object.
nlohmann::json load_config(const std::string& path);

}  // namespace uwb::cli
