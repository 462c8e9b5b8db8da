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

#include "config.hpp"

#include "uwbsense/container.hpp"

namespace uwb::cli {

using nlohmann::json;

ConfigNode::ConfigNode(const json& value, std::string path) : value_(value), path_(std::move(path)) {
  if (value_.is_null()) value_ = json::object();
  if (!value_.is_object())
    throw InvalidArgument("config entry '" + (path_.empty() ? std::string("<root>") : path_) + "' must be an object");
}

bool ConfigNode::has(const std::string& key) const { return value_.contains(key) && !value_.at(key).is_null(); }

cplx ConfigNode::get_complex(const std::string& key, cplx fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  const auto& v = value_.at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw InvalidArgument("config key '" + qualified(key) + "' must be a number or [re, im]");
}

ConfigNode& ConfigNode::child(const std::string& key) {
  used_.insert(key);
  owned_.emplace_back(has(key) ? value_.at(key) : json::object(), qualified(key));
  return owned_.back();
}

std::vector<ConfigNode*> ConfigNode::children(const std::string& key) {
  used_.insert(key);
  std::vector<ConfigNode*> out;
  if (!has(key)) return out;
  const auto& arr = value_.at(key);
  if (!arr.is_array()) throw InvalidArgument("config key '" + qualified(key) + "' must be an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    owned_.emplace_back(arr[i], qualified(key) + "[" + std::to_string(i) + "]");
    out.push_back(&owned_.back());
  }
  return out;
}

void ConfigNode::finish() const {
  for (const auto& item : value_.items())
    if (!used_.count(item.key())) throw InvalidArgument("unknown config key '" + qualified(item.key()) + "'");
  for (const auto& c : owned_) c.finish();
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace uwb::cli
