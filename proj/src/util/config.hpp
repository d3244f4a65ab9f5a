// Copyright 2026 The Clavier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLAVIER_UTIL_CONFIG_HPP_
#define CLAVIER_UTIL_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace clavier {

// Flat key/value configuration. Files use INI-style sections:
//
//   [learn]
//   batch_size = 2048   # comment
//
// which defines key "learn.batch_size". Command line overrides use the
// dotted form directly ("learn.batch_size=1024"). Only explicitly set keys
// participate in the config hash; built-in defaults live at the call sites.
class Config {
 public:
  Config() = default;

  void load_file(const std::string& path);
  void parse_text(const std::string& text, const std::string& origin);
  // "a.b=value" (value may contain '='); malformed -> UsageError.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  double f64(const std::string& key, double fallback) const;
  int64_t i64(const std::string& key, int64_t fallback) const;
  bool boolean(const std::string& key, bool fallback) const;

  // FNV-1a over the sorted explicit entries; stable across runs.
  uint64_t hash() const;
  std::string hash_hex() const;
  std::vector<std::pair<std::string, std::string>> entries() const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace clavier

#endif  // CLAVIER_UTIL_CONFIG_HPP_
