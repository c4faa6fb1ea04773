// Copyright 2026 The SFTW Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SFTW_RUN_CONFIG_H_
#define SFTW_RUN_CONFIG_H_

// Resolved settings of one command run. Every field has a snake_case key used
// in config files and a matching --kebab-case flag. Values are resolved as
// flag > config file > built-in default.
//
// Config files are flat text: one `key = value` per line, '#' starts a
// comment, blank lines are ignored.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sftw/ais.h"
#include "sftw/queue.h"

namespace sftw {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input;
  std::string out_dir;
  std::string metadata;
  std::string ship_type = "bulk";
  ais::GeofenceParams geofence;

  std::optional<double> gamma;
  std::optional<double> t0;
  double eps_tie = kDefaultTieTolerance;
  double eps_green = 1e-6;
  double eps_probe = 1e-6;
  std::string window_split = "none";
  double bin_width = 0.5;
  std::string types;
  bool verify = false;

  int players = 2;
  int64_t samples = 100000;
  uint64_t seed = 1;
  int threads = 0;
  std::string shift = "0.05,0.1,0.2";
  std::optional<double> window_lo;
  std::optional<double> window_hi;
  double prior_lo = 0;
  double prior_hi = 1;
  double own_type = 0.3;
  std::string grid;
};

struct ConfigField {
  std::string key;
  std::string help;
  bool is_switch = false;  // flag without a value
  std::function<void(RunConfig&, const std::string&)> set;
  // Resolved value as text, or nullopt when unset.
  std::function<std::optional<std::string>(const RunConfig&)> get;

  std::string flag() const;
};

const std::vector<ConfigField>& ConfigFields();
const ConfigField& FindField(const std::string& key);

// Reads `key = value` lines. Throws ConfigError on unknown keys, repeated
// keys or lines without '='.
std::map<std::string, std::string> ParseConfigFile(std::istream& in);

// Applies config-file values, then flag values, on top of the defaults.
// Only keys in `allowed` may appear on the command line; the file may name
// any known key.
RunConfig ResolveConfig(std::span<const std::string> allowed,
                        const std::map<std::string, std::string>& file_values,
                        const std::map<std::string, std::string>& flag_values);

// Lower-case hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path& path);

// run-manifest.json: command, the resolved values of `keys`, and the digest
// of each input file.
std::string ManifestJson(const std::string& command, const RunConfig& config,
                         std::span<const std::string> keys,
                         std::span<const std::filesystem::path> inputs);

}  // namespace sftw

#endif  // SFTW_RUN_CONFIG_H_
