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

#include "sftw/run_config.h"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "json.hpp"
#include "sftw/report.h"
#include "sftw/text.h"

namespace sftw {
namespace {

double ToDouble(const std::string& key, const std::string& text) {
  std::optional<double> v = ParseDouble(Trim(text));
  if (!v) throw ConfigError(key + ": expected a number, got '" + text + "'");
  return *v;
}

template <typename Int>
Int ToInt(const std::string& key, const std::string& text) {
  std::string t = Trim(text);
  Int value{};
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return value;
}

bool ToBool(const std::string& key, const std::string& text) {
  std::string t = Trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Getter = std::function<std::optional<std::string>(const RunConfig&)>;

ConfigField Number(std::string key, std::string help,
                   double RunConfig::*member) {
  return {key, std::move(help), false,
          [member, key](RunConfig& c, const std::string& v) {
            c.*member = ToDouble(key, v);
          },
          [member](const RunConfig& c) -> std::optional<std::string> {
            return FormatNumber(c.*member);
          }};
}

ConfigField OptionalNumber(std::string key, std::string help,
                           std::optional<double> RunConfig::*member) {
  return {key, std::move(help), false,
          [member, key](RunConfig& c, const std::string& v) {
            c.*member = ToDouble(key, v);
          },
          [member](const RunConfig& c) -> std::optional<std::string> {
            if (!(c.*member)) return std::nullopt;
            return FormatNumber(*(c.*member));
          }};
}

ConfigField Geofence(std::string key, std::string help,
                     double ais::GeofenceParams::*member) {
  return {key, std::move(help), false,
          [member, key](RunConfig& c, const std::string& v) {
            c.geofence.*member = ToDouble(key, v);
          },
          [member](const RunConfig& c) -> std::optional<std::string> {
            return FormatNumber(c.geofence.*member);
          }};
}

ConfigField Text(std::string key, std::string help,
                 std::string RunConfig::*member) {
  return {key, std::move(help), false,
          [member](RunConfig& c, const std::string& v) { c.*member = Trim(v); },
          [member](const RunConfig& c) -> std::optional<std::string> {
            if ((c.*member).empty()) return std::nullopt;
            return c.*member;
          }};
}

std::vector<ConfigField> BuildFields() {
  std::vector<ConfigField> f;
  f.push_back(Text("input", "input file", &RunConfig::input));
  f.push_back(Text("out_dir", "output directory", &RunConfig::out_dir));
  f.push_back(Text("metadata", "vessel metadata CSV (vessel_id,ship_type)",
                   &RunConfig::metadata));
  f.push_back(Text("ship_type", "ship type substring kept with --metadata",
                   &RunConfig::ship_type));
  f.push_back({"center_lat", "port centre latitude", false,
               [](RunConfig& c, const std::string& v) {
                 c.geofence.center.lat = ToDouble("center_lat", v);
               },
               [](const RunConfig& c) -> std::optional<std::string> {
                 return FormatNumber(c.geofence.center.lat);
               }});
  f.push_back({"center_lon", "port centre longitude", false,
               [](RunConfig& c, const std::string& v) {
                 c.geofence.center.lon = ToDouble("center_lon", v);
               },
               [](const RunConfig& c) -> std::optional<std::string> {
                 return FormatNumber(c.geofence.center.lon);
               }});
  f.push_back(Geofence("r_frame", "coarse frame radius, degrees",
                       &ais::GeofenceParams::r_frame_deg));
  f.push_back(Geofence("r_port", "port geofence radius, km",
                       &ais::GeofenceParams::r_port_km));
  f.push_back(Geofence("r_berth", "berth radius, km",
                       &ais::GeofenceParams::r_berth_km));
  f.push_back(Geofence("v_stop", "stop speed, knots",
                       &ais::GeofenceParams::v_stop_kn));
  f.push_back(Geofence("v_go", "departure acceleration speed, knots",
                       &ais::GeofenceParams::v_go_kn));
  f.push_back(Geofence("min_stop_hours", "minimum stop duration, hours",
                       &ais::GeofenceParams::min_stop_hours));
  f.push_back(Geofence("berth_min", "shortest accepted berth stay, hours",
                       &ais::GeofenceParams::berth_min_hours));
  f.push_back(Geofence("berth_max", "longest accepted berth stay, hours",
                       &ais::GeofenceParams::berth_max_hours));
  f.push_back(Geofence("min_interval",
                       "smallest berth-start interval used for gamma, hours",
                       &ais::GeofenceParams::min_interval_hours));
  f.push_back(Geofence("trim", "trimmed-mean fraction per tail",
                       &ais::GeofenceParams::trim));
  f.push_back(Geofence("gap_break", "record gap that ends an episode, hours",
                       &ais::GeofenceParams::gap_break_hours));
  f.push_back(Geofence("max_sog", "largest plausible speed, knots",
                       &ais::GeofenceParams::max_sog_kn));
  f.push_back(OptionalNumber("gamma", "effective service time, hours",
                             &RunConfig::gamma));
  f.push_back(OptionalNumber("t0", "completion boundary before the first player",
                             &RunConfig::t0));
  f.push_back(Number("eps_tie", "tie tolerance", &RunConfig::eps_tie));
  f.push_back(Number("eps_green", "gap below an open upper end",
                     &RunConfig::eps_green));
  f.push_back(Number("eps_probe", "deviation probe offset",
                     &RunConfig::eps_probe));
  f.push_back(Text("window_split", "none or day", &RunConfig::window_split));
  f.push_back(Number("bin_width", "histogram bin width, hours",
                     &RunConfig::bin_width));
  f.push_back(Text("types", "comma-separated types", &RunConfig::types));
  f.push_back({"verify", "check the green profile for profitable deviations",
               true,
               [](RunConfig& c, const std::string& v) {
                 c.verify = ToBool("verify", v);
               },
               [](const RunConfig& c) -> std::optional<std::string> {
                 return c.verify ? "true" : "false";
               }});
  f.push_back({"players", "number of players", false,
               [](RunConfig& c, const std::string& v) {
                 c.players = ToInt<int>("players", v);
               },
               [](const RunConfig& c) -> std::optional<std::string> {
                 return std::to_string(c.players);
               }});
  f.push_back({"samples", "Monte Carlo samples", false,
               [](RunConfig& c, const std::string& v) {
                 c.samples = ToInt<int64_t>("samples", v);
               },
               [](const RunConfig& c) -> std::optional<std::string> {
                 return std::to_string(c.samples);
               }});
  f.push_back({"seed", "random seed", false,
               [](RunConfig& c, const std::string& v) {
                 c.seed = ToInt<uint64_t>("seed", v);
               },
               [](const RunConfig& c) -> std::optional<std::string> {
                 return std::to_string(c.seed);
               }});
  f.push_back({"threads", "worker threads, 0 for all cores", false,
               [](RunConfig& c, const std::string& v) {
                 c.threads = ToInt<int>("threads", v);
               },
               // Results do not depend on the thread count.
               [](const RunConfig&) -> std::optional<std::string> {
                 return std::nullopt;
               }});
  f.push_back(Text("shift", "comma-separated arrival delays, hours",
                   &RunConfig::shift));
  f.push_back(OptionalNumber("window_lo", "lowest type that delays",
                             &RunConfig::window_lo));
  f.push_back(OptionalNumber("window_hi", "highest type that delays",
                             &RunConfig::window_hi));
  f.push_back(Number("prior_lo", "lower end of the uniform prior",
                     &RunConfig::prior_lo));
  f.push_back(Number("prior_hi", "upper end of the uniform prior",
                     &RunConfig::prior_hi));
  f.push_back(Number("own_type", "type of the scanning player",
                     &RunConfig::own_type));
  f.push_back(Text("grid", "comma-separated candidate arrivals",
                   &RunConfig::grid));
  return f;
}

}  // namespace

std::string ConfigField::flag() const {
  std::string name = key;
  std::replace(name.begin(), name.end(), '_', '-');
  return "--" + name;
}

const std::vector<ConfigField>& ConfigFields() {
  static const std::vector<ConfigField> fields = BuildFields();
  return fields;
}

const ConfigField& FindField(const std::string& key) {
  for (const ConfigField& f : ConfigFields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

std::map<std::string, std::string> ParseConfigFile(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (Trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    std::string key = Trim(line.substr(0, eq));
    FindField(key);
    if (!values.emplace(key, Trim(line.substr(eq + 1))).second) {
      throw ConfigError("config key '" + key + "' given twice");
    }
  }
  return values;
}

RunConfig ResolveConfig(std::span<const std::string> allowed,
                        const std::map<std::string, std::string>& file_values,
                        const std::map<std::string, std::string>& flag_values) {
  RunConfig config;
  for (const auto& [key, value] : file_values) {
    FindField(key).set(config, value);
  }
  for (const auto& [key, value] : flag_values) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(FindField(key).flag() + " does not apply here");
    }
    FindField(key).set(config, value);
  }
  return config;
}

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  EVP_DigestFinal_ex(ctx, digest, &size);
  EVP_MD_CTX_free(ctx);
  static const char* kHex = "0123456789abcdef";
  std::string hex;
  for (unsigned int k = 0; k < size; ++k) {
    hex += kHex[digest[k] >> 4];
    hex += kHex[digest[k] & 15];
  }
  return hex;
}

std::string ManifestJson(const std::string& command, const RunConfig& config,
                         std::span<const std::string> keys,
                         std::span<const std::filesystem::path> inputs) {
  nlohmann::ordered_json j;
  j["command"] = command;
  nlohmann::ordered_json resolved = nlohmann::ordered_json::object();
  std::vector<std::string> sorted(keys.begin(), keys.end());
  std::sort(sorted.begin(), sorted.end());
  for (const std::string& key : sorted) {
    std::optional<std::string> v = FindField(key).get(config);
    if (v) resolved[key] = *v;
  }
  j["config"] = resolved;
  nlohmann::ordered_json digests = nlohmann::ordered_json::array();
  for (const auto& path : inputs) {
    digests.push_back({{"path", path.generic_string()},
                       {"sha256", Sha256File(path)}});
  }
  j["inputs"] = digests;
  return j.dump(2) + "\n";
}

}  // namespace sftw
