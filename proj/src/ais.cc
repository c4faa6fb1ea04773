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

#include "sftw/ais.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string_view>
#include <tuple>
#include <unordered_map>

#include "sftw/text.h"

namespace sftw::ais {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr size_t kMaxReportedLines = 20;

void CheckCoordinate(LatLon p) {
  if (!(p.lat >= -90 && p.lat <= 90) || !(p.lon >= -180 && p.lon <= 180)) {
    throw std::invalid_argument("coordinate out of range: (" +
                                std::to_string(p.lat) + ", " +
                                std::to_string(p.lon) + ")");
  }
}

// Haversine central angle in radians.
double CentralAngle(LatLon a, LatLon b) {
  CheckCoordinate(a);
  CheckCoordinate(b);
  const double dlat = (b.lat - a.lat) * kDegToRad;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double h = std::pow(std::sin(dlat / 2), 2) +
                   std::cos(a.lat * kDegToRad) * std::cos(b.lat * kDegToRad) *
                       std::pow(std::sin(dlon / 2), 2);
  return 2 * std::asin(std::min(1.0, std::sqrt(h)));
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool InsidePort(const TrackPoint& p, const GeofenceParams& params) {
  return DistanceToCenterKm(p, params) <= params.r_port_km;
}

}  // namespace

double HaversineKm(LatLon a, LatLon b) {
  return kEarthRadiusKm * CentralAngle(a, b);
}

double CentralAngleDeg(LatLon a, LatLon b) {
  return CentralAngle(a, b) / kDegToRad;
}

void GeofenceParams::Validate() const {
  if (!(r_berth_km < r_port_km)) {
    throw std::invalid_argument("r_berth must be smaller than r_port");
  }
  if (!(v_stop_kn < v_go_kn)) {
    throw std::invalid_argument("v_stop must be smaller than v_go");
  }
  if (!(berth_min_hours < berth_max_hours)) {
    throw std::invalid_argument("berth_min must be smaller than berth_max");
  }
  if (!(trim >= 0 && trim < 0.5)) {
    throw std::invalid_argument("trim must lie in [0, 0.5)");
  }
  if (!(r_frame_deg > 0) || !(min_stop_hours > 0) || !(gap_break_hours > 0) ||
      !(min_interval_hours >= 0)) {
    throw std::invalid_argument("geofence thresholds must be positive");
  }
}

AisFormatError::AisFormatError(int64_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

std::optional<double> ParseIsoTimestamp(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  int consumed = 0;
  char sep = 0;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &sep, &h,
                  &mi, &consumed) != 6 ||
      (sep != 'T' && sep != ' ')) {
    return std::nullopt;
  }
  std::string rest = text.substr(consumed);
  double seconds = 0;
  if (!rest.empty() && rest[0] == ':') {
    size_t k = 1;
    while (k < rest.size() && (std::isdigit(static_cast<unsigned char>(rest[k])) ||
                               rest[k] == '.')) {
      ++k;
    }
    auto parsed = ParseDouble(rest.substr(1, k - 1));
    if (!parsed || *parsed < 0 || *parsed >= 61) return std::nullopt;
    seconds = *parsed;
    rest = rest.substr(k);
  }
  double offset = 0;
  if (rest == "Z" || rest.empty()) {
    offset = 0;
  } else if ((rest[0] == '+' || rest[0] == '-') && rest.size() == 6 &&
             rest[3] == ':') {
    auto oh = ParseDouble(rest.substr(1, 2));
    auto om = ParseDouble(rest.substr(4, 2));
    if (!oh || !om) return std::nullopt;
    offset = (*oh * 3600 + *om * 60) * (rest[0] == '+' ? 1 : -1);
  } else {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || h < 0 || mi < 0) return std::nullopt;
  const auto days = std::chrono::sys_days(ymd).time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 +
         seconds - offset;
}

std::string FormatIsoTimestamp(double unix_seconds) {
  using namespace std::chrono;
  const auto total = static_cast<int64_t>(std::llround(unix_seconds));
  const int64_t day = (total >= 0 ? total : total - 86399) / 86400;
  const int64_t in_day = total - day * 86400;
  const year_month_day ymd{sys_days{days{day}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(in_day / 3600),
                static_cast<int>(in_day / 60 % 60),
                static_cast<int>(in_day % 60));
  return buf;
}

ParsedAis ParseAisCsv(std::istream& in, const GeofenceParams& params) {
  ParsedAis out;
  std::string line;
  int64_t line_no = 0;

  // Header.
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) break;
  }
  if (Trim(line).empty()) return out;
  std::vector<std::string> header = SplitCsv(line);
  std::unordered_map<std::string, size_t> column;
  for (size_t k = 0; k < header.size(); ++k) column[Lower(header[k])] = k;
  const char* required[] = {"vessel_id", "timestamp", "lat", "lon", "sog"};
  size_t index[5];
  for (int k = 0; k < 5; ++k) {
    auto it = column.find(required[k]);
    if (it == column.end()) {
      throw AisFormatError(line_no, std::string("missing column '") +
                                        required[k] +
                                        "'; expected header "
                                        "vessel_id,timestamp,lat,lon,sog");
    }
    index[k] = it->second;
  }
  const size_t width = *std::max_element(std::begin(index), std::end(index)) + 1;

  struct Row {
    double unix_seconds;
    TrackPoint point;
  };
  std::map<std::string, std::vector<Row>> rows;
  auto malformed = [&] {
    ++out.tally.malformed;
    if (out.tally.malformed_lines.size() < kMaxReportedLines) {
      out.tally.malformed_lines.push_back(line_no);
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    ++out.tally.rows;
    std::vector<std::string> f = SplitCsv(line);
    if (f.size() < width || f[index[0]].empty()) {
      malformed();
      continue;
    }
    auto ts = ParseIsoTimestamp(f[index[1]]);
    auto lat = ParseDouble(f[index[2]]);
    auto lon = ParseDouble(f[index[3]]);
    auto sog = ParseDouble(f[index[4]]);
    if (!ts || !lat || !lon || !sog) {
      malformed();
      continue;
    }
    if (*lat < -90 || *lat > 90 || *lon < -180 || *lon > 180) {
      ++out.tally.invalid_coordinates;
      continue;
    }
    if (*sog < 0 || *sog > params.max_sog_kn) {
      ++out.tally.speed_out_of_range;
      continue;
    }
    rows[f[index[0]]].push_back({*ts, {0, *lat, *lon, *sog}});
  }

  if (rows.empty()) return out;
  double earliest = std::numeric_limits<double>::infinity();
  for (const auto& [id, list] : rows) {
    for (const Row& r : list) earliest = std::min(earliest, r.unix_seconds);
  }
  out.epoch_unix_seconds =
      static_cast<int64_t>(std::floor(earliest / 86400.0)) * 86400;

  for (auto& [id, list] : rows) {
    std::stable_sort(list.begin(), list.end(), [](const Row& a, const Row& b) {
      return a.unix_seconds < b.unix_seconds;
    });
    VesselSeries series;
    series.vessel_id = id;
    for (size_t k = 0; k < list.size(); ++k) {
      if (k > 0 && list[k].unix_seconds == list[k - 1].unix_seconds) {
        ++out.tally.duplicates;
        continue;
      }
      TrackPoint p = list[k].point;
      p.time = (list[k].unix_seconds - out.epoch_unix_seconds) / 3600.0;
      series.points.push_back(p);
    }
    out.tally.kept += static_cast<int64_t>(series.points.size());
    out.vessels.push_back(std::move(series));
  }
  return out;
}

std::map<std::string, std::string> ParseVesselMetadata(std::istream& in) {
  std::map<std::string, std::string> types;
  std::string line;
  int64_t line_no = 0;
  size_t id_col = 0, type_col = 1;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::vector<std::string> f = SplitCsv(line);
    if (!have_header) {
      auto id = std::find(f.begin(), f.end(), "vessel_id");
      auto type = std::find(f.begin(), f.end(), "ship_type");
      if (id == f.end() || type == f.end()) {
        throw AisFormatError(line_no,
                             "expected metadata header vessel_id,ship_type");
      }
      id_col = id - f.begin();
      type_col = type - f.begin();
      have_header = true;
      continue;
    }
    if (f.size() <= std::max(id_col, type_col)) {
      throw AisFormatError(line_no, "metadata row has too few columns");
    }
    types.emplace(f[id_col], f[type_col]);
  }
  return types;
}

double DistanceToCenterKm(const TrackPoint& p, const GeofenceParams& params) {
  return HaversineKm({p.lat, p.lon}, params.center);
}

bool IsFrameCaller(const VesselSeries& series, const GeofenceParams& params) {
  auto in_frame_stopped = [&](const TrackPoint& p) {
    return p.sog <= params.v_stop_kn &&
           CentralAngleDeg({p.lat, p.lon}, params.center) <= params.r_frame_deg;
  };
  return !FindEpisodes(series.points, in_frame_stopped, params.gap_break_hours,
                       params.min_stop_hours)
              .empty();
}

std::vector<double> DetectPortEntries(const VesselSeries& series,
                                      const GeofenceParams& params) {
  std::vector<double> entries;
  for (size_t k = 1; k < series.points.size(); ++k) {
    if (!InsidePort(series.points[k - 1], params) &&
        InsidePort(series.points[k], params)) {
      entries.push_back(series.points[k].time);
    }
  }
  return entries;
}

std::optional<double> DetectDeparture(const VesselSeries& series,
                                      double t_entry,
                                      const GeofenceParams& params) {
  const auto& pts = series.points;
  const auto entry_it =
      std::lower_bound(pts.begin(), pts.end(), t_entry,
                       [](const TrackPoint& p, double t) { return p.time < t; });
  const size_t entry = static_cast<size_t>(entry_it - pts.begin());
  // Outside segment between the previous exit and this entry.
  size_t begin = entry;
  while (begin > 0 && !InsidePort(pts[begin - 1], params)) --begin;
  std::span<const TrackPoint> segment(pts.data() + begin, entry - begin);

  auto stopped = [&](const TrackPoint& p) { return p.sog < params.v_stop_kn; };
  std::vector<Episode> stops = FindEpisodes(
      segment, stopped, params.gap_break_hours, params.min_stop_hours);
  if (stops.empty()) return std::nullopt;
  const Episode& last = stops.back();
  for (size_t k = last.last + 1; k < segment.size(); ++k) {
    if (segment[k].sog > params.v_go_kn) return segment[k].time;
  }
  return last.end;
}

BerthScan DetectBerthBlocks(const VesselSeries& series,
                            const GeofenceParams& params) {
  auto at_berth = [&](const TrackPoint& p) {
    return p.sog < params.v_stop_kn &&
           DistanceToCenterKm(p, params) <= params.r_berth_km;
  };
  BerthScan scan;
  for (const Episode& e :
       FindEpisodes(series.points, at_berth, params.gap_break_hours,
                    params.min_stop_hours)) {
    if (e.duration() < params.berth_min_hours ||
        e.duration() > params.berth_max_hours) {
      ++scan.rejected;
    } else {
      scan.blocks.push_back(e);
    }
  }
  return scan;
}

void CheckVoyage(const Voyage& v, const GeofenceParams& params) {
  if (!(v.tau < v.t_entry && v.t_entry <= v.berth_start &&
        v.berth_start < v.berth_end)) {
    throw std::logic_error("voyage of " + v.vessel_id +
                           " violates tau < entry <= berth start < berth end");
  }
  if (v.service_hours() < params.berth_min_hours ||
      v.service_hours() > params.berth_max_hours) {
    throw std::logic_error("voyage of " + v.vessel_id +
                           " has service time outside the berth bounds");
  }
}

std::vector<Voyage> ExtractVoyages(const VesselSeries& series,
                                   const GeofenceParams& params,
                                   VoyageTally& tally) {
  const std::vector<double> entries = DetectPortEntries(series, params);
  const BerthScan berths = DetectBerthBlocks(series, params);
  tally.entries += static_cast<int64_t>(entries.size());
  tally.rejected_berth_blocks += berths.rejected;

  std::vector<std::optional<Episode>> service(entries.size());
  for (const Episode& block : berths.blocks) {
    auto it = std::upper_bound(entries.begin(), entries.end(), block.start);
    if (it == entries.begin()) {
      ++tally.unattributed_berth_blocks;
      continue;
    }
    auto& slot = service[static_cast<size_t>(it - entries.begin()) - 1];
    if (slot) {
      ++tally.extra_berth_blocks;
    } else {
      slot = block;
    }
  }

  std::vector<Voyage> voyages;
  for (size_t k = 0; k < entries.size(); ++k) {
    std::optional<double> tau = DetectDeparture(series, entries[k], params);
    if (!tau) {
      ++tally.incomplete_no_departure;
      continue;
    }
    if (!service[k]) {
      ++tally.no_berth;
      continue;
    }
    Voyage v{series.vessel_id, *tau, entries[k], service[k]->start,
             service[k]->end};
    CheckVoyage(v, params);
    voyages.push_back(std::move(v));
  }
  tally.voyages += static_cast<int64_t>(voyages.size());
  return voyages;
}

GammaCalibration CalibrateGamma(std::span<const double> berth_starts,
                                const GeofenceParams& params) {
  GammaCalibration cal;
  std::vector<double> starts(berth_starts.begin(), berth_starts.end());
  std::sort(starts.begin(), starts.end());
  cal.events = static_cast<int64_t>(starts.size());
  cal.low_sample = cal.events < kRecommendedGammaEvents;
  std::vector<double> gaps;
  for (size_t k = 1; k < starts.size(); ++k) {
    ++cal.intervals;
    const double gap = starts[k] - starts[k - 1];
    if (gap > params.min_interval_hours) gaps.push_back(gap);
  }
  if (gaps.empty()) {
    throw std::invalid_argument(
        "too few berth-start events to calibrate gamma (" +
        std::to_string(cal.events) + " events, no usable interval)");
  }
  cal.intervals_used = static_cast<int64_t>(gaps.size());
  cal.trimmed_each_side =
      static_cast<int64_t>(std::floor(params.trim * gaps.size()));
  cal.gamma = TrimmedMean(gaps, params.trim);
  return cal;
}

Summary WaitingStats(std::span<const Voyage> voyages, double trim) {
  std::vector<double> waits;
  waits.reserve(voyages.size());
  for (const Voyage& v : voyages) waits.push_back(v.waiting_hours());
  return Summarize(waits, trim);
}

PipelineResult RunPipeline(const ParsedAis& parsed,
                           const PipelineOptions& options) {
  const GeofenceParams& params = options.params;
  params.Validate();
  PipelineResult result;
  result.epoch_unix_seconds = parsed.epoch_unix_seconds;
  result.cleaning = parsed.tally;
  const std::string match = Lower(options.ship_type_match);
  for (const VesselSeries& series : parsed.vessels) {
    ++result.vessels;
    if (options.metadata) {
      auto it = options.metadata->find(series.vessel_id);
      if (it == options.metadata->end() ||
          Lower(it->second).find(match) == std::string::npos) {
        ++result.type_filtered;
        continue;
      }
    }
    if (!IsFrameCaller(series, params)) continue;
    ++result.frame_callers;
    std::vector<Voyage> voyages =
        ExtractVoyages(series, params, result.voyage_tally);
    result.voyages.insert(result.voyages.end(), voyages.begin(), voyages.end());
  }
  std::sort(result.voyages.begin(), result.voyages.end(),
            [](const Voyage& a, const Voyage& b) {
              return std::tie(a.vessel_id, a.t_entry) <
                     std::tie(b.vessel_id, b.t_entry);
            });

  std::vector<double> starts, service;
  for (const Voyage& v : result.voyages) {
    starts.push_back(v.berth_start);
    service.push_back(v.service_hours());
  }
  try {
    result.calibration = CalibrateGamma(starts, params);
  } catch (const std::invalid_argument&) {
    result.calibration.reset();
  }
  result.service = Summarize(service, params.trim);
  result.waiting = WaitingStats(result.voyages, params.trim);
  return result;
}

}  // namespace sftw::ais
