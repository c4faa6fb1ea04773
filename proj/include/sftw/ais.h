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

#ifndef SFTW_AIS_H_
#define SFTW_AIS_H_

// AIS track processing: cleaning, geofences, port entries, departures from the
// previous port, berth stays and the port-level effective service time.
//
// Times inside the pipeline are hours since the dataset epoch (UTC midnight of
// the earliest record). Every geofence treats distance == radius as inside.
// Stop and berth episodes are maximal runs of qualifying records; any gap
// longer than gap_break_hours between consecutive records ends a run, and an
// episode lasts from its first to its last qualifying record.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sftw/stats.h"

namespace sftw::ais {

inline constexpr double kEarthRadiusKm = 6371.0;

struct LatLon {
  double lat = 0;
  double lon = 0;
};

// Great-circle distance. Throws std::invalid_argument on coordinates outside
// [-90, 90] x [-180, 180].
double HaversineKm(LatLon a, LatLon b);
// Central angle between two points, in degrees.
double CentralAngleDeg(LatLon a, LatLon b);

struct GeofenceParams {
  LatLon center{-20.31, 118.57};
  double r_frame_deg = 0.5;
  double r_port_km = 60;
  double r_berth_km = 3;
  double v_stop_kn = 2;
  double v_go_kn = 8;
  double min_stop_hours = 6;
  double berth_min_hours = 3;
  double berth_max_hours = 500;
  double min_interval_hours = 0.1;
  double trim = 0.10;
  double gap_break_hours = 12;
  double max_sog_kn = 40;

  // Throws std::invalid_argument when the ordering invariants fail.
  void Validate() const;
};

struct TrackPoint {
  double time = 0;  // hours since epoch
  double lat = 0;
  double lon = 0;
  double sog = 0;  // knots
};

struct VesselSeries {
  std::string vessel_id;
  std::vector<TrackPoint> points;  // strictly increasing time
};

struct CleaningTally {
  int64_t rows = 0;
  int64_t kept = 0;
  int64_t malformed = 0;
  int64_t invalid_coordinates = 0;
  int64_t speed_out_of_range = 0;
  int64_t duplicates = 0;
  std::vector<int64_t> malformed_lines;  // first few, 1-based
};

struct ParsedAis {
  int64_t epoch_unix_seconds = 0;
  std::vector<VesselSeries> vessels;  // sorted by vessel_id
  CleaningTally tally;
};

// Thrown when the input cannot be read as AIS CSV at all.
class AisFormatError : public std::runtime_error {
 public:
  AisFormatError(int64_t line, const std::string& what);
  int64_t line() const { return line_; }

 private:
  int64_t line_;
};

// Seconds since the Unix epoch for "YYYY-MM-DDTHH:MM:SS[.f][Z|+00:00]" (a space
// may replace the T). Non-UTC offsets are applied.
std::optional<double> ParseIsoTimestamp(const std::string& text);
std::string FormatIsoTimestamp(double unix_seconds);

// Reads `vessel_id,timestamp,lat,lon,sog`. Bad rows are skipped and tallied;
// a missing or wrong header throws AisFormatError. Speeds outside
// [0, max_sog_kn] are dropped, duplicate timestamps keep the first row read.
ParsedAis ParseAisCsv(std::istream& in, const GeofenceParams& params = {});

// `vessel_id,ship_type` -> map of ship types.
std::map<std::string, std::string> ParseVesselMetadata(std::istream& in);

struct Episode {
  double start = 0;
  double end = 0;
  size_t first = 0;  // index of the first record
  size_t last = 0;   // index of the last record

  double duration() const { return end - start; }
};

// Maximal runs of records satisfying `qualifies`, split at long gaps, kept
// when they last at least `min_hours`.
template <typename Pred>
std::vector<Episode> FindEpisodes(std::span<const TrackPoint> points,
                                  Pred qualifies, double gap_break_hours,
                                  double min_hours) {
  std::vector<Episode> episodes;
  std::optional<Episode> open;
  auto close = [&] {
    if (open && open->duration() >= min_hours) episodes.push_back(*open);
    open.reset();
  };
  for (size_t k = 0; k < points.size(); ++k) {
    if (!qualifies(points[k])) {
      close();
      continue;
    }
    if (open && points[k].time - points[open->last].time > gap_break_hours) {
      close();
    }
    if (!open) open = Episode{points[k].time, points[k].time, k, k};
    open->end = points[k].time;
    open->last = k;
  }
  close();
  return episodes;
}

double DistanceToCenterKm(const TrackPoint& p, const GeofenceParams& params);

// Stop of at least min_stop_hours at sog <= v_stop inside the coarse frame.
bool IsFrameCaller(const VesselSeries& series, const GeofenceParams& params);

// Instants where the within-r_port indicator switches from 0 to 1.
std::vector<double> DetectPortEntries(const VesselSeries& series,
                                      const GeofenceParams& params);

// Departure from the previous port for the entry at `t_entry`: the last stop
// outside the port geofence (sog < v_stop for min_stop_hours) after the
// vessel's previous exit from the geofence, then the first later record
// faster than v_go before the entry; the stop end when there is none.
// Returns nullopt when no qualifying stop exists.
std::optional<double> DetectDeparture(const VesselSeries& series,
                                      double t_entry,
                                      const GeofenceParams& params);

struct BerthScan {
  std::vector<Episode> blocks;  // duration within [berth_min, berth_max]
  int64_t rejected = 0;         // stays dropped by the duration filter
};

// Stays within r_berth at sog < v_stop lasting at least min_stop_hours.
BerthScan DetectBerthBlocks(const VesselSeries& series,
                            const GeofenceParams& params);

struct Voyage {
  std::string vessel_id;
  double tau = 0;
  double t_entry = 0;
  double berth_start = 0;
  double berth_end = 0;

  double service_hours() const { return berth_end - berth_start; }
  double waiting_hours() const { return berth_start - t_entry; }
};

// Throws std::logic_error if ordering or duration bounds are violated.
void CheckVoyage(const Voyage& voyage, const GeofenceParams& params);

struct VoyageTally {
  int64_t entries = 0;
  int64_t voyages = 0;
  int64_t incomplete_no_departure = 0;
  int64_t no_berth = 0;
  int64_t extra_berth_blocks = 0;   // later valid blocks in the same voyage
  int64_t rejected_berth_blocks = 0;
  int64_t unattributed_berth_blocks = 0;  // before the first observed entry
};

// Voyages of one vessel: each valid berth block goes to the latest entry at
// or before its start, and the earliest such block is the service visit.
std::vector<Voyage> ExtractVoyages(const VesselSeries& series,
                                   const GeofenceParams& params,
                                   VoyageTally& tally);

struct GammaCalibration {
  double gamma = 0;
  int64_t events = 0;
  int64_t intervals = 0;        // consecutive differences
  int64_t intervals_used = 0;   // after the min-interval filter
  int64_t trimmed_each_side = 0;
  bool low_sample = false;      // fewer than kRecommendedGammaEvents
};

inline constexpr int64_t kRecommendedGammaEvents = 10;

// Port-wide berth-start instants -> trimmed mean of the positive consecutive
// gaps above min_interval_hours. Throws std::invalid_argument when no gap
// survives the filter.
GammaCalibration CalibrateGamma(std::span<const double> berth_starts,
                                const GeofenceParams& params = {});

// Mean, median and trimmed mean of the waiting hours.
Summary WaitingStats(std::span<const Voyage> voyages, double trim = 0.10);

struct PipelineResult {
  int64_t epoch_unix_seconds = 0;
  std::vector<Voyage> voyages;  // sorted by (vessel_id, t_entry)
  std::optional<GammaCalibration> calibration;
  CleaningTally cleaning;
  VoyageTally voyage_tally;
  int64_t vessels = 0;
  int64_t frame_callers = 0;
  int64_t type_filtered = 0;
  Summary service;
  Summary waiting;
};

struct PipelineOptions {
  GeofenceParams params;
  // When set, only vessels listed with a ship type containing `ship_type_match`
  // (case-insensitive) are kept.
  std::optional<std::map<std::string, std::string>> metadata;
  std::string ship_type_match = "bulk";
};

PipelineResult RunPipeline(const ParsedAis& parsed,
                           const PipelineOptions& options);

}  // namespace sftw::ais

#endif  // SFTW_AIS_H_
