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
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ais_fixtures.h"
#include "doctest.h"

namespace sftw::ais {
namespace {

using doctest::Approx;
using testing::StandardCall;
using testing::TrackBuilder;

const GeofenceParams kParams;

TEST_CASE("haversine") {
  LatLon c{-20.31, 118.57};
  CHECK(HaversineKm(c, c) == 0);
  CHECK(HaversineKm(c, {-19.31, 118.57}) ==
        Approx(std::numbers::pi * 6371 / 180).epsilon(1e-9));
  CHECK(HaversineKm({0, 0}, {0, 180}) == Approx(std::numbers::pi * 6371));
  CHECK(HaversineKm({10, 20}, {-30, 40}) == HaversineKm({-30, 40}, {10, 20}));
  CHECK(HaversineKm({0, 0}, {0, 1e-9}) > 0);
  CHECK_THROWS_AS(HaversineKm({91, 0}, c), std::invalid_argument);
  CHECK_THROWS_AS(HaversineKm(c, {0, -181}), std::invalid_argument);
  CHECK(CentralAngleDeg(c, {-19.81, 118.57}) == Approx(0.5));
}

TEST_CASE("timestamps") {
  CHECK(*ParseIsoTimestamp("1970-01-02T00:00:00Z") == 86400);
  CHECK(*ParseIsoTimestamp("2024-03-01 12:30:00") ==
        *ParseIsoTimestamp("2024-03-01T12:30:00+00:00"));
  CHECK(*ParseIsoTimestamp("2024-03-01T14:30:00+02:00") ==
        *ParseIsoTimestamp("2024-03-01T12:30:00Z"));
  CHECK(*ParseIsoTimestamp("2024-03-01T12:30:00.5Z") ==
        *ParseIsoTimestamp("2024-03-01T12:30:00Z") + 0.5);
  CHECK_FALSE(ParseIsoTimestamp("2024-13-01T00:00:00Z"));
  CHECK_FALSE(ParseIsoTimestamp("yesterday"));
  CHECK(FormatIsoTimestamp(86400 + 3600.0 * 5.5) == "1970-01-02T05:30:00Z");
}

TEST_CASE("parsing and cleaning") {
  std::istringstream in(
      "vessel_id,timestamp,lat,lon,sog\n"
      "B,2024-01-01T03:00:00Z,-20.0,118.0,1.0\n"
      "A,2024-01-01T02:00:00Z,-20.0,118.0,55\n"
      "A,2024-01-01T01:00:00Z,-20.0,118.0,1.0\n"
      "A,2024-01-01T00:00:00Z,-20.0,118.0,3.0\n"
      "A,2024-01-01T01:00:00Z,-20.0,118.0,9.0\n"
      "A,not-a-time,-20.0,118.0,1.0\n"
      "A,2024-01-01T04:00:00Z,-95.0,118.0,1.0\n"
      "A,2024-01-01T05:00:00Z,-20.0\n"
      "B,2024-01-01T04:00:00Z,-20.0,118.0,-1\n"
      "\n");
  ParsedAis parsed = ParseAisCsv(in, kParams);
  CHECK(parsed.epoch_unix_seconds == *ParseIsoTimestamp("2024-01-01T00:00:00Z"));
  CHECK(parsed.tally.rows == 9);
  CHECK(parsed.tally.speed_out_of_range == 2);
  CHECK(parsed.tally.duplicates == 1);
  CHECK(parsed.tally.malformed == 2);
  CHECK(parsed.tally.malformed_lines == std::vector<int64_t>{7, 9});
  CHECK(parsed.tally.invalid_coordinates == 1);
  REQUIRE(parsed.vessels.size() == 2);
  const VesselSeries& a = parsed.vessels[0];
  CHECK(a.vessel_id == "A");
  REQUIRE(a.points.size() == 2);
  CHECK(a.points[0].time == 0);
  CHECK(a.points[1].time == 1);
  CHECK(a.points[1].sog == 1.0);  // first row read wins
  CHECK(parsed.tally.kept == 3);

  std::istringstream empty("");
  CHECK(ParseAisCsv(empty).vessels.empty());
  std::istringstream bad("id,when\n1,2\n");
  try {
    ParseAisCsv(bad);
    FAIL("expected AisFormatError");
  } catch (const AisFormatError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("vessel metadata") {
  std::istringstream in("vessel_id,ship_type\nA,Bulk Carrier\nB,Tanker\n");
  auto m = ParseVesselMetadata(in);
  CHECK(m.at("A") == "Bulk Carrier");
  CHECK(m.size() == 2);
  std::istringstream bad("a,b\n");
  CHECK_THROWS_AS(ParseVesselMetadata(bad), AisFormatError);
}

TEST_CASE("frame membership") {
  const double km = 0.2 * testing::kKmPerDegree;
  CHECK(IsFrameCaller(TrackBuilder("s").Stay(0, 8, km, 0).series(), kParams));
  CHECK_FALSE(
      IsFrameCaller(TrackBuilder("s").Stay(0, 4, km, 0).series(), kParams));
  CHECK(IsFrameCaller(TrackBuilder("s").Stay(0, 7, km, 1.5).series(), kParams));
  // Exactly on the stop speed still counts in the frame.
  CHECK(IsFrameCaller(TrackBuilder("s").Stay(0, 7, km, 2.0).series(), kParams));
  CHECK_FALSE(IsFrameCaller(
      TrackBuilder("s").Stay(0, 8, 0.6 * testing::kKmPerDegree, 0).series(),
      kParams));
  // A 13 h gap splits the stop into two short pieces.
  CHECK_FALSE(IsFrameCaller(
      TrackBuilder("s").Stay(0, 4, km, 0).Stay(17, 21, km, 0).series(),
      kParams));
}

TEST_CASE("port entries") {
  CHECK(DetectPortEntries(StandardCall("a"), kParams) ==
        std::vector<double>{100});
  CHECK(DetectPortEntries(TrackBuilder("x").Sail(0, 50, 500, 70, 10).series(),
                          kParams)
            .empty());
  TrackBuilder twice("t");
  twice.Sail(0, 10, 100, 30, 10).Sail(11, 20, 40, 100, 10).Sail(21, 30, 90, 10,
                                                                   10);
  CHECK(DetectPortEntries(twice.series(), kParams) ==
        std::vector<double>{6, 25});
  // A track starting inside has no 0 -> 1 switch.
  CHECK(DetectPortEntries(TrackBuilder("i").Stay(0, 5, 10, 0).series(), kParams)
            .empty());
  // Exactly on the radius is inside.
  GeofenceParams round = kParams;
  round.center = {0, 0};
  TrackBuilder on("o", round.center);
  on.At(0, 61, 5).At(1, 60, 5);
  CHECK(DetectPortEntries(on.series(), round).size() == 1);
}

TEST_CASE("departure from the previous port") {
  CHECK(*DetectDeparture(StandardCall("a"), 100, kParams) == 12);
  CHECK(*DetectDeparture(StandardCall("a", false), 100, kParams) == 10);
  TrackBuilder no_stop("n");
  no_stop.Stay(0, 4, 300, 0.5).Sail(5, 99, 290, 62, 12).At(100, 59, 6);
  CHECK_FALSE(DetectDeparture(no_stop.series(), 100, kParams));
  // A stop at 1.9 kn qualifies, at 2 kn it does not.
  TrackBuilder slow("s");
  slow.Stay(0, 10, 300, 1.9).Sail(11, 99, 290, 62, 9).At(100, 59, 6);
  CHECK(*DetectDeparture(slow.series(), 100, kParams) == 11);
  TrackBuilder edge("e");
  edge.Stay(0, 10, 300, 2.0).Sail(11, 99, 290, 62, 9).At(100, 59, 6);
  CHECK_FALSE(DetectDeparture(edge.series(), 100, kParams));
}

TEST_CASE("berth blocks") {
  auto blocks = DetectBerthBlocks(StandardCall("a"), kParams);
  REQUIRE(blocks.blocks.size() == 1);
  CHECK(blocks.blocks[0].start == 132);
  CHECK(blocks.blocks[0].end == 168);
  CHECK(blocks.blocks[0].duration() == 36);

  CHECK(DetectBerthBlocks(TrackBuilder("b").Stay(0, 36, 1, 0.1).series(),
                          kParams)
            .blocks.size() == 1);
  auto short_stay =
      DetectBerthBlocks(TrackBuilder("b").Stay(0, 2, 1, 0.1).series(), kParams);
  CHECK(short_stay.blocks.empty());
  CHECK(short_stay.rejected == 0);
  auto long_stay = DetectBerthBlocks(
      TrackBuilder("b").Stay(0, 600, 1, 0.1, 3).series(), kParams);
  CHECK(long_stay.blocks.empty());
  CHECK(long_stay.rejected == 1);
  // Beyond the berth radius nothing counts.
  CHECK(DetectBerthBlocks(TrackBuilder("b").Stay(0, 36, 3.5, 0.1).series(),
                          kParams)
            .blocks.empty());
}

TEST_CASE("voyage extraction") {
  VoyageTally tally;
  auto voyages = ExtractVoyages(StandardCall("a"), kParams, tally);
  REQUIRE(voyages.size() == 1);
  const Voyage& v = voyages[0];
  CHECK(v.tau == 12);
  CHECK(v.t_entry == 100);
  CHECK(v.berth_start == 132);
  CHECK(v.berth_end == 168);
  CHECK(v.service_hours() == 36);
  CHECK(v.waiting_hours() == 32);
  CHECK(tally.entries == 1);
  CHECK(tally.voyages == 1);

  // Two berth stays in one call: the earliest is the service visit.
  TrackBuilder two("b");
  two.Stay(0, 10, 300, 0.5).Sail(11, 99, 290, 62, 12).At(100, 59, 6);
  two.Stay(101, 120, 1, 0.1).Stay(121, 125, 20, 5).Stay(126, 140, 1, 0.1);
  VoyageTally t2;
  auto v2 = ExtractVoyages(two.series(), kParams, t2);
  REQUIRE(v2.size() == 1);
  CHECK(v2[0].berth_start == 101);
  CHECK(t2.extra_berth_blocks == 1);

  // No previous-port stop: flagged and dropped.
  TrackBuilder lost("c");
  lost.Sail(0, 99, 290, 62, 12).At(100, 59, 6).Stay(101, 140, 1, 0.1);
  VoyageTally t3;
  CHECK(ExtractVoyages(lost.series(), kParams, t3).empty());
  CHECK(t3.incomplete_no_departure == 1);

  CHECK_THROWS_AS(CheckVoyage({"x", 5, 4, 6, 40}, kParams), std::logic_error);
  CHECK_THROWS_AS(CheckVoyage({"x", 1, 4, 6, 7}, kParams), std::logic_error);
  CHECK_NOTHROW(CheckVoyage({"x", 1, 4, 6, 40}, kParams));
}

TEST_CASE("gamma calibration") {
  std::vector<double> four{0, 4, 8, 12};
  GammaCalibration c = CalibrateGamma(four, kParams);
  CHECK(c.gamma == 4.0);
  CHECK(c.trimmed_each_side == 0);
  CHECK(c.low_sample);

  std::vector<double> starts;
  for (int k = 0; k <= 20; ++k) starts.push_back(4.0 * k);
  starts.push_back(80.05);
  c = CalibrateGamma(starts, kParams);
  CHECK(c.gamma == Approx(4.0).epsilon(1e-12));
  CHECK(c.intervals == 21);
  CHECK(c.intervals_used == 20);
  CHECK(c.trimmed_each_side == 2);
  CHECK_FALSE(c.low_sample);

  std::vector<double> one{5};
  CHECK_THROWS_AS(CalibrateGamma(one, kParams), std::invalid_argument);
  std::vector<double> clustered{5, 5.05, 5.1};
  CHECK_THROWS_AS(CalibrateGamma(clustered, kParams), std::invalid_argument);
}

// Trimmed mean written out by hand for the oracle.
double HandTrimmedGamma(std::vector<double> starts) {
  std::sort(starts.begin(), starts.end());
  std::vector<double> gaps;
  for (size_t k = 1; k < starts.size(); ++k) {
    if (starts[k] - starts[k - 1] > 0.1) gaps.push_back(starts[k] - starts[k - 1]);
  }
  std::sort(gaps.begin(), gaps.end());
  size_t cut = gaps.size() / 10;
  double sum = 0;
  for (size_t k = cut; k < gaps.size() - cut; ++k) sum += gaps[k];
  return sum / static_cast<double>(gaps.size() - 2 * cut);
}

TEST_CASE("property: calibration matches the hand oracle and ignores order") {
  std::mt19937_64 rng(43);
  std::exponential_distribution<double> gap(0.25);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> starts{0};
    int n = 2 + trial % 60;
    for (int k = 1; k < n; ++k) starts.push_back(starts.back() + gap(rng));
    double expected = HandTrimmedGamma(starts);
    std::shuffle(starts.begin(), starts.end(), rng);
    try {
      auto c = CalibrateGamma(starts, kParams);
      CHECK(std::abs(c.gamma - expected) <= 1e-9);
      std::vector<double> doubled = starts;
      doubled.insert(doubled.end(), starts.begin(), starts.end());
      CHECK(std::abs(CalibrateGamma(doubled, kParams).gamma - c.gamma) <= 1e-9);
    } catch (const std::invalid_argument&) {
      CHECK(std::isnan(expected));
    }
  }
}

TEST_CASE("waiting statistics") {
  std::vector<Voyage> v{{"a", 0, 1, 11, 20}, {"b", 0, 1, 21, 30},
                        {"c", 0, 1, 31, 40}};
  Summary s = WaitingStats(v);
  CHECK(s.mean == 20);
  CHECK(s.median == 20);
  CHECK(s.count == 3);
  CHECK(WaitingStats({}).count == 0);
}

TEST_CASE("pipeline on built tracks") {
  ParsedAis parsed;
  parsed.vessels.push_back(StandardCall("a"));
  auto b = StandardCall("b");
  for (auto& p : b.points) p.time += 4;
  parsed.vessels.push_back(b);
  parsed.vessels.push_back(TrackBuilder("z").Sail(0, 50, 500, 200, 10).series());
  PipelineOptions options;
  PipelineResult r = RunPipeline(parsed, options);
  CHECK(r.vessels == 3);
  CHECK(r.frame_callers == 2);
  REQUIRE(r.voyages.size() == 2);
  CHECK(r.voyages[1].vessel_id == "b");
  CHECK(r.voyages[1].t_entry == 104);
  REQUIRE(r.calibration);
  CHECK(r.calibration->gamma == 4);
  CHECK(r.service.median == 36);

  options.metadata = std::map<std::string, std::string>{{"a", "Bulk Carrier"},
                                                        {"b", "Tanker"}};
  r = RunPipeline(parsed, options);
  CHECK(r.type_filtered == 2);
  CHECK(r.voyages.size() == 1);
  CHECK_FALSE(r.calibration);
}

TEST_CASE("property: fuzzed tracks only yield valid voyages") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> km(0, 120);
  std::uniform_real_distribution<double> sog(0, 14);
  std::uniform_int_distribution<int> regime(0, 3);
  int voyages = 0;
  for (int trial = 0; trial < 300; ++trial) {
    TrackBuilder b("f");
    double h = 0, d = km(rng);
    while (h < 400) {
      int r = regime(rng);
      double len = 1 + km(rng) / 4;
      double s = r == 0 ? 0.1 : sog(rng);
      double target = r == 1 ? km(rng) : (r == 2 ? 1 : d);
      b.Sail(h, h + len, d, target, s);
      d = target;
      h += len + 1;
      if (r == 3) h += 13;  // data gap
    }
    VoyageTally tally;
    for (const Voyage& v : ExtractVoyages(b.series(), kParams, tally)) {
      ++voyages;
      CHECK(v.tau < v.t_entry);
      CHECK(v.t_entry <= v.berth_start);
      CHECK(v.berth_start < v.berth_end);
      CHECK(v.waiting_hours() >= 0);
      CHECK(v.service_hours() >= kParams.berth_min_hours);
      CHECK(v.service_hours() <= kParams.berth_max_hours);
    }
  }
  MESSAGE("fuzzed voyages: " << voyages);
}

TEST_CASE("parameter validation") {
  GeofenceParams p;
  CHECK_NOTHROW(p.Validate());
  p.r_berth_km = 70;
  CHECK_THROWS_AS(p.Validate(), std::invalid_argument);
  p = GeofenceParams{};
  p.v_go_kn = 1;
  CHECK_THROWS_AS(p.Validate(), std::invalid_argument);
  p = GeofenceParams{};
  p.berth_max_hours = 2;
  CHECK_THROWS_AS(p.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace sftw::ais
