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

#ifndef SFTW_TESTS_AIS_FIXTURES_H_
#define SFTW_TESTS_AIS_FIXTURES_H_

// Hand-built vessel tracks. Every position lies on the meridian through the
// port centre, north of it, so the great-circle distance to the centre is
// exactly the requested number of kilometres.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sftw/ais.h"

namespace sftw::testing {

inline constexpr double kKmPerDegree =
    std::numbers::pi * ais::kEarthRadiusKm / 180.0;

class TrackBuilder {
 public:
  explicit TrackBuilder(std::string id, ais::LatLon center = {-20.31, 118.57})
      : center_(center) {
    series_.vessel_id = std::move(id);
  }

  TrackBuilder& At(double hour, double km, double sog) {
    series_.points.push_back(
        {hour, center_.lat + km / kKmPerDegree, center_.lon, sog});
    return *this;
  }

  // Records every `step` hours over [from, to] at a fixed position.
  TrackBuilder& Stay(double from, double to, double km, double sog,
                     double step = 1) {
    for (double h = from; h <= to + 1e-9; h += step) At(h, km, sog);
    return *this;
  }

  // Linear motion from km_from at `from` to km_to at `to`.
  TrackBuilder& Sail(double from, double to, double km_from, double km_to,
                     double sog, double step = 1) {
    for (double h = from; h <= to + 1e-9; h += step) {
      double f = (h - from) / (to - from);
      At(h, km_from + f * (km_to - km_from), sog);
    }
    return *this;
  }

  const ais::VesselSeries& series() const { return series_; }

 private:
  ais::LatLon center_;
  ais::VesselSeries series_;
};

// Stop at the previous port over hours 0..10, underway from hour 11, cross
// 60 km inbound at hour 100, anchor at 20 km, berth at 1 km over hours
// 132..168, then leave. `accelerate` controls whether the vessel ever
// exceeds 8 kn between the stop and the entry.
inline ais::VesselSeries StandardCall(const std::string& id,
                                      bool accelerate = true) {
  TrackBuilder b(id);
  b.Stay(0, 10, 300, 0.5);
  b.At(11, 295, 5);
  b.Sail(12, 99, 290, 62, accelerate ? 12 : 7);
  b.At(100, 59, 6);
  b.Stay(101, 131, 20, 0.2);
  b.Stay(132, 168, 1, 0.1);
  b.Sail(169, 200, 5, 150, 11);
  return b.series();
}

}  // namespace sftw::testing

#endif  // SFTW_TESTS_AIS_FIXTURES_H_
