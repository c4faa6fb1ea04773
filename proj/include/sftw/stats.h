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

#ifndef SFTW_STATS_H_
#define SFTW_STATS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace sftw {

// Fixed-width histogram. Bin k covers [origin + k*width, origin + (k+1)*width).
struct Histogram {
  double origin = 0;
  double bin_width = 1;
  std::vector<int64_t> counts;

  double left_edge(int bin) const { return origin + bin * bin_width; }
};

struct Summary {
  int64_t count = 0;
  double mean = 0;
  double median = 0;
  double trimmed_mean = 0;
  double total = 0;
};

// Arithmetic mean; 0 for an empty input.
double Mean(std::span<const double> values);
// Middle value, averaging the two central values for even counts.
double Median(std::span<const double> values);
// Drops floor(fraction * k) values from each tail, then averages the rest.
double TrimmedMean(std::span<const double> values, double fraction);

// Bins start at the multiple of `bin_width` at or below the minimum.
Histogram MakeHistogram(std::span<const double> values, double bin_width);

Summary Summarize(std::span<const double> values, double trim_fraction);

}  // namespace sftw

#endif  // SFTW_STATS_H_
