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

#include "sftw/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sftw {

double Mean(std::span<const double> values) {
  if (values.empty()) return 0;
  return std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

double Median(std::span<const double> values) {
  if (values.empty()) return 0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

double TrimmedMean(std::span<const double> values, double fraction) {
  if (fraction < 0 || fraction >= 0.5) {
    throw std::invalid_argument("trim fraction must lie in [0, 0.5)");
  }
  if (values.empty()) return 0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto cut = static_cast<size_t>(std::floor(fraction * sorted.size()));
  return Mean(std::span<const double>(sorted).subspan(cut,
                                                      sorted.size() - 2 * cut));
}

Histogram MakeHistogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0)) throw std::invalid_argument("bin width must be positive");
  Histogram h;
  h.bin_width = bin_width;
  if (values.empty()) return h;
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  h.origin = std::floor(*lo / bin_width) * bin_width;
  const auto bins =
      static_cast<size_t>(std::floor((*hi - h.origin) / bin_width)) + 1;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto bin = static_cast<size_t>(std::floor((v - h.origin) / bin_width));
    ++h.counts[std::min(bin, bins - 1)];
  }
  return h;
}

Summary Summarize(std::span<const double> values, double trim_fraction) {
  Summary s;
  s.count = static_cast<int64_t>(values.size());
  if (values.empty()) return s;
  s.total = std::accumulate(values.begin(), values.end(), 0.0);
  s.mean = s.total / values.size();
  s.median = Median(values);
  s.trimmed_mean = TrimmedMean(values, trim_fraction);
  return s;
}

}  // namespace sftw
