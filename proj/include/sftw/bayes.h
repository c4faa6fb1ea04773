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

#ifndef SFTW_BAYES_H_
#define SFTW_BAYES_H_

// Monte Carlo machinery for the incomplete-information game: types are drawn
// i.i.d. from a common prior, each player maps its own type to an arrival, and
// expected service times are averaged over the draws.
//
// Random streams: samples are processed in fixed batches of kBatchSize. Batch b
// draws from a mt19937_64 seeded with StreamSeed(seed, b), so results depend
// only on (seed, samples) and never on how batches are scheduled on threads.
// Paired estimates reuse the same type draws for both arms.

#include <cstdint>
#include <span>
#include <vector>

#include "sftw/queue.h"

namespace sftw {

inline constexpr int64_t kBatchSize = 8192;

uint64_t StreamSeed(uint64_t seed, uint64_t stream);

// Marginal type distribution shared by all players.
class Prior {
 public:
  static Prior Uniform(double lo, double hi);
  // Custom density given by its inverse CDF tabulated on an even grid of
  // probabilities 0, 1/(m-1), ..., 1; interpolated linearly. The quantiles
  // must be strictly increasing so the density is positive on the support.
  static Prior FromQuantiles(std::vector<double> quantiles);

  double lo() const { return quantiles_.front(); }
  double hi() const { return quantiles_.back(); }
  bool is_uniform() const { return quantiles_.size() == 2; }
  // Maps a uniform draw in [0, 1) to a type.
  double Quantile(double u) const;

 private:
  explicit Prior(std::vector<double> quantiles);
  std::vector<double> quantiles_;
};

struct PriorSpec {
  Prior marginal = Prior::Uniform(0, 1);
  int players = 2;
};

// Maps a type to an arrival time; the result is never below the type.
class StrategyFunction {
 public:
  static StrategyFunction Truthful();
  // t + shift for types in [window_lo, window_hi], truthful elsewhere.
  static StrategyFunction ShiftOnWindow(double shift, double window_lo,
                                        double window_hi);
  // Piecewise-linear delay d(t) >= 0 over increasing `type_grid`, clamped
  // outside the grid; arrival = t + d(t).
  static StrategyFunction Tabulated(std::vector<double> type_grid,
                                    std::vector<double> delays);

  double operator()(double type) const;

 private:
  enum class Kind { kTruthful, kShift, kTabulated };
  Kind kind_ = Kind::kTruthful;
  double shift_ = 0;
  double lo_ = 0;
  double hi_ = 0;
  std::vector<double> grid_;
  std::vector<double> delays_;
};

struct McEstimate {
  double mean = 0;
  double half_width_95 = 0;  // normal approximation
  int64_t samples = 0;
  uint64_t seed = 0;

  double upper_95() const { return mean + half_width_95; }
  double lower_95() const { return mean - half_width_95; }
};

struct McOptions {
  int64_t samples = 100000;
  uint64_t seed = 1;
  double tie_tolerance = kDefaultTieTolerance;
  // 0 picks std::thread::hardware_concurrency().
  int threads = 0;
};

// One type vector (player order, unsorted) drawn from stream 0 of `seed`.
std::vector<double> SampleTypeProfile(const PriorSpec& prior, uint64_t seed);

// E[s_i + E[w_i]] when every player j arrives at strategies[j](t_j).
McEstimate MonteCarloServiceTime(int player,
                                 std::span<const StrategyFunction> strategies,
                                 const PriorSpec& prior, double gamma,
                                 const McOptions& options);

// Paired estimate of E[service time | truthful] - E[service time | shifted]
// for `player` delaying by `shift` on types in [window_lo, window_hi] while
// everyone else stays truthful. Non-positive values mean the deviation does
// not pay.
McEstimate DeviationGain(int player, double shift, double window_lo,
                         double window_hi, const PriorSpec& prior, double gamma,
                         const McOptions& options);

struct BestResponseRow {
  double arrival = 0;
  McEstimate estimate;
};

struct BestResponseScan {
  double argmin = 0;
  std::vector<BestResponseRow> rows;
};

// Expected service time of `player` with fixed `own_type` at every grid
// arrival, opponents truthful, all grid points evaluated on the same draws.
// Ties in the estimate go to the earliest grid point.
BestResponseScan ScanBestResponse(int player, double own_type,
                                  std::span<const double> grid,
                                  const PriorSpec& prior, double gamma,
                                  const McOptions& options);

}  // namespace sftw

#endif  // SFTW_BAYES_H_
