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

#include "sftw/bayes.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

namespace sftw {
namespace {

constexpr double kZ95 = 1.959963984540054;

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Running mean and sum of squared deviations (Welford), mergeable.
struct Moments {
  int64_t n = 0;
  double mean = 0;
  double m2 = 0;

  void Add(double x) {
    ++n;
    double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  void Merge(const Moments& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const int64_t total = n + other.n;
    double d = other.mean - mean;
    mean += d * other.n / total;
    m2 += other.m2 + d * d * static_cast<double>(n) * other.n / total;
    n = total;
  }

  McEstimate ToEstimate(uint64_t seed) const {
    McEstimate e;
    e.mean = mean;
    e.samples = n;
    e.seed = seed;
    e.half_width_95 = n > 1 ? kZ95 * std::sqrt(m2 / (n - 1) / n) : 0.0;
    return e;
  }
};

void ValidateRun(const PriorSpec& prior, const McOptions& options, int player) {
  if (options.samples <= 0) {
    throw std::invalid_argument("sample count must be positive");
  }
  if (prior.players < 1) throw std::invalid_argument("need at least 1 player");
  if (player < 0 || player >= prior.players) {
    throw std::out_of_range("player " + std::to_string(player) +
                            " out of range");
  }
}

// Runs `fn(types, out)` on every sampled type vector; `out` has `outputs`
// slots. Returns one estimate per slot.
template <typename Fn>
std::vector<McEstimate> RunBatches(const PriorSpec& prior,
                                   const McOptions& options, int outputs,
                                   Fn fn) {
  const int64_t batches = (options.samples + kBatchSize - 1) / kBatchSize;
  std::vector<std::vector<Moments>> per_batch(
      batches, std::vector<Moments>(outputs));

  auto run_batch = [&](int64_t b) {
    std::mt19937_64 rng(StreamSeed(options.seed, static_cast<uint64_t>(b)));
    const int64_t count =
        std::min(kBatchSize, options.samples - b * kBatchSize);
    std::vector<double> types(prior.players);
    std::vector<double> out(outputs);
    for (int64_t s = 0; s < count; ++s) {
      for (double& t : types) t = prior.marginal.Quantile(Uniform01(rng));
      fn(std::span<const double>(types), std::span<double>(out));
      for (int k = 0; k < outputs; ++k) per_batch[b][k].Add(out[k]);
    }
  };

  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = static_cast<int>(
      std::clamp<int64_t>(threads, 1, std::max<int64_t>(batches, 1)));
  if (threads == 1) {
    for (int64_t b = 0; b < batches; ++b) run_batch(b);
  } else {
    std::atomic<int64_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (int64_t b = next++; b < batches; b = next++) run_batch(b);
      });
    }
  }

  std::vector<McEstimate> estimates;
  for (int k = 0; k < outputs; ++k) {
    Moments total;
    for (const auto& batch : per_batch) total.Merge(batch[k]);
    estimates.push_back(total.ToEstimate(options.seed));
  }
  return estimates;
}

double ServiceTimeOf(int player, std::vector<double> arrivals, double gamma,
                     double tie_tolerance) {
  StrategyProfile profile(std::move(arrivals), gamma, -kInfinity,
                          tie_tolerance);
  return ExpectedServiceTime(player, profile);
}

}  // namespace

uint64_t StreamSeed(uint64_t seed, uint64_t stream) {
  // splitmix64 finaliser over a golden-ratio offset per stream.
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Prior::Prior(std::vector<double> quantiles) : quantiles_(std::move(quantiles)) {}

Prior Prior::Uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("uniform prior needs finite lo < hi");
  }
  return Prior({lo, hi});
}

Prior Prior::FromQuantiles(std::vector<double> quantiles) {
  if (quantiles.size() < 2) {
    throw std::invalid_argument("need at least two quantiles");
  }
  for (size_t k = 1; k < quantiles.size(); ++k) {
    if (!(quantiles[k] > quantiles[k - 1])) {
      throw std::invalid_argument(
          "quantiles must be strictly increasing (density positive on the "
          "support)");
    }
  }
  return Prior(std::move(quantiles));
}

double Prior::Quantile(double u) const {
  const double scaled = u * static_cast<double>(quantiles_.size() - 1);
  const auto k = std::min(static_cast<size_t>(scaled), quantiles_.size() - 2);
  const double frac = scaled - static_cast<double>(k);
  return quantiles_[k] + frac * (quantiles_[k + 1] - quantiles_[k]);
}

StrategyFunction StrategyFunction::Truthful() { return StrategyFunction(); }

StrategyFunction StrategyFunction::ShiftOnWindow(double shift, double window_lo,
                                                 double window_hi) {
  if (shift < 0) throw std::invalid_argument("shift must be nonnegative");
  if (!(window_lo <= window_hi)) {
    throw std::invalid_argument("deviation window is empty");
  }
  StrategyFunction f;
  f.kind_ = Kind::kShift;
  f.shift_ = shift;
  f.lo_ = window_lo;
  f.hi_ = window_hi;
  return f;
}

StrategyFunction StrategyFunction::Tabulated(std::vector<double> type_grid,
                                             std::vector<double> delays) {
  if (type_grid.empty() || type_grid.size() != delays.size()) {
    throw std::invalid_argument("tabulated strategy needs matching grids");
  }
  for (size_t k = 0; k < type_grid.size(); ++k) {
    if (k > 0 && !(type_grid[k] > type_grid[k - 1])) {
      throw std::invalid_argument("type grid must be strictly increasing");
    }
    if (delays[k] < 0) {
      throw std::invalid_argument("infeasible strategy: negative delay");
    }
  }
  StrategyFunction f;
  f.kind_ = Kind::kTabulated;
  f.grid_ = std::move(type_grid);
  f.delays_ = std::move(delays);
  return f;
}

double StrategyFunction::operator()(double type) const {
  switch (kind_) {
    case Kind::kTruthful:
      return type;
    case Kind::kShift:
      return type >= lo_ && type <= hi_ ? type + shift_ : type;
    case Kind::kTabulated: {
      if (type <= grid_.front()) return type + delays_.front();
      if (type >= grid_.back()) return type + delays_.back();
      auto it = std::upper_bound(grid_.begin(), grid_.end(), type);
      const size_t k = static_cast<size_t>(it - grid_.begin()) - 1;
      const double frac = (type - grid_[k]) / (grid_[k + 1] - grid_[k]);
      return type + delays_[k] + frac * (delays_[k + 1] - delays_[k]);
    }
  }
  return type;
}

std::vector<double> SampleTypeProfile(const PriorSpec& prior, uint64_t seed) {
  if (prior.players < 1) throw std::invalid_argument("need at least 1 player");
  std::mt19937_64 rng(StreamSeed(seed, 0));
  std::vector<double> types(prior.players);
  for (double& t : types) t = prior.marginal.Quantile(Uniform01(rng));
  return types;
}

McEstimate MonteCarloServiceTime(int player,
                                 std::span<const StrategyFunction> strategies,
                                 const PriorSpec& prior, double gamma,
                                 const McOptions& options) {
  ValidateRun(prior, options, player);
  if (static_cast<int>(strategies.size()) != prior.players) {
    throw std::invalid_argument("need one strategy per player");
  }
  auto estimates = RunBatches(
      prior, options, 1,
      [&](std::span<const double> types, std::span<double> out) {
        std::vector<double> arrivals(types.size());
        for (size_t j = 0; j < types.size(); ++j) {
          arrivals[j] = strategies[j](types[j]);
        }
        out[0] = ServiceTimeOf(player, std::move(arrivals), gamma,
                               options.tie_tolerance);
      });
  return estimates.front();
}

McEstimate DeviationGain(int player, double shift, double window_lo,
                         double window_hi, const PriorSpec& prior, double gamma,
                         const McOptions& options) {
  ValidateRun(prior, options, player);
  const StrategyFunction deviated =
      StrategyFunction::ShiftOnWindow(shift, window_lo, window_hi);
  auto estimates = RunBatches(
      prior, options, 1,
      [&](std::span<const double> types, std::span<double> out) {
        std::vector<double> arrivals(types.begin(), types.end());
        const double truthful =
            ServiceTimeOf(player, arrivals, gamma, options.tie_tolerance);
        arrivals[player] = deviated(types[player]);
        const double shifted = ServiceTimeOf(player, std::move(arrivals), gamma,
                                             options.tie_tolerance);
        out[0] = truthful - shifted;
      });
  return estimates.front();
}

BestResponseScan ScanBestResponse(int player, double own_type,
                                  std::span<const double> grid,
                                  const PriorSpec& prior, double gamma,
                                  const McOptions& options) {
  ValidateRun(prior, options, player);
  if (grid.empty()) throw std::invalid_argument("best-response grid is empty");
  for (double x : grid) {
    if (x < own_type) {
      throw std::invalid_argument("grid arrival " + std::to_string(x) +
                                  " is below the player's type");
    }
  }
  auto estimates = RunBatches(
      prior, options, static_cast<int>(grid.size()),
      [&](std::span<const double> types, std::span<double> out) {
        std::vector<double> arrivals(types.begin(), types.end());
        for (size_t k = 0; k < grid.size(); ++k) {
          arrivals[player] = grid[k];
          out[k] = ServiceTimeOf(player, arrivals, gamma, options.tie_tolerance);
        }
      });
  BestResponseScan scan;
  size_t best = 0;
  for (size_t k = 0; k < grid.size(); ++k) {
    scan.rows.push_back({grid[k], estimates[k]});
    if (estimates[k].mean < estimates[best].mean) best = k;
  }
  scan.argmin = grid[best];
  return scan;
}

}  // namespace sftw
