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

#ifndef SFTW_EQUILIBRIUM_H_
#define SFTW_EQUILIBRIUM_H_

// Complete-information equilibria of the FCFS arrival game.
//
// With types known to everyone, player i's pure Nash set is a singleton
// {t_i} when its type ties a neighbour, and otherwise
//     [t_i, t_{i+1}) intersected with (-inf, theta_i],  plus t_i itself,
// where theta_i is the instant the server frees up for position i given the
// choices of the players ahead of it. A profile is a Nash equilibrium iff
// every player sits inside its set. The sets are built front to back.

#include <optional>
#include <span>
#include <vector>

#include "sftw/queue.h"
#include "sftw/stats.h"

namespace sftw {

inline constexpr double kDefaultGreenEpsilon = 1e-6;
inline constexpr double kDefaultProbeEpsilon = 1e-6;

struct EquilibriumInterval {
  int player = 0;
  double lower = 0;  // always t_i
  double upper = 0;  // may be +infinity only when open
  bool upper_closed = true;
  bool is_singleton = true;
  double theta = -kInfinity;

  bool Contains(double arrival, double tolerance = 0) const;
};

// Server-free instant for `player` given the choices of players 0..player-1:
// max(t0 + player*gamma, max_k s_k + (player - k)*gamma). Equals t0 for the
// first player.
double Theta(int player, std::span<const double> prior_choices, double gamma,
             double t0);

EquilibriumInterval EquilibriumSet(int player, const TypeProfile& types,
                                   std::span<const double> prior_choices,
                                   double tie_tolerance = kDefaultTieTolerance);

// Sets of every player, each conditioned on the arrivals of the players
// before it in `arrivals`.
std::vector<EquilibriumInterval> EquilibriumSets(
    const TypeProfile& types, std::span<const double> arrivals,
    double tie_tolerance = kDefaultTieTolerance);

// Everyone arrives at its earliest feasible time.
StrategyProfile SftwProfile(const TypeProfile& types,
                            double tie_tolerance = kDefaultTieTolerance);

// Latest arrival inside each set. When the supremum is the open endpoint
// t_{i+1}, the arrival is t_{i+1} - epsilon_green instead.
StrategyProfile GreenProfile(const TypeProfile& types,
                             double epsilon_green = kDefaultGreenEpsilon,
                             double tie_tolerance = kDefaultTieTolerance);

struct DeviationWitness {
  int player = 0;
  double deviation = 0;  // arrival the player switches to
  double current_service_time = 0;
  double deviated_service_time = 0;

  double improvement() const {
    return current_service_time - deviated_service_time;
  }
};

struct NashVerdict {
  std::optional<DeviationWitness> witness;

  bool is_equilibrium() const { return !witness.has_value(); }
};

struct NashCheckOptions {
  double epsilon_probe = kDefaultProbeEpsilon;
  // Improvements at or below this are treated as rounding noise.
  double improvement_tolerance = 1e-9;
};

// Brute-force check over every unilateral deviation that can matter. The
// expected service time is piecewise linear in the player's own arrival, with
// kinks only at the other arrivals and at the completion instants of the
// other players' chain, so scanning those instants, probes on either side of
// them and the midpoints in between finds any profitable deviation.
NashVerdict CheckNash(const StrategyProfile& profile, const TypeProfile& types,
                      const NashCheckOptions& options = {});

struct SlackReport {
  std::vector<double> slack;
  std::vector<double> predecessor_completion;
};

// Per-vessel slack under truthful arrivals:
//   delta_i = max(0, min(t_{i+1}, C_{i-1}) - t_i),
// with C the completion chain of the types started from t0, and delta_i = 0
// whenever t_i ties a neighbour.
SlackReport SlackVector(const TypeProfile& types,
                        double tie_tolerance = kDefaultTieTolerance);

struct SlackSummary {
  int64_t count = 0;
  double mean = 0;
  double median = 0;
  double total = 0;
  double zero_share = 0;
  int64_t count_positive = 0;
  Histogram histogram;
};

SlackSummary AggregateSlack(const SlackReport& report, double bin_width = 0.5);

}  // namespace sftw

#endif  // SFTW_EQUILIBRIUM_H_
