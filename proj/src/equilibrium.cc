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

#include "sftw/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sftw {
namespace {

bool TiesNeighbour(int player, const TypeProfile& types, double tolerance) {
  double t = types.type(player);
  bool left = player > 0 && t - types.type(player - 1) <= tolerance;
  bool right = player + 1 < types.size() &&
               types.type(player + 1) - t <= tolerance;
  return left || right;
}

std::vector<double> ProbeCandidates(int player, const StrategyProfile& profile,
                                    double lower, double epsilon) {
  std::vector<double> others;
  for (int j = 0; j < profile.size(); ++j) {
    if (j != player) others.push_back(profile.arrival(j));
  }
  std::sort(others.begin(), others.end());

  std::vector<double> points = {lower};
  if (std::isfinite(profile.t0())) points.push_back(profile.t0());
  double free_at = profile.t0();
  for (double s : others) {
    points.insert(points.end(), {s - epsilon, s, s + epsilon});
    free_at = std::max(s, free_at) + profile.gamma();
    points.push_back(free_at);
  }
  std::erase_if(points, [&](double x) { return x < lower; });
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const size_t breakpoints = points.size();
  for (size_t k = 1; k < breakpoints; ++k) {
    points.push_back(0.5 * (points[k - 1] + points[k]));
  }
  points.push_back(points[breakpoints - 1] + profile.gamma());
  std::sort(points.begin(), points.end());
  return points;
}

}  // namespace

bool EquilibriumInterval::Contains(double arrival, double tolerance) const {
  if (arrival < lower - tolerance) return false;
  if (is_singleton) return arrival <= lower + tolerance;
  return upper_closed ? arrival <= upper + tolerance
                      : arrival < upper - tolerance;
}

double Theta(int player, std::span<const double> prior_choices, double gamma,
             double t0) {
  if (player < 0 || static_cast<size_t>(player) != prior_choices.size()) {
    throw std::invalid_argument(
        "theta for player " + std::to_string(player) + " needs exactly " +
        std::to_string(player) + " prior choices, got " +
        std::to_string(prior_choices.size()));
  }
  double theta = t0 + player * gamma;
  for (int k = 0; k < player; ++k) {
    theta = std::max(theta, prior_choices[k] + (player - k) * gamma);
  }
  return theta;
}

EquilibriumInterval EquilibriumSet(int player, const TypeProfile& types,
                                   std::span<const double> prior_choices,
                                   double tie_tolerance) {
  if (player < 0 || player >= types.size()) {
    throw std::out_of_range("player " + std::to_string(player) +
                            " out of range");
  }
  EquilibriumInterval set;
  set.player = player;
  set.lower = types.type(player);
  set.upper = set.lower;
  set.theta = Theta(player, prior_choices, types.gamma(), types.t0());
  if (TiesNeighbour(player, types, tie_tolerance) || set.theta <= set.lower) {
    return set;
  }
  const double next = types.next_type(player);
  set.is_singleton = false;
  if (set.theta < next) {
    set.upper = set.theta;
    set.upper_closed = true;
  } else {
    set.upper = next;
    set.upper_closed = false;
  }
  return set;
}

std::vector<EquilibriumInterval> EquilibriumSets(
    const TypeProfile& types, std::span<const double> arrivals,
    double tie_tolerance) {
  if (static_cast<int>(arrivals.size()) != types.size()) {
    throw std::invalid_argument("arrival count does not match type count");
  }
  std::vector<EquilibriumInterval> sets;
  sets.reserve(arrivals.size());
  for (int i = 0; i < types.size(); ++i) {
    sets.push_back(
        EquilibriumSet(i, types, arrivals.first(i), tie_tolerance));
  }
  return sets;
}

StrategyProfile SftwProfile(const TypeProfile& types, double tie_tolerance) {
  return StrategyProfile(
      types, std::vector<double>(types.types().begin(), types.types().end()),
      tie_tolerance);
}

StrategyProfile GreenProfile(const TypeProfile& types, double epsilon_green,
                             double tie_tolerance) {
  if (!(epsilon_green > 0)) {
    throw std::invalid_argument("epsilon_green must be positive");
  }
  std::vector<double> arrivals;
  arrivals.reserve(types.size());
  for (int i = 0; i < types.size(); ++i) {
    EquilibriumInterval set =
        EquilibriumSet(i, types, arrivals, tie_tolerance);
    double s = set.upper;
    if (!set.upper_closed) {
      // Stay strictly below the next type; fall back to the midpoint when the
      // gap is narrower than epsilon_green.
      s = set.upper - epsilon_green;
      if (s <= set.lower) s = set.lower + 0.5 * (set.upper - set.lower);
    }
    arrivals.push_back(s);
  }
  return StrategyProfile(types, std::move(arrivals), tie_tolerance);
}

NashVerdict CheckNash(const StrategyProfile& profile, const TypeProfile& types,
                      const NashCheckOptions& options) {
  if (profile.size() != types.size()) {
    throw std::invalid_argument("profile and types differ in size");
  }
  for (int i = 0; i < profile.size(); ++i) {
    if (profile.arrival(i) < types.type(i)) {
      throw std::invalid_argument("infeasible profile: player " +
                                  std::to_string(i) + " arrives before its type");
    }
  }

  NashVerdict verdict;
  for (int i = 0; i < profile.size(); ++i) {
    const double current = ExpectedServiceTime(i, profile);
    DeviationWitness best{i, profile.arrival(i), current, current};
    for (double x : ProbeCandidates(i, profile, types.type(i),
                                    options.epsilon_probe)) {
      double value = ExpectedServiceTime(i, profile.WithArrival(i, x));
      // Among equally good deviations keep the latest arrival.
      if (value <= best.deviated_service_time + 1e-12) {
        best.deviation = x;
        best.deviated_service_time =
            std::min(value, best.deviated_service_time);
      }
    }
    if (best.improvement() > options.improvement_tolerance) {
      verdict.witness = best;
      return verdict;
    }
  }
  return verdict;
}

SlackReport SlackVector(const TypeProfile& types, double tie_tolerance) {
  SlackReport report;
  const int n = types.size();
  report.slack.resize(n);
  report.predecessor_completion.resize(n);
  double free_at = types.t0();
  for (int i = 0; i < n; ++i) {
    const double t = types.type(i);
    report.predecessor_completion[i] = free_at;
    double delta = std::min(types.next_type(i), free_at) - t;
    if (TiesNeighbour(i, types, tie_tolerance)) delta = 0;
    report.slack[i] = std::max(0.0, delta);
    free_at = std::max(t, free_at) + types.gamma();
  }
  return report;
}

SlackSummary AggregateSlack(const SlackReport& report, double bin_width) {
  SlackSummary summary;
  const auto& slack = report.slack;
  summary.count = static_cast<int64_t>(slack.size());
  summary.histogram.bin_width = bin_width;
  if (slack.empty()) return summary;
  summary.total = std::accumulate(slack.begin(), slack.end(), 0.0);
  summary.mean = summary.total / slack.size();
  summary.median = Median(slack);
  summary.count_positive =
      std::count_if(slack.begin(), slack.end(), [](double d) { return d > 0; });
  summary.zero_share =
      static_cast<double>(summary.count - summary.count_positive) /
      summary.count;
  summary.histogram = MakeHistogram(slack, bin_width);
  return summary;
}

}  // namespace sftw
