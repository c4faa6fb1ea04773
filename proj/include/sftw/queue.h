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

#ifndef SFTW_QUEUE_H_
#define SFTW_QUEUE_H_

// Single-server FCFS queue mechanics for the arrival-timing game.
//
// All times are in hours, measured from an arbitrary dataset epoch. Players
// are indexed from 0. Service positions are also 0-based inside the library;
// ExpectedServiceOrder() is the one exception and reports 1-based positions
// so that its value matches the usual "k-th served" reading.

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sftw {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultTieTolerance = 1e-9;
inline constexpr int kDefaultEnumerationCap = 8;

// Earliest feasible arrival times t_1 <= ... <= t_n, the per-vessel service
// time gamma and the instant t0 at which the server first becomes available.
// t0 equal to the first type means there is no initial backlog.
class TypeProfile {
 public:
  TypeProfile(std::vector<double> types, double gamma);
  TypeProfile(std::vector<double> types, double gamma, double t0);

  std::span<const double> types() const { return types_; }
  double type(int player) const { return types_.at(player); }
  // t_{i+1}, or +infinity for the last player.
  double next_type(int player) const;
  double gamma() const { return gamma_; }
  double t0() const { return t0_; }
  int size() const { return static_cast<int>(types_.size()); }

  // Same profile with every instant shifted by `delta`.
  TypeProfile Shifted(double delta) const;

 private:
  std::vector<double> types_;
  double gamma_;
  double t0_;
};

// A maximal group of players whose arrivals agree within the tie tolerance.
// Positions are 0-based service positions in the canonical order.
struct TieBlock {
  int first_position = 0;
  int size = 0;
};

// Chosen arrival times s_i together with the queue parameters needed to
// evaluate them. Arrivals need not be sorted. gamma = 0 is accepted here as
// the degenerate instantaneous-service limit.
class StrategyProfile {
 public:
  // Bare arrivals; the server is idle from -infinity unless t0 is given.
  StrategyProfile(std::vector<double> arrivals, double gamma,
                  double t0 = -kInfinity,
                  double tie_tolerance = kDefaultTieTolerance);
  // Arrivals checked against s_i >= t_i; gamma and t0 come from `types`.
  StrategyProfile(const TypeProfile& types, std::vector<double> arrivals,
                  double tie_tolerance = kDefaultTieTolerance);

  std::span<const double> arrivals() const { return arrivals_; }
  double arrival(int player) const { return arrivals_.at(player); }
  double gamma() const { return gamma_; }
  double t0() const { return t0_; }
  double tie_tolerance() const { return tie_tolerance_; }
  int size() const { return static_cast<int>(arrivals_.size()); }

  // Players sorted by arrival, ties kept in index order.
  std::span<const int> canonical_order() const { return canonical_; }
  std::span<const TieBlock> tie_blocks() const { return blocks_; }
  // Index into tie_blocks() of the block containing `player`.
  int block_of(int player) const { return block_of_.at(player); }

  // Unilateral deviation: copy with one arrival replaced. Feasibility
  // against types is not re-checked.
  StrategyProfile WithArrival(int player, double arrival) const;

 private:
  void Index();

  std::vector<double> arrivals_;
  double gamma_;
  double t0_;
  double tie_tolerance_;
  std::vector<int> canonical_;
  std::vector<TieBlock> blocks_;
  std::vector<int> block_of_;
};

// Bijection from service positions to players (g) with its inverse.
class ServiceOrder {
 public:
  explicit ServiceOrder(std::vector<int> order);
  static ServiceOrder Identity(int n);

  int player_at(int position) const { return order_.at(position); }
  int position_of(int player) const { return inverse_.at(player); }
  std::span<const int> order() const { return order_; }
  int size() const { return static_cast<int>(order_.size()); }

  friend bool operator==(const ServiceOrder& a, const ServiceOrder& b) {
    return a.order_ == b.order_;
  }

 private:
  std::vector<int> order_;
  std::vector<int> inverse_;
};

// Thrown when a service order serves a later arrival before an earlier one.
class InconsistentOrderError : public std::invalid_argument {
 public:
  InconsistentOrderError(int earlier_position, int later_position);
  int earlier_position() const { return earlier_; }
  int later_position() const { return later_; }

 private:
  int earlier_;
  int later_;
};

// Thrown by EnumerateOrders when a tie block exceeds the enumeration cap.
class EnumerationCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Per-player view of a profile under uniform random tie-breaking.
struct PlayerOutcome {
  double waiting = 0;  // under the canonical order
  double expected_waiting = 0;
  double expected_order = 1;  // 1-based
  double expected_service_time = 0;  // s_i + E[w_i]
  double completion = 0;  // expected_service_time + gamma
};

struct QueueOutcome {
  std::vector<PlayerOutcome> players;
};

// Throws InconsistentOrderError if `order` is not arrival-consistent.
void CheckConsistent(const ServiceOrder& order, const StrategyProfile& profile);

// Discrete-event completion chain C_k = max(s_g(k), C_{k-1}) + gamma with
// C_{-1} = t0, indexed by service position.
std::vector<double> CompletionTimes(const ServiceOrder& order,
                                    const StrategyProfile& profile);

// Closed-form waiting time of `player` under `order`:
//   max over positions k <= p of  s_g(k) + (p - k) * gamma - s_i,
// with the virtual predecessor t0 - gamma at position -1.
double WaitingTime(int player, const ServiceOrder& order,
                   const StrategyProfile& profile);

// Every arrival-consistent order (permutations inside each tie block).
std::vector<ServiceOrder> EnumerateOrders(
    const StrategyProfile& profile, int cap = kDefaultEnumerationCap);

// Analytic expectations over uniformly random tie-breaking.
double ExpectedWaiting(int player, const StrategyProfile& profile);
double ExpectedServiceOrder(int player, const StrategyProfile& profile);
double ExpectedServiceTime(int player, const StrategyProfile& profile);

// Canonical utility: minus the expected service time. Only its ordering is
// meaningful.
inline double Utility(int player, const StrategyProfile& profile) {
  return -ExpectedServiceTime(player, profile);
}

QueueOutcome Evaluate(const StrategyProfile& profile);

}  // namespace sftw

#endif  // SFTW_QUEUE_H_
