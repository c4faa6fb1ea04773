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

#include "sftw/queue.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace sftw {
namespace {

void CheckGamma(double gamma, bool allow_zero) {
  bool ok = allow_zero ? gamma >= 0 : gamma > 0;
  if (!ok || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be positive and finite, got " +
                                std::to_string(gamma));
  }
}

void CheckPlayer(int player, int n) {
  if (player < 0 || player >= n) {
    throw std::out_of_range("player " + std::to_string(player) +
                            " out of range for " + std::to_string(n) +
                            " players");
  }
}

// C_k over the canonical order; entry k is the completion of position k.
std::vector<double> CanonicalChain(const StrategyProfile& profile) {
  std::vector<double> chain(profile.size());
  double previous = profile.t0();
  for (int k = 0; k < profile.size(); ++k) {
    double s = profile.arrival(profile.canonical_order()[k]);
    previous = std::max(s, previous) + profile.gamma();
    chain[k] = previous;
  }
  return chain;
}

int CanonicalPosition(int player, const StrategyProfile& profile) {
  auto order = profile.canonical_order();
  return static_cast<int>(std::find(order.begin(), order.end(), player) -
                          order.begin());
}

PlayerOutcome OutcomeFromChain(int player, int position,
                               const StrategyProfile& profile,
                               const std::vector<double>& chain) {
  const TieBlock& block = profile.tie_blocks()[profile.block_of(player)];
  double s = profile.arrival(player);
  double sum = 0;
  for (int q = block.first_position; q < block.first_position + block.size;
       ++q) {
    double free_at = q == 0 ? profile.t0() : chain[q - 1];
    sum += std::max(s, free_at) - s;
  }
  PlayerOutcome out;
  out.expected_waiting = sum / block.size;
  out.expected_order = block.first_position + 1 + (block.size - 1) / 2.0;
  out.expected_service_time = s + out.expected_waiting;
  out.completion = out.expected_service_time + profile.gamma();

  double free_at = position == 0 ? profile.t0() : chain[position - 1];
  out.waiting = std::max(s, free_at) - s;
  return out;
}

}  // namespace

TypeProfile::TypeProfile(std::vector<double> types, double gamma)
    : TypeProfile(types, gamma, types.empty() ? 0.0 : types.front()) {}

TypeProfile::TypeProfile(std::vector<double> types, double gamma, double t0)
    : types_(std::move(types)), gamma_(gamma), t0_(t0) {
  if (types_.empty()) throw std::invalid_argument("type profile is empty");
  CheckGamma(gamma_, /*allow_zero=*/false);
  for (double t : types_) {
    if (!std::isfinite(t)) throw std::invalid_argument("types must be finite");
  }
  if (!std::isfinite(t0_)) throw std::invalid_argument("t0 must be finite");
  for (size_t i = 1; i < types_.size(); ++i) {
    if (types_[i] < types_[i - 1]) {
      throw std::invalid_argument("types must be sorted nondecreasing (index " +
                                  std::to_string(i) + ")");
    }
  }
}

double TypeProfile::next_type(int player) const {
  CheckPlayer(player, size());
  return player + 1 < size() ? types_[player + 1] : kInfinity;
}

TypeProfile TypeProfile::Shifted(double delta) const {
  std::vector<double> shifted = types_;
  for (double& t : shifted) t += delta;
  return TypeProfile(std::move(shifted), gamma_, t0_ + delta);
}

StrategyProfile::StrategyProfile(std::vector<double> arrivals, double gamma,
                                 double t0, double tie_tolerance)
    : arrivals_(std::move(arrivals)),
      gamma_(gamma),
      t0_(t0),
      tie_tolerance_(tie_tolerance) {
  CheckGamma(gamma_, /*allow_zero=*/true);
  if (arrivals_.empty()) throw std::invalid_argument("no arrivals");
  if (tie_tolerance_ < 0) {
    throw std::invalid_argument("tie tolerance must be nonnegative");
  }
  for (double s : arrivals_) {
    if (!std::isfinite(s)) throw std::invalid_argument("arrivals must be finite");
  }
  Index();
}

StrategyProfile::StrategyProfile(const TypeProfile& types,
                                 std::vector<double> arrivals,
                                 double tie_tolerance)
    : StrategyProfile(std::move(arrivals), types.gamma(), types.t0(),
                      tie_tolerance) {
  if (size() != types.size()) {
    throw std::invalid_argument("profile has " + std::to_string(size()) +
                                " arrivals for " + std::to_string(types.size()) +
                                " types");
  }
  for (int i = 0; i < size(); ++i) {
    if (arrivals_[i] < types.type(i)) {
      throw std::invalid_argument(
          "infeasible arrival for player " + std::to_string(i) + ": " +
          std::to_string(arrivals_[i]) + " < type " +
          std::to_string(types.type(i)));
    }
  }
}

void StrategyProfile::Index() {
  const int n = size();
  canonical_.resize(n);
  std::iota(canonical_.begin(), canonical_.end(), 0);
  std::stable_sort(canonical_.begin(), canonical_.end(), [&](int a, int b) {
    return arrivals_[a] < arrivals_[b];
  });
  blocks_.clear();
  block_of_.assign(n, 0);
  for (int k = 0; k < n; ++k) {
    bool joins = k > 0 && arrivals_[canonical_[k]] -
                                  arrivals_[canonical_[k - 1]] <=
                              tie_tolerance_;
    if (joins) {
      ++blocks_.back().size;
    } else {
      blocks_.push_back({k, 1});
    }
    block_of_[canonical_[k]] = static_cast<int>(blocks_.size()) - 1;
  }
}

StrategyProfile StrategyProfile::WithArrival(int player, double arrival) const {
  CheckPlayer(player, size());
  std::vector<double> changed = arrivals_;
  changed[player] = arrival;
  return StrategyProfile(std::move(changed), gamma_, t0_, tie_tolerance_);
}

ServiceOrder::ServiceOrder(std::vector<int> order) : order_(std::move(order)) {
  const int n = size();
  inverse_.assign(n, -1);
  for (int k = 0; k < n; ++k) {
    int p = order_[k];
    if (p < 0 || p >= n || inverse_[p] != -1) {
      throw std::invalid_argument("service order is not a permutation");
    }
    inverse_[p] = k;
  }
}

ServiceOrder ServiceOrder::Identity(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return ServiceOrder(std::move(order));
}

InconsistentOrderError::InconsistentOrderError(int earlier_position,
                                               int later_position)
    : std::invalid_argument("service order is inconsistent with arrivals: "
                            "position " + std::to_string(earlier_position) +
                            " arrives after position " +
                            std::to_string(later_position)),
      earlier_(earlier_position),
      later_(later_position) {}

void CheckConsistent(const ServiceOrder& order, const StrategyProfile& profile) {
  if (order.size() != profile.size()) {
    throw std::invalid_argument("service order size does not match profile");
  }
  for (int k = 1; k < order.size(); ++k) {
    if (profile.block_of(order.player_at(k - 1)) >
        profile.block_of(order.player_at(k))) {
      throw InconsistentOrderError(k - 1, k);
    }
  }
}

std::vector<double> CompletionTimes(const ServiceOrder& order,
                                    const StrategyProfile& profile) {
  CheckConsistent(order, profile);
  std::vector<double> completion(order.size());
  double previous = profile.t0();
  for (int k = 0; k < order.size(); ++k) {
    previous = std::max(profile.arrival(order.player_at(k)), previous) +
               profile.gamma();
    completion[k] = previous;
  }
  return completion;
}

double WaitingTime(int player, const ServiceOrder& order,
                   const StrategyProfile& profile) {
  CheckPlayer(player, profile.size());
  CheckConsistent(order, profile);
  const int p = order.position_of(player);
  const double s = profile.arrival(player);
  double wait = profile.t0() + p * profile.gamma() - s;
  for (int k = 0; k <= p; ++k) {
    wait = std::max(wait, profile.arrival(order.player_at(k)) +
                              (p - k) * profile.gamma() - s);
  }
  return wait;
}

std::vector<ServiceOrder> EnumerateOrders(const StrategyProfile& profile,
                                          int cap) {
  for (const TieBlock& block : profile.tie_blocks()) {
    if (block.size > cap) {
      throw EnumerationCapError(
          "tie block of " + std::to_string(block.size) +
          " players exceeds the enumeration cap of " + std::to_string(cap) +
          "; use the analytic expectations instead");
    }
  }
  std::vector<int> current(profile.canonical_order().begin(),
                           profile.canonical_order().end());
  std::vector<ServiceOrder> orders;
  const auto& blocks = profile.tie_blocks();
  // Odometer over blocks: each block steps through its permutations.
  for (const TieBlock& block : blocks) {
    std::sort(current.begin() + block.first_position,
              current.begin() + block.first_position + block.size);
  }
  while (true) {
    orders.emplace_back(current);
    int b = static_cast<int>(blocks.size()) - 1;
    for (; b >= 0; --b) {
      auto first = current.begin() + blocks[b].first_position;
      if (std::next_permutation(first, first + blocks[b].size)) break;
    }
    if (b < 0) break;
  }
  return orders;
}

double ExpectedWaiting(int player, const StrategyProfile& profile) {
  CheckPlayer(player, profile.size());
  return OutcomeFromChain(player, CanonicalPosition(player, profile), profile,
                          CanonicalChain(profile))
      .expected_waiting;
}

double ExpectedServiceOrder(int player, const StrategyProfile& profile) {
  CheckPlayer(player, profile.size());
  const TieBlock& block = profile.tie_blocks()[profile.block_of(player)];
  return block.first_position + 1 + (block.size - 1) / 2.0;
}

double ExpectedServiceTime(int player, const StrategyProfile& profile) {
  return profile.arrival(player) + ExpectedWaiting(player, profile);
}

QueueOutcome Evaluate(const StrategyProfile& profile) {
  std::vector<double> chain = CanonicalChain(profile);
  QueueOutcome outcome;
  outcome.players.resize(profile.size());
  for (int k = 0; k < profile.size(); ++k) {
    int player = profile.canonical_order()[k];
    outcome.players[player] = OutcomeFromChain(player, k, profile, chain);
  }
  return outcome;
}

}  // namespace sftw
