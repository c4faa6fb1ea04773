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

#include "sftw/counterfactual.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace sftw {

AnalysisWindow::AnalysisWindow(std::vector<ObservedCall> calls, double gamma,
                               std::optional<double> t0)
    : calls_(std::move(calls)), gamma_(gamma) {
  if (calls_.empty()) throw std::invalid_argument("no observed calls");
  if (!(gamma_ > 0)) throw std::invalid_argument("gamma must be positive");
  std::sort(calls_.begin(), calls_.end(),
            [](const ObservedCall& a, const ObservedCall& b) {
              return std::tie(a.t_entry, a.vessel_id) <
                     std::tie(b.t_entry, b.vessel_id);
            });
  t0_ = t0.value_or(calls_.front().t_entry);
}

TypeProfile AnalysisWindow::Types() const {
  std::vector<double> types;
  types.reserve(calls_.size());
  for (const ObservedCall& c : calls_) types.push_back(c.t_entry);
  return TypeProfile(std::move(types), gamma_, t0_);
}

AnalysisWindow TypesFromObservations(std::vector<ObservedCall> calls,
                                     double gamma, std::optional<double> t0) {
  return AnalysisWindow(std::move(calls), gamma, t0);
}

std::vector<AnalysisWindow> SplitWindow(const AnalysisWindow& window,
                                        WindowSplit split) {
  if (split == WindowSplit::kNone) return {window};
  std::map<int64_t, std::vector<ObservedCall>> days;
  for (const ObservedCall& c : window.calls()) {
    days[static_cast<int64_t>(std::floor(c.t_entry / 24.0))].push_back(c);
  }
  std::vector<AnalysisWindow> parts;
  for (auto& [day, calls] : days) {
    parts.emplace_back(std::move(calls), window.gamma());
  }
  return parts;
}

SlackAnalysis RunSlackAnalysis(const AnalysisWindow& window,
                               double tie_tolerance, double bin_width) {
  SlackAnalysis analysis;
  analysis.report = SlackVector(window.Types(), tie_tolerance);
  analysis.summary = AggregateSlack(analysis.report, bin_width);
  return analysis;
}

}  // namespace sftw
