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

#ifndef SFTW_COUNTERFACTUAL_H_
#define SFTW_COUNTERFACTUAL_H_

// Slack analysis on observed port calls: observed port entries are read as
// the vessels' types (everyone is assumed to be sailing fast already) and the
// complete-information slack is computed over the whole ordered window.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sftw/equilibrium.h"
#include "sftw/queue.h"

namespace sftw {

struct ObservedCall {
  std::string vessel_id;
  double t_entry = 0;
  double waiting_hours = 0;
};

class AnalysisWindow {
 public:
  // Sorts by (t_entry, vessel_id). t0 defaults to the first entry.
  AnalysisWindow(std::vector<ObservedCall> calls, double gamma,
                 std::optional<double> t0 = std::nullopt);

  std::span<const ObservedCall> calls() const { return calls_; }
  double gamma() const { return gamma_; }
  double t0() const { return t0_; }
  int size() const { return static_cast<int>(calls_.size()); }

  TypeProfile Types() const;

 private:
  std::vector<ObservedCall> calls_;
  double gamma_;
  double t0_;
};

AnalysisWindow TypesFromObservations(std::vector<ObservedCall> calls,
                                     double gamma,
                                     std::optional<double> t0 = std::nullopt);

enum class WindowSplit { kNone, kDay };

// Independent games per UTC day (hour offsets from a midnight epoch). Each
// part starts without backlog.
std::vector<AnalysisWindow> SplitWindow(const AnalysisWindow& window,
                                        WindowSplit split);

struct SlackAnalysis {
  SlackReport report;  // rows follow window order
  SlackSummary summary;
};

SlackAnalysis RunSlackAnalysis(const AnalysisWindow& window,
                               double tie_tolerance = kDefaultTieTolerance,
                               double bin_width = 0.5);

}  // namespace sftw

#endif  // SFTW_COUNTERFACTUAL_H_
