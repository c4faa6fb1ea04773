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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "sftw/ais.h"
#include "sftw/bayes.h"
#include "sftw/cli.h"
#include "sftw/equilibrium.h"
#include "sftw/queue.h"

namespace py = pybind11;

namespace sftw {
namespace {

TypeProfile Types(std::vector<double> types, double gamma,
                  std::optional<double> t0) {
  if (types.empty()) throw std::invalid_argument("types must be non-empty");
  const double start = t0.value_or(types.front());
  return TypeProfile(std::move(types), gamma, start);
}

ServiceOrder OrderOrCanonical(const StrategyProfile& p,
                              std::optional<std::vector<int>> order) {
  if (order) return ServiceOrder(*order);
  return ServiceOrder(
      std::vector<int>(p.canonical_order().begin(), p.canonical_order().end()));
}

py::dict SetDict(const EquilibriumInterval& s) {
  py::dict d;
  d["player"] = s.player;
  d["lower"] = s.lower;
  d["upper"] = s.upper;
  d["upper_closed"] = s.upper_closed;
  d["singleton"] = s.is_singleton;
  d["theta"] = s.theta;
  return d;
}

py::dict EstimateDict(const McEstimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["half_width_95"] = e.half_width_95;
  d["upper_95"] = e.upper_95();
  d["samples"] = e.samples;
  d["seed"] = e.seed;
  return d;
}

McOptions Options(int64_t samples, uint64_t seed, int threads) {
  McOptions o;
  o.samples = samples;
  o.seed = seed;
  o.threads = threads;
  return o;
}

}  // namespace
}  // namespace sftw

PYBIND11_MODULE(_core, m) {
  using namespace sftw;
  m.doc() = "FCFS arrival-time game: queue evaluation, equilibria, "
            "Monte Carlo checks and AIS helpers.";
  const double inf = std::numeric_limits<double>::infinity();

  m.def(
      "completion_times",
      [](std::vector<double> arrivals, double gamma,
         std::optional<std::vector<int>> order, double t0) {
        StrategyProfile p(std::move(arrivals), gamma, t0);
        return CompletionTimes(OrderOrCanonical(p, order), p);
      },
      py::arg("arrivals"), py::arg("gamma"), py::arg("order") = py::none(),
      py::arg("t0") = -inf,
      "Completion instant of each service position.");
  m.def(
      "waiting_time",
      [](int player, std::vector<double> arrivals, double gamma,
         std::optional<std::vector<int>> order, double t0) {
        StrategyProfile p(std::move(arrivals), gamma, t0);
        return WaitingTime(player, OrderOrCanonical(p, order), p);
      },
      py::arg("player"), py::arg("arrivals"), py::arg("gamma"),
      py::arg("order") = py::none(), py::arg("t0") = -inf);
  m.def(
      "enumerate_orders",
      [](std::vector<double> arrivals, int cap) {
        StrategyProfile p(std::move(arrivals), 0.0);
        std::vector<std::vector<int>> out;
        for (const ServiceOrder& g : EnumerateOrders(p, cap)) {
          out.emplace_back(g.order().begin(), g.order().end());
        }
        return out;
      },
      py::arg("arrivals"), py::arg("cap") = kDefaultEnumerationCap);
  m.def(
      "expected_waiting",
      [](int player, std::vector<double> arrivals, double gamma, double t0) {
        return ExpectedWaiting(player,
                               StrategyProfile(std::move(arrivals), gamma, t0));
      },
      py::arg("player"), py::arg("arrivals"), py::arg("gamma"),
      py::arg("t0") = -inf);
  m.def(
      "expected_service_order",
      [](int player, std::vector<double> arrivals, double gamma, double t0) {
        return ExpectedServiceOrder(
            player, StrategyProfile(std::move(arrivals), gamma, t0));
      },
      py::arg("player"), py::arg("arrivals"), py::arg("gamma"),
      py::arg("t0") = -inf, "1-based expected position.");
  m.def(
      "expected_service_time",
      [](int player, std::vector<double> arrivals, double gamma, double t0) {
        return ExpectedServiceTime(
            player, StrategyProfile(std::move(arrivals), gamma, t0));
      },
      py::arg("player"), py::arg("arrivals"), py::arg("gamma"),
      py::arg("t0") = -inf);

  m.def(
      "equilibrium_sets",
      [](std::vector<double> types, double gamma,
         std::optional<std::vector<double>> arrivals, std::optional<double> t0) {
        TypeProfile tp = Types(std::move(types), gamma, t0);
        std::vector<double> s;
        if (arrivals) {
          s = *arrivals;
        } else {
          StrategyProfile green = GreenProfile(tp);
          s.assign(green.arrivals().begin(), green.arrivals().end());
        }
        py::list out;
        for (const auto& set : EquilibriumSets(tp, s)) out.append(SetDict(set));
        return out;
      },
      py::arg("types"), py::arg("gamma"), py::arg("arrivals") = py::none(),
      py::arg("t0") = py::none(),
      "Each player's set given the earlier players' arrivals (default: the "
      "green profile).");
  m.def(
      "green_profile",
      [](std::vector<double> types, double gamma, std::optional<double> t0,
         double eps_green) {
        StrategyProfile p = GreenProfile(Types(std::move(types), gamma, t0),
                                         eps_green);
        return std::vector<double>(p.arrivals().begin(), p.arrivals().end());
      },
      py::arg("types"), py::arg("gamma"), py::arg("t0") = py::none(),
      py::arg("eps_green") = kDefaultGreenEpsilon);
  m.def(
      "check_nash",
      [](std::vector<double> arrivals, std::vector<double> types, double gamma,
         std::optional<double> t0) -> py::object {
        TypeProfile tp = Types(std::move(types), gamma, t0);
        NashVerdict v = CheckNash(StrategyProfile(tp, std::move(arrivals)), tp);
        if (v.is_equilibrium()) return py::none();
        py::dict d;
        d["player"] = v.witness->player;
        d["deviation"] = v.witness->deviation;
        d["current_service_time"] = v.witness->current_service_time;
        d["deviated_service_time"] = v.witness->deviated_service_time;
        return d;
      },
      py::arg("arrivals"), py::arg("types"), py::arg("gamma"),
      py::arg("t0") = py::none(),
      "None for an equilibrium, else a profitable deviation.");
  m.def(
      "slack_vector",
      [](std::vector<double> types, double gamma, std::optional<double> t0) {
        SlackReport r = SlackVector(Types(std::move(types), gamma, t0));
        return py::make_tuple(r.slack, r.predecessor_completion);
      },
      py::arg("types"), py::arg("gamma"), py::arg("t0") = py::none(),
      "(slack, predecessor completion) per player.");

  m.def(
      "deviation_gain",
      [](int player, double shift, double window_lo, double window_hi,
         int players, double gamma, int64_t samples, uint64_t seed,
         double prior_lo, double prior_hi, int threads) {
        PriorSpec prior{Prior::Uniform(prior_lo, prior_hi), players};
        McEstimate e;
        {
          py::gil_scoped_release release;
          e = DeviationGain(player, shift, window_lo, window_hi, prior, gamma,
                            Options(samples, seed, threads));
        }
        return EstimateDict(e);
      },
      py::arg("player"), py::arg("shift"), py::arg("window_lo"),
      py::arg("window_hi"), py::arg("players"), py::arg("gamma"),
      py::arg("samples") = 100000, py::arg("seed") = 1,
      py::arg("prior_lo") = 0.0, py::arg("prior_hi") = 1.0,
      py::arg("threads") = 0);
  m.def(
      "best_response_scan",
      [](int player, double own_type, std::vector<double> grid, int players,
         double gamma, int64_t samples, uint64_t seed, double prior_lo,
         double prior_hi) {
        PriorSpec prior{Prior::Uniform(prior_lo, prior_hi), players};
        BestResponseScan scan;
        {
          py::gil_scoped_release release;
          scan = ScanBestResponse(player, own_type, grid, prior, gamma,
                                  Options(samples, seed, 0));
        }
        py::list rows;
        for (const auto& row : scan.rows) {
          py::dict d = EstimateDict(row.estimate);
          d["arrival"] = row.arrival;
          rows.append(d);
        }
        return py::make_tuple(scan.argmin, rows);
      },
      py::arg("player"), py::arg("own_type"), py::arg("grid"),
      py::arg("players"), py::arg("gamma"), py::arg("samples") = 100000,
      py::arg("seed") = 1, py::arg("prior_lo") = 0.0,
      py::arg("prior_hi") = 1.0);

  m.def(
      "haversine_km",
      [](double lat1, double lon1, double lat2, double lon2) {
        return ais::HaversineKm({lat1, lon1}, {lat2, lon2});
      },
      py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"));
  m.def(
      "calibrate_gamma",
      [](std::vector<double> berth_starts, double min_interval, double trim) {
        ais::GeofenceParams params;
        params.min_interval_hours = min_interval;
        params.trim = trim;
        ais::GammaCalibration c = ais::CalibrateGamma(berth_starts, params);
        py::dict d;
        d["gamma"] = c.gamma;
        d["events"] = c.events;
        d["intervals_used"] = c.intervals_used;
        d["trimmed_each_side"] = c.trimmed_each_side;
        d["low_sample"] = c.low_sample;
        return d;
      },
      py::arg("berth_starts"), py::arg("min_interval") = 0.1,
      py::arg("trim") = 0.10);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        std::ostringstream out, err;
        int code = RunCli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"),
      "Runs a command-line invocation in-process: (exit code, stdout, "
      "stderr).");
}
