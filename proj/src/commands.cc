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

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sftw/ais.h"
#include "sftw/bayes.h"
#include "sftw/cli.h"
#include "sftw/counterfactual.h"
#include "sftw/equilibrium.h"
#include "sftw/report.h"
#include "sftw/run_config.h"
#include "sftw/text.h"

namespace sftw {
namespace {

namespace fs = std::filesystem;

// Errors that map to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kIngestKeys = {
    "input",          "metadata",  "ship_type",    "center_lat",
    "center_lon",     "r_frame",   "r_port",       "r_berth",
    "v_stop",         "v_go",      "min_stop_hours", "berth_min",
    "berth_max",      "min_interval", "trim",      "gap_break",
    "max_sog"};
const std::vector<std::string> kSlackKeys = {
    "input", "gamma", "t0", "eps_tie", "window_split", "bin_width", "trim"};
const std::vector<std::string> kEquilibriumKeys = {
    "input", "types", "gamma", "t0", "eps_tie", "eps_green", "eps_probe",
    "verify"};
const std::vector<std::string> kSimulateKeys = {
    "players",  "gamma",    "samples",  "seed",     "threads",
    "shift",    "window_lo", "window_hi", "prior_lo", "prior_hi",
    "own_type", "grid",     "eps_tie"};

struct Invocation {
  std::string command;
  std::vector<std::string> keys;
  std::map<std::string, std::string> flags;
  std::string config_path;
};

RunConfig Resolve(const Invocation& inv) {
  std::map<std::string, std::string> file_values;
  if (!inv.config_path.empty()) {
    std::ifstream in(inv.config_path);
    if (!in) throw InputError("cannot read config file " + inv.config_path);
    file_values = ParseConfigFile(in);
  }
  std::vector<std::string> allowed = inv.keys;
  allowed.push_back("out_dir");
  return ResolveConfig(allowed, file_values, inv.flags);
}

std::string ReadFile(const std::string& path) {
  if (path.empty()) throw InputError("--input is required");
  std::ifstream in(path, std::ios::binary);
  if (!in || fs::is_directory(path)) {
    throw InputError("cannot read input file " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path OutDir(const RunConfig& config) {
  fs::path dir = config.out_dir.empty() ? fs::path(".") : fs::path(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string());
  return dir;
}

void WriteManifest(const fs::path& dir, const Invocation& inv,
                   const RunConfig& config, std::vector<fs::path> inputs) {
  WriteTextFile(dir / "run-manifest.json",
                ManifestJson(inv.command, config, inv.keys, inputs));
}

std::string Tuple(std::span<const double> xs) {
  std::string s = "(";
  for (size_t k = 0; k < xs.size(); ++k) {
    s += (k ? ", " : "") + FormatShort(xs[k]);
  }
  return s + ")";
}

std::string SetText(const EquilibriumInterval& set) {
  if (set.is_singleton) return "{" + FormatShort(set.lower) + "}";
  return "[" + FormatShort(set.lower) + ", " + FormatShort(set.upper) +
         (set.upper_closed ? "]" : ")");
}

int Ingest(const Invocation& inv, std::ostream& out, std::ostream& err) {
  RunConfig config = Resolve(inv);
  config.geofence.Validate();
  std::string text = ReadFile(config.input);
  std::istringstream in(text);
  ais::ParsedAis parsed = ais::ParseAisCsv(in, config.geofence);

  ais::PipelineOptions options;
  options.params = config.geofence;
  options.ship_type_match = config.ship_type;
  std::vector<fs::path> inputs{config.input};
  if (!config.metadata.empty()) {
    std::istringstream meta(ReadFile(config.metadata));
    options.metadata = ais::ParseVesselMetadata(meta);
    inputs.push_back(config.metadata);
  }
  ais::PipelineResult result = ais::RunPipeline(parsed, options);

  fs::path dir = OutDir(config);
  std::ostringstream csv;
  WriteVoyagesCsv(csv, result.voyages, result.epoch_unix_seconds);
  WriteTextFile(dir / "voyages.csv", csv.str());
  WriteTextFile(dir / "calibration.json",
                CalibrationJson(result, config.geofence));
  WriteManifest(dir, inv, config, inputs);

  const ais::CleaningTally& c = result.cleaning;
  out << fmt::format(
      "records {} kept {} (malformed {}, bad coordinates {}, speed {}, "
      "duplicates {})\n",
      c.rows, c.kept, c.malformed, c.invalid_coordinates, c.speed_out_of_range,
      c.duplicates);
  out << fmt::format("vessels {}, frame callers {}, port entries {}\n",
                     result.vessels, result.frame_callers,
                     result.voyage_tally.entries);
  out << fmt::format("voyages {}\n", result.voyages.size());
  if (result.calibration) {
    out << fmt::format("gamma {} h from {} berth starts{}\n",
                       FormatShort(result.calibration->gamma, 6),
                       result.calibration->events,
                       result.calibration->low_sample ? " (low sample)" : "");
  } else {
    out << "gamma not calibrated (no usable berth-start interval)\n";
  }
  if (result.voyages.empty()) {
    err << "no voyages found\n";
    return kExitEmptyResult;
  }
  return kExitOk;
}

double GammaFor(const RunConfig& config) {
  if (config.gamma) return *config.gamma;
  fs::path calibration = fs::path(config.input).parent_path() / "calibration.json";
  std::ifstream in(calibration);
  if (in) {
    auto j = nlohmann::json::parse(in, nullptr, false);
    if (!j.is_discarded() && j.contains("gamma") && j["gamma"].is_number()) {
      return j["gamma"].get<double>();
    }
  }
  throw InputError("--gamma is required (no calibrated gamma next to the input)");
}

int Slack(const Invocation& inv, std::ostream& out, std::ostream& err) {
  RunConfig config = Resolve(inv);
  std::string text = ReadFile(config.input);
  std::istringstream in(text);
  std::vector<ObservedCall> calls = ReadVoyagesCsv(in);
  const double gamma = GammaFor(config);
  if (!(gamma > 0)) throw InputError("gamma must be positive");
  WindowSplit split;
  if (config.window_split == "none") {
    split = WindowSplit::kNone;
  } else if (config.window_split == "day") {
    split = WindowSplit::kDay;
  } else {
    throw InputError("--window-split must be none or day");
  }

  ReportInputs report;
  report.gamma = gamma;
  report.tie_tolerance = config.eps_tie;
  report.bin_width = config.bin_width;
  report.trim = config.geofence.trim;
  report.window_split = config.window_split;
  if (!calls.empty()) {
    AnalysisWindow whole(calls, gamma, config.t0);
    for (const AnalysisWindow& w : SplitWindow(whole, split)) {
      SlackAnalysis a = RunSlackAnalysis(w, config.eps_tie, config.bin_width);
      report.calls.insert(report.calls.end(), w.calls().begin(),
                          w.calls().end());
      auto& r = report.report;
      r.slack.insert(r.slack.end(), a.report.slack.begin(),
                     a.report.slack.end());
      r.predecessor_completion.insert(r.predecessor_completion.end(),
                                      a.report.predecessor_completion.begin(),
                                      a.report.predecessor_completion.end());
      ++report.windows;
    }
  }
  fs::path dir = OutDir(config);
  ExportReport(dir, report);
  WriteManifest(dir, inv, config, {config.input});

  SlackSummary s = AggregateSlack(report.report, config.bin_width);
  out << fmt::format("voyages {}, gamma {} h, windows {}\n", s.count,
                     FormatShort(gamma, 6), report.windows);
  out << fmt::format("mean {:.4f} h, median {:.4f} h, total {:.4f} h\n", s.mean,
                     s.median, s.total);
  if (calls.empty()) {
    err << "no voyages in " << config.input << "\n";
    return kExitEmptyResult;
  }
  return kExitOk;
}

std::vector<double> TypesFor(const RunConfig& config) {
  if (!config.types.empty()) return ParseNumberList(config.types);
  std::istringstream in(ReadFile(config.input));
  std::vector<double> types;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    std::string field = SplitCsv(line)[0];
    std::optional<double> v = ParseDouble(field);
    if (!v && first) {  // header
      first = false;
      continue;
    }
    first = false;
    if (!v) throw SchemaError("not a number: '" + field + "'");
    types.push_back(*v);
  }
  return types;
}

int Equilibrium(const Invocation& inv, std::ostream& out, std::ostream& err) {
  RunConfig config = Resolve(inv);
  if (!config.gamma) throw InputError("--gamma is required");
  std::vector<double> t = TypesFor(config);
  if (t.empty()) throw InputError("no types given");
  if (!std::is_sorted(t.begin(), t.end())) {
    throw InputError("types must be sorted ascending");
  }
  TypeProfile types(t, *config.gamma, config.t0.value_or(t.front()));
  StrategyProfile green =
      GreenProfile(types, config.eps_green, config.eps_tie);
  auto sets = EquilibriumSets(types, green.arrivals(), config.eps_tie);
  SlackReport slack = SlackVector(types, config.eps_tie);
  double total = 0;
  for (double d : slack.slack) total += d;

  out << "types " << Tuple(types.types()) << ", gamma "
      << FormatShort(types.gamma()) << ", t0 " << FormatShort(types.t0())
      << "\n";
  for (const auto& set : sets) {
    out << "Theta_" << set.player + 1 << " = " << SetText(set) << "\n";
  }
  out << "green " << Tuple(green.arrivals()) << "\n";
  out << "slack total " << FormatShort(total) << " h\n";

  nlohmann::ordered_json j;
  j["gamma"] = types.gamma();
  j["t0"] = types.t0();
  j["types"] = t;
  auto& js = j["sets"] = nlohmann::ordered_json::array();
  for (const auto& set : sets) {
    js.push_back({{"player", set.player + 1},
                  {"lower", set.lower},
                  {"upper", set.upper},
                  {"upper_closed", set.upper_closed},
                  {"singleton", set.is_singleton},
                  {"theta", set.theta}});
  }
  j["green"] = std::vector<double>(green.arrivals().begin(),
                                   green.arrivals().end());
  j["slack"] = slack.slack;
  j["slack_total"] = total;

  int code = kExitOk;
  if (config.verify) {
    NashCheckOptions options;
    options.epsilon_probe = config.eps_probe;
    NashVerdict verdict = CheckNash(green, types, options);
    if (verdict.is_equilibrium()) {
      out << "equilibrium\n";
      j["verify"] = "equilibrium";
    } else {
      const DeviationWitness& w = *verdict.witness;
      std::string msg = fmt::format(
          "not an equilibrium: player {} gains by arriving at {} (service "
          "time {} -> {})",
          w.player + 1, FormatShort(w.deviation),
          FormatShort(w.current_service_time),
          FormatShort(w.deviated_service_time));
      out << msg << "\n";
      err << msg << "\n";
      j["verify"] = msg;
      code = kExitInvariantViolation;
    }
  }
  if (!config.out_dir.empty()) {
    fs::path dir = OutDir(config);
    WriteTextFile(dir / "equilibrium.json", j.dump(2) + "\n");
    std::vector<fs::path> inputs;
    if (config.types.empty()) inputs.push_back(config.input);
    WriteManifest(dir, inv, config, inputs);
  }
  return code;
}

int Simulate(const Invocation& inv, std::ostream& out, std::ostream&) {
  RunConfig config = Resolve(inv);
  const double gamma = config.gamma.value_or(0.1);
  if (config.players < 1) throw InputError("--players must be at least 1");
  if (config.samples < 1) throw InputError("--samples must be positive");
  if (!(config.prior_lo < config.prior_hi)) {
    throw InputError("--prior-lo must be below --prior-hi");
  }
  PriorSpec prior{Prior::Uniform(config.prior_lo, config.prior_hi),
                  config.players};
  McOptions options;
  options.samples = config.samples;
  options.seed = config.seed;
  options.tie_tolerance = config.eps_tie;
  options.threads = config.threads;
  const double lo = config.window_lo.value_or(config.prior_lo);
  const double hi = config.window_hi.value_or(config.prior_hi);

  fs::path dir = OutDir(config);
  std::ostringstream dev;
  dev << "players,gamma,shift,window_lo,window_hi,samples,seed,gain,"
         "half_width_95,upper_95,nonpositive_95\n";
  out << fmt::format("{:>8} {:>8} {:>14} {:>12} {:>12}\n", "shift", "gamma",
                     "gain", "half_width", "upper_95");
  bool all_nonpositive = true;
  for (double shift : ParseNumberList(config.shift)) {
    McEstimate g = DeviationGain(0, shift, lo, hi, prior, gamma, options);
    const bool ok = g.upper_95() <= 0;
    all_nonpositive = all_nonpositive && ok;
    dev << config.players << ',' << FormatNumber(gamma) << ','
        << FormatNumber(shift) << ',' << FormatNumber(lo) << ','
        << FormatNumber(hi) << ',' << g.samples << ',' << g.seed << ','
        << FormatNumber(g.mean) << ',' << FormatNumber(g.half_width_95) << ','
        << FormatNumber(g.upper_95()) << ',' << (ok ? "true" : "false")
        << '\n';
    out << fmt::format("{:>8} {:>8} {:>14.6e} {:>12.4e} {:>12.4e}\n",
                       FormatShort(shift), FormatShort(gamma), g.mean,
                       g.half_width_95, g.upper_95());
  }
  WriteTextFile(dir / "deviation.csv", dev.str());
  out << (all_nonpositive ? "all gains <= 0 at 95%\n"
                          : "some gains are not <= 0 at 95%\n");

  std::vector<double> grid = ParseNumberList(config.grid);
  if (grid.empty()) {
    for (int k = 0;; ++k) {
      // Rounded to 12 digits so accumulated 0.1 steps print cleanly.
      double x = *ParseDouble(FormatShort(config.own_type + 0.1 * k, 12));
      if (x > config.prior_hi + 1e-9) break;
      grid.push_back(x);
    }
  }
  BestResponseScan scan =
      ScanBestResponse(0, config.own_type, grid, prior, gamma, options);
  std::ostringstream br;
  br << "arrival,estimate,half_width_95\n";
  for (const auto& row : scan.rows) {
    br << FormatNumber(row.arrival) << ',' << FormatNumber(row.estimate.mean)
       << ',' << FormatNumber(row.estimate.half_width_95) << '\n';
  }
  WriteTextFile(dir / "best_response.csv", br.str());
  out << fmt::format("best response for type {}: arrive at {}\n",
                     FormatShort(config.own_type), FormatShort(scan.argmin));
  WriteManifest(dir, inv, config, {});
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Arrival-time game analysis for FCFS ports", "sftw"};
  app.require_subcommand(1);
  struct Command {
    std::string name;
    std::string help;
    const std::vector<std::string>* keys;
    int (*run)(const Invocation&, std::ostream&, std::ostream&);
  };
  const Command commands[] = {
      {"ingest", "AIS records -> voyages.csv and calibration.json",
       &kIngestKeys, &Ingest},
      {"slack", "voyages.csv -> slack report", &kSlackKeys, &Slack},
      {"equilibrium", "equilibrium sets and green profile for known types",
       &kEquilibriumKeys, &Equilibrium},
      {"simulate", "Monte Carlo deviation gains and best responses",
       &kSimulateKeys, &Simulate},
  };
  std::vector<Invocation> invocations(std::size(commands));
  std::vector<CLI::App*> subs;
  for (size_t k = 0; k < std::size(commands); ++k) {
    Invocation& inv = invocations[k];
    inv.command = commands[k].name;
    inv.keys = *commands[k].keys;
    CLI::App* sub = app.add_subcommand(commands[k].name, commands[k].help);
    sub->add_option("--config", inv.config_path, "flat key = value file");
    std::vector<std::string> keys = inv.keys;
    keys.push_back("out_dir");
    for (const std::string& key : keys) {
      const ConfigField& field = FindField(key);
      if (field.is_switch) {
        sub->add_flag_callback(
            field.flag(), [&inv, key] { inv.flags[key] = "true"; },
            field.help);
      } else {
        sub->add_option_function<std::string>(
            field.flag(),
            [&inv, key](const std::string& v) { inv.flags[key] = v; },
            field.help);
      }
    }
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  for (size_t k = 0; k < subs.size(); ++k) {
    if (!subs[k]->parsed()) continue;
    try {
      return commands[k].run(invocations[k], out, err);
    } catch (const std::logic_error& e) {
      // std::invalid_argument marks bad user input; any other logic_error is
      // a broken invariant.
      if (dynamic_cast<const std::invalid_argument*>(&e) ||
          dynamic_cast<const std::out_of_range*>(&e) ||
          dynamic_cast<const std::length_error*>(&e)) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
      }
      err << "internal error: " << e.what() << "\n";
      return kExitInvariantViolation;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitInputError;
    }
  }
  return kExitInputError;
}

}  // namespace sftw
