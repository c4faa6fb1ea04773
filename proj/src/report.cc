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

#include "sftw/report.h"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "sftw/text.h"

namespace sftw {
namespace {

using nlohmann::ordered_json;

constexpr const char* kVoyageColumns[] = {
    "vessel_id",      "tau_h",         "t_entry_h",       "berth_start_h",
    "berth_end_h",    "service_hours", "waiting_hours",   "tau_utc",
    "t_entry_utc",    "berth_start_utc", "berth_end_utc"};

constexpr const char* kSlackHeader =
    "vessel_id,t_entry,delta,predecessor_completion";

// Header -> column index; throws SchemaError listing what is missing.
std::map<std::string, size_t> ReadHeader(std::istream& in,
                                         std::span<const char* const> required,
                                         const std::string& what) {
  std::string line;
  while (std::getline(in, line) && Trim(line).empty()) {
  }
  if (Trim(line).empty()) throw SchemaError(what + ": missing header row");
  std::map<std::string, size_t> columns;
  std::vector<std::string> names = SplitCsv(line);
  for (size_t k = 0; k < names.size(); ++k) columns.emplace(names[k], k);
  for (const char* name : required) {
    if (!columns.contains(name)) {
      throw SchemaError(what + ": missing column '" + name + "'");
    }
  }
  return columns;
}

double Field(const std::vector<std::string>& fields, size_t column,
             int64_t line_no, const std::string& what) {
  std::optional<double> v;
  if (column < fields.size()) v = ParseDouble(fields[column]);
  if (!v) {
    throw SchemaError(what + ": bad number on line " + std::to_string(line_no));
  }
  return *v;
}

ordered_json HistogramJson(const Histogram& h) {
  return {{"origin", h.origin},
          {"bin_width", h.bin_width},
          {"bins", h.counts.size()}};
}

}  // namespace

std::string FormatNumber(double x) {
  if (x == 0) return "0";  // also folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string FormatShort(double x, int digits) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::string s = fmt::format("{:.{}g}", x, digits);
  return s == "-0" ? "0" : s;
}

std::vector<double> ParseNumberList(const std::string& text) {
  std::vector<double> values;
  if (Trim(text).empty()) return values;
  for (const std::string& field : SplitCsv(text)) {
    std::optional<double> v = ParseDouble(field);
    if (!v) throw SchemaError("not a number: '" + field + "'");
    values.push_back(*v);
  }
  return values;
}

void WriteVoyagesCsv(std::ostream& out, std::span<const ais::Voyage> voyages,
                     int64_t epoch_unix_seconds) {
  for (size_t k = 0; k < std::size(kVoyageColumns); ++k) {
    out << (k ? "," : "") << kVoyageColumns[k];
  }
  out << '\n';
  auto utc = [&](double hours) {
    return ais::FormatIsoTimestamp(epoch_unix_seconds + hours * 3600.0);
  };
  for (const ais::Voyage& v : voyages) {
    out << v.vessel_id << ',' << FormatNumber(v.tau) << ','
        << FormatNumber(v.t_entry) << ',' << FormatNumber(v.berth_start) << ','
        << FormatNumber(v.berth_end) << ',' << FormatNumber(v.service_hours())
        << ',' << FormatNumber(v.waiting_hours()) << ',' << utc(v.tau) << ','
        << utc(v.t_entry) << ',' << utc(v.berth_start) << ','
        << utc(v.berth_end) << '\n';
  }
}

std::vector<ObservedCall> ReadVoyagesCsv(std::istream& in) {
  const char* required[] = {"vessel_id", "t_entry_h"};
  const std::string what = "voyages file";
  auto columns = ReadHeader(in, required, what);
  const size_t id = columns.at("vessel_id");
  const size_t entry = columns.at("t_entry_h");
  auto wait = columns.find("waiting_hours");
  std::vector<ObservedCall> calls;
  std::string line;
  int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::vector<std::string> f = SplitCsv(line);
    if (id >= f.size() || f[id].empty()) {
      throw SchemaError(what + ": missing vessel_id on line " +
                        std::to_string(line_no));
    }
    ObservedCall call{f[id], Field(f, entry, line_no, what), 0};
    if (wait != columns.end()) {
      call.waiting_hours = Field(f, wait->second, line_no, what);
    }
    calls.push_back(std::move(call));
  }
  return calls;
}

std::vector<SlackRow> SlackRows(std::span<const ObservedCall> calls,
                                const SlackReport& report) {
  std::vector<SlackRow> rows;
  for (size_t k = 0; k < calls.size(); ++k) {
    rows.push_back({calls[k].vessel_id, calls[k].t_entry, report.slack[k],
                    report.predecessor_completion[k]});
  }
  return rows;
}

void WriteSlackCsv(std::ostream& out, std::span<const SlackRow> rows) {
  out << kSlackHeader << '\n';
  for (const SlackRow& r : rows) {
    out << r.vessel_id << ',' << FormatNumber(r.t_entry) << ','
        << FormatNumber(r.delta) << ',' << FormatNumber(r.predecessor_completion)
        << '\n';
  }
}

std::vector<SlackRow> ReadSlackCsv(std::istream& in) {
  const char* required[] = {"vessel_id", "t_entry", "delta",
                            "predecessor_completion"};
  const std::string what = "slack file";
  auto columns = ReadHeader(in, required, what);
  std::vector<SlackRow> rows;
  std::string line;
  int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::vector<std::string> f = SplitCsv(line);
    SlackRow r;
    r.vessel_id = f[columns.at("vessel_id")];
    r.t_entry = Field(f, columns.at("t_entry"), line_no, what);
    r.delta = Field(f, columns.at("delta"), line_no, what);
    r.predecessor_completion =
        Field(f, columns.at("predecessor_completion"), line_no, what);
    rows.push_back(std::move(r));
  }
  return rows;
}

void WriteHistogramCsv(std::ostream& out, const Histogram& histogram) {
  out << "bin_left_edge,count\n";
  for (size_t k = 0; k < histogram.counts.size(); ++k) {
    out << FormatNumber(histogram.left_edge(static_cast<int>(k))) << ','
        << histogram.counts[k] << '\n';
  }
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void ExportReport(const std::filesystem::path& dir,
                  const ReportInputs& inputs) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "histograms", ec);
  if (ec) {
    throw std::runtime_error("cannot create " + dir.string() + ": " +
                             ec.message());
  }
  SlackSummary slack = AggregateSlack(inputs.report, inputs.bin_width);
  std::vector<double> waits;
  for (const ObservedCall& c : inputs.calls) waits.push_back(c.waiting_hours);
  Summary waiting = Summarize(waits, inputs.trim);
  Histogram waiting_hist = MakeHistogram(waits, inputs.bin_width);

  std::ostringstream csv;
  WriteSlackCsv(csv, SlackRows(inputs.calls, inputs.report));
  WriteTextFile(dir / "slack.csv", csv.str());

  std::ostringstream hist;
  WriteHistogramCsv(hist, slack.histogram);
  WriteTextFile(dir / "histograms" / "slack.csv", hist.str());
  hist.str("");
  WriteHistogramCsv(hist, waiting_hist);
  WriteTextFile(dir / "histograms" / "waiting.csv", hist.str());

  ordered_json j;
  j["count"] = slack.count;
  j["slack"] = {{"mean", slack.mean},
                {"median", slack.median},
                {"total", slack.total},
                {"zero_share", slack.zero_share},
                {"count_positive", slack.count_positive},
                {"histogram", HistogramJson(slack.histogram)}};
  j["waiting"] = {{"count", waiting.count},
                  {"mean", waiting.mean},
                  {"median", waiting.median},
                  {"trimmed_mean", waiting.trimmed_mean},
                  {"histogram", HistogramJson(waiting_hist)}};
  j["gamma"] = inputs.gamma;
  j["thresholds"] = {{"eps_tie", inputs.tie_tolerance},
                     {"bin_width", inputs.bin_width},
                     {"window_split", inputs.window_split}};
  j["windows"] = inputs.windows;
  WriteTextFile(dir / "summary.json", j.dump(2) + "\n");
}

std::string CalibrationJson(const ais::PipelineResult& r,
                            const ais::GeofenceParams& p) {
  ordered_json j;
  j["epoch_utc"] = ais::FormatIsoTimestamp(r.epoch_unix_seconds);
  j["epoch_unix_seconds"] = r.epoch_unix_seconds;
  if (r.calibration) {
    j["gamma"] = r.calibration->gamma;
    j["gamma_events"] = r.calibration->events;
    j["gamma_intervals"] = r.calibration->intervals;
    j["gamma_intervals_used"] = r.calibration->intervals_used;
    j["gamma_trimmed_each_side"] = r.calibration->trimmed_each_side;
    j["gamma_low_sample"] = r.calibration->low_sample;
  } else {
    j["gamma"] = nullptr;
  }
  j["voyages"] = r.voyages.size();
  j["vessels"] = r.vessels;
  j["type_filtered"] = r.type_filtered;
  j["frame_callers"] = r.frame_callers;
  const ais::CleaningTally& c = r.cleaning;
  j["cleaning"] = {{"rows", c.rows},
                   {"kept", c.kept},
                   {"malformed", c.malformed},
                   {"invalid_coordinates", c.invalid_coordinates},
                   {"speed_out_of_range", c.speed_out_of_range},
                   {"duplicates", c.duplicates},
                   {"malformed_lines", c.malformed_lines}};
  const ais::VoyageTally& v = r.voyage_tally;
  j["detection"] = {{"entries", v.entries},
                    {"voyages", v.voyages},
                    {"incomplete_no_departure", v.incomplete_no_departure},
                    {"no_berth", v.no_berth},
                    {"extra_berth_blocks", v.extra_berth_blocks},
                    {"rejected_berth_blocks", v.rejected_berth_blocks},
                    {"unattributed_berth_blocks", v.unattributed_berth_blocks}};
  j["service_hours"] = {{"count", r.service.count},
                        {"mean", r.service.mean},
                        {"median", r.service.median},
                        {"trimmed_mean", r.service.trimmed_mean}};
  j["waiting_hours"] = {{"count", r.waiting.count},
                        {"mean", r.waiting.mean},
                        {"median", r.waiting.median},
                        {"trimmed_mean", r.waiting.trimmed_mean}};
  j["params"] = {{"center_lat", p.center.lat},
                 {"center_lon", p.center.lon},
                 {"r_frame", p.r_frame_deg},
                 {"r_port", p.r_port_km},
                 {"r_berth", p.r_berth_km},
                 {"v_stop", p.v_stop_kn},
                 {"v_go", p.v_go_kn},
                 {"min_stop_hours", p.min_stop_hours},
                 {"berth_min_hours", p.berth_min_hours},
                 {"berth_max_hours", p.berth_max_hours},
                 {"min_interval_hours", p.min_interval_hours},
                 {"trim", p.trim},
                 {"gap_break_hours", p.gap_break_hours},
                 {"max_sog", p.max_sog_kn}};
  return j.dump(2) + "\n";
}

}  // namespace sftw
