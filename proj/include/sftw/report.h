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

#ifndef SFTW_REPORT_H_
#define SFTW_REPORT_H_

// File formats shared by the commands. CSV files are comma-separated UTF-8
// with a mandatory header row and '\n' line endings; numbers are written in
// the shortest form that reads back to the same double.

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sftw/ais.h"
#include "sftw/counterfactual.h"
#include "sftw/equilibrium.h"
#include "sftw/stats.h"

namespace sftw {

// Raised when a CSV file does not have the expected columns or values.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest round-trip representation.
std::string FormatNumber(double x);
// At most `digits` significant digits, for console output.
std::string FormatShort(double x, int digits = 10);

std::vector<double> ParseNumberList(const std::string& text);

void WriteVoyagesCsv(std::ostream& out, std::span<const ais::Voyage> voyages,
                     int64_t epoch_unix_seconds);
// Needs columns vessel_id and t_entry_h; waiting_hours is optional.
std::vector<ObservedCall> ReadVoyagesCsv(std::istream& in);

struct SlackRow {
  std::string vessel_id;
  double t_entry = 0;
  double delta = 0;
  double predecessor_completion = 0;
};

std::vector<SlackRow> SlackRows(std::span<const ObservedCall> calls,
                                const SlackReport& report);
void WriteSlackCsv(std::ostream& out, std::span<const SlackRow> rows);
std::vector<SlackRow> ReadSlackCsv(std::istream& in);

void WriteHistogramCsv(std::ostream& out, const Histogram& histogram);

struct ReportInputs {
  std::vector<ObservedCall> calls;  // window order
  SlackReport report;
  double gamma = 0;
  double tie_tolerance = kDefaultTieTolerance;
  double bin_width = 0.5;
  double trim = 0.10;
  std::string window_split = "none";
  int windows = 0;
};

// Writes slack.csv, summary.json and histograms/{slack,waiting}.csv under
// `dir`, creating it when needed. Throws std::runtime_error when a file
// cannot be written.
void ExportReport(const std::filesystem::path& dir, const ReportInputs& inputs);

// Contents of calibration.json for an ingest run.
std::string CalibrationJson(const ais::PipelineResult& result,
                            const ais::GeofenceParams& params);

// Writes `text` to `path`, replacing any previous file.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace sftw

#endif  // SFTW_REPORT_H_
