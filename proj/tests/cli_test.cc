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

#include "sftw/cli.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sftw/report.h"
#include "sftw/run_config.h"

namespace sftw {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Fixture(const std::string& name) {
  return (fs::path(SFTW_FIXTURE_DIR) / name).string();
}

// Fresh directory under the system temp area.
fs::path TempDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "sftw_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json Json(const fs::path& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

TEST_CASE("equilibrium command") {
  Run r = Cli({"equilibrium", "--types", "0,0.5,3", "--gamma", "1"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "types (0, 0.5, 3), gamma 1, t0 0\n"
        "Theta_1 = {0}\n"
        "Theta_2 = [0.5, 1]\n"
        "Theta_3 = {3}\n"
        "green (0, 1, 3)\n"
        "slack total 0.5 h\n");

  r = Cli({"equilibrium", "--types", "1,1", "--gamma", "0.5"});
  CHECK(r.out.find("Theta_1 = {1}\nTheta_2 = {1}\n") != std::string::npos);

  r = Cli({"equilibrium", "--types", "0,0.5,3", "--gamma", "1", "--verify"});
  CHECK(r.code == 0);
  CHECK(r.out.ends_with("equilibrium\n"));

  fs::path dir = TempDir("equilibrium");
  r = Cli({"equilibrium", "--types", "0,0.5,0.8", "--gamma", "1", "--eps-green",
           "0.01", "--out-dir", dir.string()});
  auto j = Json(dir / "equilibrium.json");
  CHECK(j["sets"][1]["upper_closed"] == false);
  CHECK(j["green"][1].get<double>() == doctest::Approx(0.79));
  CHECK(fs::exists(dir / "run-manifest.json"));

  CHECK(Cli({"equilibrium", "--types", "1,0", "--gamma", "1"}).code == 2);
  CHECK(Cli({"equilibrium", "--types", "0,1"}).code == 2);
  CHECK(Cli({"equilibrium", "--types", "0,x", "--gamma", "1"}).code == 2);
}

TEST_CASE("ingest command") {
  fs::path dir = TempDir("ingest");
  Run r = Cli({"ingest", "--input", Fixture("ingest_ais.csv"), "--out-dir",
               dir.string()});
  CHECK(r.code == 0);
  auto cal = Json(dir / "calibration.json");
  CHECK(cal["voyages"] == 3);
  CHECK(cal["gamma"].get<double>() == 4.0);
  CHECK(cal["detection"]["entries"] == 4);
  std::ifstream voyages(dir / "voyages.csv");
  auto calls = ReadVoyagesCsv(voyages);
  REQUIRE(calls.size() == 3);
  CHECK(calls[0].t_entry == 100);
  CHECK(calls[0].waiting_hours == 32);

  fs::path narrow = TempDir("ingest_50");
  r = Cli({"ingest", "--input", Fixture("ingest_ais.csv"), "--out-dir",
           narrow.string(), "--r-port", "50"});
  CHECK(r.code == 0);
  CHECK(Json(narrow / "calibration.json")["detection"]["entries"] == 3);
  CHECK(Json(narrow / "calibration.json")["params"]["r_port"] == 50.0);

  fs::path empty = TempDir("ingest_empty");
  std::ofstream(empty / "empty.csv").close();
  CHECK(Cli({"ingest", "--input", (empty / "empty.csv").string(), "--out-dir",
             empty.string()})
            .code == 3);
  CHECK(Cli({"ingest", "--input", (empty / "missing.csv").string()}).code == 2);
  std::ofstream(empty / "bad.csv") << "a,b,c\n1,2,3\n";
  CHECK(Cli({"ingest", "--input", (empty / "bad.csv").string(), "--out-dir",
             empty.string()})
            .code == 2);
  CHECK(Cli({"ingest", "--input", Fixture("ingest_ais.csv"), "--r-berth", "90",
             "--out-dir", empty.string()})
            .code == 2);
}

TEST_CASE("config file precedence") {
  fs::path dir = TempDir("config");
  std::ofstream(dir / "run.conf") << "# narrower port\nr_port = 50\n";
  Run r = Cli({"ingest", "--input", Fixture("ingest_ais.csv"), "--config",
               (dir / "run.conf").string(), "--out-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(Json(dir / "calibration.json")["detection"]["entries"] == 3);
  CHECK(Json(dir / "run-manifest.json")["config"]["r_port"] == "50");

  r = Cli({"ingest", "--input", Fixture("ingest_ais.csv"), "--config",
           (dir / "run.conf").string(), "--r-port", "60", "--out-dir",
           dir.string()});
  CHECK(Json(dir / "calibration.json")["detection"]["entries"] == 4);

  std::ofstream(dir / "bad.conf") << "r_prot = 50\n";
  CHECK(Cli({"ingest", "--input", Fixture("ingest_ais.csv"), "--config",
             (dir / "bad.conf").string(), "--out-dir", dir.string()})
            .code == 2);
  CHECK(Cli({"ingest", "--input", Fixture("ingest_ais.csv"), "--seed", "3"})
            .code == 2);
}

TEST_CASE("slack command") {
  fs::path dir = TempDir("slack");
  Run r = Cli({"slack", "--input", Fixture("worked_voyages.csv"), "--gamma",
               "1", "--out-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("mean 0.1667 h, median 0.0000 h, total 0.5000 h") !=
        std::string::npos);
  std::ifstream in(dir / "slack.csv");
  auto rows = ReadSlackCsv(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].delta == 0.5);
  CHECK(Json(dir / "summary.json")["count"] == 3);
  CHECK(fs::exists(dir / "histograms" / "slack.csv"));
  CHECK(fs::exists(dir / "histograms" / "waiting.csv"));

  fs::path one = TempDir("slack_one");
  std::ofstream(one / "v.csv") << "vessel_id,t_entry_h\nX,5\n";
  r = Cli({"slack", "--input", (one / "v.csv").string(), "--gamma", "2",
           "--out-dir", one.string()});
  CHECK(r.out.find("mean 0.0000 h, median 0.0000 h, total 0.0000 h") !=
        std::string::npos);

  std::ofstream(one / "bad.csv") << "vessel,entry\nX,5\n";
  CHECK(Cli({"slack", "--input", (one / "bad.csv").string(), "--gamma", "2",
             "--out-dir", one.string()})
            .code == 2);
  CHECK(Cli({"slack", "--input", Fixture("worked_voyages.csv"), "--out-dir",
             one.string()})
            .code == 2);

  fs::path split = TempDir("slack_split");
  r = Cli({"slack", "--input", Fixture("worked_voyages.csv"), "--gamma", "1",
           "--window-split", "day", "--out-dir", split.string()});
  CHECK(r.code == 0);
  CHECK(Json(split / "summary.json")["windows"] == 1);
  CHECK(Cli({"slack", "--input", Fixture("worked_voyages.csv"), "--gamma", "1",
             "--window-split", "week", "--out-dir", split.string()})
            .code == 2);

  fs::path empty = TempDir("slack_empty");
  std::ofstream(empty / "v.csv") << "vessel_id,t_entry_h\n";
  CHECK(Cli({"slack", "--input", (empty / "v.csv").string(), "--gamma", "1",
             "--out-dir", empty.string()})
            .code == 3);
  CHECK(Json(empty / "summary.json")["count"] == 0);
  CHECK(Slurp(empty / "histograms" / "slack.csv") == "bin_left_edge,count\n");
}

TEST_CASE("slack uses the calibration next to the voyages") {
  fs::path dir = TempDir("chain");
  CHECK(Cli({"ingest", "--input", Fixture("ingest_ais.csv"), "--out-dir",
             dir.string()})
            .code == 0);
  Run r = Cli({"slack", "--input", (dir / "voyages.csv").string(), "--out-dir",
               (dir / "report").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("gamma 4 h") != std::string::npos);
}

TEST_CASE("simulate command") {
  fs::path a = TempDir("sim_a");
  fs::path b = TempDir("sim_b");
  std::vector<std::string> args{"simulate", "--samples", "20000", "--seed",
                                "9", "--players", "3"};
  auto with_dir = [&](const fs::path& d) {
    auto v = args;
    v.push_back("--out-dir");
    v.push_back(d.string());
    return v;
  };
  Run ra = Cli(with_dir(a));
  Run rb = Cli(with_dir(b));
  CHECK(ra.code == 0);
  CHECK(ra.out == rb.out);
  CHECK(ra.out.find("all gains <= 0 at 95%") != std::string::npos);
  for (const char* f : {"deviation.csv", "best_response.csv",
                        "run-manifest.json"}) {
    CHECK(Slurp(a / f) == Slurp(b / f));
  }

  fs::path z = TempDir("sim_zero");
  CHECK(Cli({"simulate", "--samples", "5000", "--shift", "0", "--out-dir",
             z.string()})
            .code == 0);
  std::istringstream dev(Slurp(z / "deviation.csv"));
  std::string line;
  std::getline(dev, line);
  std::getline(dev, line);
  // players,gamma,shift,window_lo,window_hi,samples,seed,gain,...
  std::vector<std::string> fields;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  REQUIRE(fields.size() == 11);
  CHECK(fields[7] == "0");
  CHECK(fields[8] == "0");
}

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 10000; ++k) {
    double x = u(rng) * std::pow(10.0, k % 20 - 10);
    CHECK(std::stod(FormatNumber(x)) == x);
  }
  CHECK(FormatNumber(0.5) == "0.5");
  CHECK(FormatNumber(-0.0) == "0");
  CHECK(FormatShort(0.79000000000000004) == "0.79");
}

TEST_CASE("slack csv round trip") {
  std::vector<SlackRow> rows{{"a", 0.1, 0.30000000000000004, 1.0 / 3},
                             {"b", 1e-300, 0, 123456.789}};
  std::ostringstream out;
  WriteSlackCsv(out, rows);
  std::istringstream in(out.str());
  auto back = ReadSlackCsv(in);
  REQUIRE(back.size() == 2);
  for (size_t k = 0; k < rows.size(); ++k) {
    CHECK(back[k].vessel_id == rows[k].vessel_id);
    CHECK(back[k].t_entry == rows[k].t_entry);
    CHECK(back[k].delta == rows[k].delta);
    CHECK(back[k].predecessor_completion == rows[k].predecessor_completion);
  }
}

TEST_CASE("config file parsing") {
  std::istringstream ok("gamma = 4\n\n# comment\nseed=7  # trailing\n");
  auto values = ParseConfigFile(ok);
  CHECK(values.at("gamma") == "4");
  CHECK(values.at("seed") == "7");
  std::istringstream twice("gamma = 4\ngamma = 5\n");
  CHECK_THROWS_AS(ParseConfigFile(twice), ConfigError);
  std::istringstream no_eq("gamma 4\n");
  CHECK_THROWS_AS(ParseConfigFile(no_eq), ConfigError);

  std::vector<std::string> allowed{"gamma"};
  RunConfig c = ResolveConfig(allowed, {{"gamma", "4"}, {"seed", "3"}},
                              {{"gamma", "5"}});
  CHECK(*c.gamma == 5);
  CHECK(c.seed == 3);
  CHECK_THROWS_AS(ResolveConfig(allowed, {}, {{"seed", "3"}}), ConfigError);
  CHECK_THROWS_AS(ResolveConfig(allowed, {{"seed", "x"}}, {}), ConfigError);
  for (const ConfigField& f : ConfigFields()) {
    CHECK(f.flag().starts_with("--"));
    CHECK(f.flag().find('_') == std::string::npos);
  }
}

}  // namespace
}  // namespace sftw
