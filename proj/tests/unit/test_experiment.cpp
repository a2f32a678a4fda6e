/*
 * Copyright 2026 The qinet Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "core/dataset_csv.hpp"
#include "core/error.hpp"
#include "experiment/config.hpp"
#include "experiment/curve_table.hpp"
#include "experiment/report.hpp"
#include "experiment/runner.hpp"
#include "helpers.hpp"

using namespace qinet;
namespace fs = std::filesystem;

namespace {

constexpr const char* kMinimal =
    "[experiment]\n"
    "kind = calibration\n"
    "estimators = naive, ipw\n"
    "[simulator]\n"
    "n_buyers = 100\n"
    "n_items = 2\n"
    "eta = product\n";

// Inserts `line` at the top of `section`; keys it sets replace the defaults.
std::string WithLine(const std::string& section, const std::string& line) {
  std::string text = kMinimal;
  std::istringstream added(line);
  for (std::string entry; std::getline(added, entry);) {
    const auto key = entry.substr(0, entry.find(' '));
    const auto existing = text.find("\n" + key + " = ");
    if (existing != std::string::npos) {
      text.erase(existing, text.find('\n', existing + 1) - existing);
    }
  }
  const auto pos = text.find("[" + section + "]\n");
  text.insert(pos + section.size() + 3, line + "\n");
  return text;
}

std::string ErrorOf(const std::string& text) {
  try {
    ParseConfigString(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::size_t CountRows(const fs::path& path, const std::string& needle) {
  std::ifstream in(path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) n += line.find(needle) != std::string::npos;
  return n;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const auto c = ParseConfigString(kMinimal);
  CHECK(c.kind == ExperimentKind::kCalibration);
  CHECK(c.simulator.temperature == 0.1);
  CHECK(c.simulator.treat_prob == 0.5);
  CHECK(c.simulator.mask_prob == 0.5);
  CHECK(c.simulator.mask_mode == sim::MaskMode::kIncrement);
  CHECK(c.simulator.eta == sim::EtaKind::kProduct);
  CHECK(c.grid_size == 10);
  CHECK(c.repetitions == 1);
  CHECK(c.folds == 2);
  CHECK(c.epsilons == std::vector<double>{0.0});
  REQUIRE(c.estimators.size() == 2);
  CHECK(c.estimators[1].Id() == "ipw");
}

TEST_CASE("config errors name the offending key") {
  CHECK(ErrorOf(WithLine("simulator", "n_buyerz = 5")).find("n_buyerz") != std::string::npos);
  CHECK(ErrorOf(WithLine("experiment", "repetitions = 0")).find("repetitions") !=
        std::string::npos);
  CHECK(ErrorOf(WithLine("experiment", "grid_size = -3")).find("grid_size") != std::string::npos);
  CHECK(ErrorOf("[experiment]\nkind = calibration\n[simulator]\nn_buyers = 5\nn_items = 2\neta = max\n")
            .find("estimators") != std::string::npos);
  CHECK(ErrorOf("[experiment]\nkind = calibration\nestimators = ipw\n[simulator]\nn_items = 2\neta = max\n")
            .find("n_buyers") != std::string::npos);
  CHECK(!ErrorOf("[experiment]\nkind = calibration\nestimators = ipw, beta_ipw:0\n[simulator]\n"
                 "n_buyers = 5\nn_items = 2\neta = max\n")
             .empty());
  CHECK(!ErrorOf("[nonsense]\nx = 1\n").empty());
  CHECK(!ErrorOf(WithLine("simulator", "treat_prob = 1.0")).empty());
  CHECK(!ErrorOf(WithLine("experiment", "epsilons = 0, 2")).empty());
  CHECK(!ErrorOf(WithLine("experiment", "estimators = ipw, ipw")).empty());
}

TEST_CASE("estimator ids in configs") {
  const auto c = ParseConfigString(WithLine("experiment", "estimators = beta_ipw:2 ; trailing comment"));
  REQUIRE(c.estimators.size() == 1);
  CHECK(c.estimators[0].kind == EstimatorKind::kBetaIpw);
  CHECK(c.estimators[0].beta == 2);
}

TEST_CASE("epsilon lists accept exact fractions") {
  const auto c = ParseConfigString(
      WithLine("experiment", "epsilons = 0, 1/6, 2/6, 3/6, 4/6, 5/6, 1"));
  REQUIRE(c.epsilons.size() == 7);
  CHECK(c.epsilons[1] == 1.0 / 6.0);
  CHECK(c.epsilons[6] == 1.0);
}

TEST_CASE("every config field changes the hash") {
  const auto base = ParseConfigString(kMinimal);
  const std::uint64_t h = base.Hash();
  CHECK(ParseConfigString(kMinimal).Hash() == h);
  for (const auto& [section, line] : std::vector<std::pair<std::string, std::string>>{
           {"experiment", "seed = 9"},
           {"experiment", "repetitions = 3"},
           {"experiment", "grid_size = 5"},
           {"experiment", "folds = 3"},
           {"experiment", "epsilons = 0.5"},
           {"experiment", "sweep_m = 2, 3"},
           {"simulator", "temperature = 0.2"},
           {"simulator", "treat_prob = 0.4"},
           {"simulator", "mask_prob = 0.3"},
           {"simulator", "mask_mode = whole"},
           {"simulator", "discount = 0.07"},
           {"simulator", "price_base = 21"},
           {"simulator", "attractiveness_scale = 0.01"}}) {
    CAPTURE(line);
    CHECK(ParseConfigString(WithLine(section, line)).Hash() != h);
  }
}

TEST_CASE("sweep points") {
  auto c = ParseConfigString(WithLine("experiment", "sweep_m = 3, 5, 7"));
  CHECK(c.Points().size() == 3);
  c.sweep_n = {50, 100};
  CHECK(c.Points().size() == 6);
  c.kind = ExperimentKind::kVarianceScaling;
  const auto pts = c.Points();
  // M sweep at N = 100, then the extra N = 50 point at M = 2.
  REQUIRE(pts.size() == 5);
  CHECK(pts[0].n_items == 3);
  CHECK(pts[3].n_buyers == 50);
  CHECK(pts[3].n_items == 2);
  CHECK(pts[4].n_items == 2);
  CHECK(pts[4].n_buyers == 100);
}

TEST_CASE("omega matrices load from CSV relative to the config") {
  const auto dir = testing::ScratchDir("omega");
  std::ofstream m0(dir / "o0.csv"), m1(dir / "o1.csv");
  for (int r = 0; r < 12; ++r) {
    for (int c = 0; c < 11; ++c) {
      m0 << (c ? "," : "") << 0.5;
      m1 << (c ? "," : "") << 0.25;
    }
    m0 << '\n';
    m1 << '\n';
  }
  m0.close();
  m1.close();
  std::ofstream cfg(dir / "run.cfg");
  cfg << WithLine("simulator", "omega_0 = o0.csv\nomega_1 = o1.csv");
  cfg.close();
  const auto c = ParseConfigFile(dir / "run.cfg");
  const auto params = LoadSimulatorParams(c);
  CHECK(params.omega0(3, 4) == 0.5);
  CHECK(params.omega1(11, 10) == 0.25);
  // The canonical spelling of the default parses back to the default.
  const auto sampled = ParseConfigString(WithLine("simulator", "omega_0 = sampled\nomega_1 = sampled"));
  CHECK(!sampled.omega0_path.has_value());
  CHECK(sampled.Hash() == ParseConfigString(kMinimal).Hash());
}

TEST_CASE("curve table round trip") {
  CurveRecord r;
  r.n_buyers = 10;
  r.n_items = 3;
  r.eta = "max";
  r.epsilon = 1.0 / 6.0;
  r.seed = 18446744073709551615ULL;
  r.repetition = 4;
  r.curve.estimator_id = "beta_ipw:1";
  r.curve.grid_size = 2;
  r.curve.points = {{0, 0}, {0.5, 0.1 / 3.0}, {1.0, -2e-17}};
  std::stringstream s;
  WriteCurveTable({r, r}, s);
  const auto back = ReadCurveTable(s);
  REQUIRE(back.size() == 2);
  CHECK(back[0].seed == r.seed);
  CHECK(back[0].epsilon == r.epsilon);
  CHECK(back[0].curve.estimator_id == "beta_ipw:1");
  CHECK(back[0].curve.points[1].qini == r.curve.points[1].qini);
  CHECK(back[0].curve.points[2].qini == r.curve.points[2].qini);
  std::stringstream bad("k,budget\n0,0\n");
  CHECK_THROWS_AS(ReadCurveTable(bad), Error);
}

TEST_CASE("calibration run: structure of the outputs") {
  const auto dir = testing::ScratchDir("calibration");
  auto c = ParseConfigString(WithLine("experiment", "repetitions = 2\nper_curve_files = true"));
  RunOptions opts;
  opts.output = dir;
  const auto result = RunExperiment(c, opts);
  CHECK(result.failures.empty());

  std::size_t estimator_files = 0, oracle_files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "curves")) {
    const auto name = entry.path().filename().string();
    (name.find("_oracle_") != std::string::npos ? oracle_files : estimator_files)++;
  }
  CHECK(estimator_files == 2 * 2);
  CHECK(oracle_files == 2);
  CHECK(fs::exists(dir / "calibration.csv"));
  CHECK(CountRows(dir / "calibration.csv", ",ipw,") == 3);  // bias, variance, mse
  CHECK(fs::exists(dir / "panel_qini_curves.csv"));

  const auto manifest = nlohmann::json::parse(testing::ReadFile(dir / "manifest.json"));
  CHECK(manifest["master_seed"] == 0);
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  CHECK(manifest["failures"].empty());
}

TEST_CASE("re-running is byte-identical across worker counts") {
  const auto c = ParseConfigString(
      WithLine("experiment", "repetitions = 4\nsweep_m = 2, 3\nseed = 77"));
  std::vector<std::string> curves, calibration;
  int run = 0;
  for (std::size_t workers : {1, 4, 1}) {
    const auto dir = testing::ScratchDir("determinism_" + std::to_string(run++));
    RunOptions opts;
    opts.output = dir;
    opts.workers = workers;
    RunExperiment(c, opts);
    curves.push_back(testing::ReadFile(dir / "curves.csv"));
    calibration.push_back(testing::ReadFile(dir / "calibration.csv"));
  }
  CHECK(!curves[0].empty());
  CHECK(curves[1] == curves[0]);
  CHECK(curves[2] == curves[0]);
  CHECK(calibration[1] == calibration[0]);
}

TEST_CASE("failed repetitions abort the run unless keep-going is set") {
  const auto c = ParseConfigString(WithLine("experiment", "repetitions = 3"));
  RunOptions opts;
  opts.write_outputs = false;
  opts.before_repetition = [](std::size_t, std::size_t rep) {
    if (rep == 1) throw Error(ErrorCode::kNumeric, "injected failure");
  };
  try {
    RunExperiment(c, opts);
    FAIL("expected the run to fail");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRuntime);
    CHECK(std::string(e.what()).find("injected failure") != std::string::npos);
  }
  std::ostringstream log;
  opts.keep_going = true;
  opts.log = &log;
  const auto result = RunExperiment(c, opts);
  REQUIRE(result.failures.size() == 1);
  CHECK(result.failures[0].repetition == 1);
  CHECK(result.failures[0].seed == RepetitionSeed(0, 1));
  CHECK(log.str().find("repetition 2/3 seed " + std::to_string(RepetitionSeed(0, 1)) +
                       " FAILED") != std::string::npos);
  // Two surviving repetitions, each with an oracle and two estimator curves.
  CHECK(result.records.size() == 2 * 3);
}

TEST_CASE("variance scaling panels have one row per axis value") {
  const auto dir = testing::ScratchDir("scaling");
  auto text = WithLine("experiment", "repetitions = 2\nsweep_m = 3, 5, 7, 9, 11");
  text.replace(text.find("calibration"), 11, "variance_scaling");
  const auto c = ParseConfigString(text);
  RunOptions opts;
  opts.output = dir;
  RunExperiment(c, opts);
  for (const char* panel : {"panel_bias_vs_m.csv", "panel_mse_vs_m.csv", "panel_variance_vs_m.csv"}) {
    CAPTURE(panel);
    const auto table = ReadCsvFile(dir / panel);
    CHECK(table.header == std::vector<std::string>{"x", "estimator_id", "mean", "stderr",
                                                   "n_buyers", "n_items", "eta", "epsilon"});
    std::map<std::string, std::size_t> rows;
    for (const auto& row : table.rows) rows[row[1]]++;
    CHECK(rows["naive"] == 5);
    CHECK(rows["ipw"] == 5);
  }
  // No N sweep: the N panel holds only its header.
  CHECK(ReadCsvFile(dir / "panel_variance_vs_n.csv").rows.empty());
}

TEST_CASE("report re-aggregates raw curves identically") {
  const auto dir = testing::ScratchDir("report");
  auto c = ParseConfigString(
      WithLine("experiment", "repetitions = 3\nepsilons = 0, 0.5, 1\nestimators = naive, beta_ipw:1"));
  c.kind = ExperimentKind::kRanking;
  RunOptions opts;
  opts.output = dir / "run";
  const auto result = RunExperiment(c, opts);
  const auto records = ReadCurveTable(dir / "run" / "curves.csv");
  REQUIRE(records.size() == result.records.size());
  const auto summary = Summarize(records);
  WriteSummary(summary, dir / "again");
  for (const char* f : {"calibration.csv", "auc.csv", "ranking.csv", "panel_qini_curves.csv"}) {
    CAPTURE(f);
    CHECK(testing::ReadFile(dir / "again" / f) == testing::ReadFile(dir / "run" / f));
  }
  REQUIRE(summary.ranking.size() == 1);
  CHECK(summary.ranking[0].report.policy_ids.size() == 3);
  CHECK(FormatTables(summary).find("Kendall") != std::string::npos);
}
