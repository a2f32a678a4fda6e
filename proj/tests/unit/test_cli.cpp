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

// Runs the installed command-line tool and checks exit codes and outputs.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

Run Cli(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt";
  const std::string command = std::string(QINET_CLI_PATH) + " " + args + " > " + out.string() +
                              " 2> " + (dir / "stderr.txt").string();
  const int raw = std::system(command.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, testing::ReadFile(out)};
}

void WriteConfig(const fs::path& path, const std::string& extra = "") {
  std::ofstream cfg(path);
  cfg << "[experiment]\n"
         "kind = calibration\n"
         "estimators = naive, ipw\n"
         "repetitions = 2\n"
      << extra
      << "[simulator]\n"
         "n_buyers = 100\n"
         "n_items = 2\n"
         "eta = max\n";
}

}  // namespace

TEST_CASE("CLI: usage errors exit with 1") {
  const auto dir = testing::ScratchDir("cli_usage");
  CHECK(Cli("", dir).status == 1);
  CHECK(Cli("frobnicate", dir).status == 1);
  CHECK(Cli("experiment", dir).status == 1);  // --config is required
  CHECK(Cli("experiment --config x.cfg --workers 0", dir).status == 1);
  CHECK(Cli("experiment --config x.cfg --seed -4", dir).status == 1);
  CHECK(Cli("--help", dir).status == 0);
}

TEST_CASE("CLI: invalid configs exit with 1, I/O failures with 2") {
  const auto dir = testing::ScratchDir("cli_errors");
  WriteConfig(dir / "typo.cfg", "n_buyerz = 3\n");
  const auto typo = Cli("experiment --config " + (dir / "typo.cfg").string(), dir);
  CHECK(typo.status == 1);
  CHECK(testing::ReadFile(dir / "stderr.txt").find("n_buyerz") != std::string::npos);

  WriteConfig(dir / "bad_id.cfg", "estimators = ipw, beta_ipw:zero\n");
  CHECK(Cli("experiment --config " + (dir / "bad_id.cfg").string(), dir).status == 1);

  CHECK(Cli("experiment --config " + (dir / "missing.cfg").string(), dir).status == 2);
  WriteConfig(dir / "ok.cfg");
  std::ofstream(dir / "blocker") << "not a directory";
  CHECK(Cli("experiment --config " + (dir / "ok.cfg").string() + " --out " +
                (dir / "blocker" / "out").string(),
            dir)
            .status == 2);
}

TEST_CASE("CLI: simulate, qini, experiment and report") {
  const auto dir = testing::ScratchDir("cli_flow");
  WriteConfig(dir / "run.cfg");
  const auto cfg = (dir / "run.cfg").string();

  auto r = Cli("simulate --config " + cfg + " --seed 3 --out " + (dir / "sim").string(), dir);
  REQUIRE(r.status == 0);
  CHECK(fs::exists(dir / "sim" / "dataset.csv"));

  r = Cli("qini --config " + cfg + " --dataset " + (dir / "sim" / "dataset.csv").string() +
              " --epsilon 0.5 --out " + (dir / "qini").string(),
          dir);
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("estimator_id,auc\nnaive,", 0) == 0);
  CHECK(fs::exists(dir / "qini" / "curves.csv"));

  std::ofstream scores(dir / "scores.csv");
  scores << "score\n";
  for (int u = 0; u < 200; ++u) scores << (u % 7) * 0.1 << '\n';
  scores.close();
  r = Cli("qini --config " + cfg + " --dataset " + (dir / "sim" / "dataset.csv").string() +
              " --scores " + (dir / "scores.csv").string() + " --out " + (dir / "qini2").string(),
          dir);
  CHECK(r.status == 0);

  r = Cli("experiment --config " + cfg + " --seed 11 --workers 2 --keep-going --quiet --out " +
              (dir / "exp").string(),
          dir);
  REQUIRE(r.status == 0);
  CHECK(fs::exists(dir / "exp" / "curves.csv"));
  CHECK(testing::ReadFile(dir / "exp" / "manifest.json").find("\"master_seed\": 11") !=
        std::string::npos);

  r = Cli("report --curves " + (dir / "exp" / "curves.csv").string() + " --out " +
              (dir / "rep").string(),
          dir);
  REQUIRE(r.status == 0);
  CHECK(r.out.find("Calibration") != std::string::npos);
  CHECK(testing::ReadFile(dir / "rep" / "calibration.csv") ==
        testing::ReadFile(dir / "exp" / "calibration.csv"));

  r = Cli("report --curves " + (dir / "sim" / "dataset.csv").string() + " --out " +
              (dir / "rep2").string(),
          dir);
  CHECK(r.status == 1);
}
