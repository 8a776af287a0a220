// Copyright 2026 The SPEED Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Contract tests for the installed CLI binary: exit codes, artifact
// schemas, determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "speed/io.hpp"

using namespace speed;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "speed_cli_test";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

int run(const std::string& args, const std::string& log) {
  const std::string cmd =
      std::string(SPEED_CLI_PATH) + " " + args + " >" + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_unanimous_votes(const std::string& path, int n, int k,
                           std::size_t queries) {
  VoteHistogram votes;
  votes.n = n;
  votes.k = k;
  std::vector<int> row(k, 0);
  row[0] = n;
  votes.queries.assign(queries, row);
  save_votes_json(votes, path);
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  TempDir tmp;
  CHECK(run("", tmp.file("log")) == 2);
  CHECK(run("frobnicate", tmp.file("log")) == 2);
  CHECK(run("accountant", tmp.file("log")) == 2);  // missing --votes
  CHECK(run("--help", tmp.file("log")) == 0);
}

TEST_CASE("accountant on a votes fixture") {
  TempDir tmp;
  write_unanimous_votes(tmp.file("votes.json"), 250, 10, 100);
  const std::string out = tmp.file("report.json");
  CHECK(run("accountant --votes " + tmp.file("votes.json") +
                " --gamma 0.1 --tau 1 --out " + out,
            tmp.file("log")) == 0);
  json doc = json::parse(read_text_file(out));
  CHECK(doc["schema"] == kReportSchema);
  CHECK(doc["epsilon"].get<double>() <= 1.5);
  CHECK(doc["epsilon"].get<double>() ==
        doctest::Approx(0.46051753476392241).epsilon(1e-6));
  CHECK(doc["per_query"].size() == 100);
  CHECK(doc["config"]["gamma"] == "0.100000");
}

TEST_CASE("accountant on an empty votes file") {
  TempDir tmp;
  write_text_file(tmp.file("votes.json"),
                  R"({"n": 250, "k": 10, "queries": []})");
  const std::string out = tmp.file("report.json");
  CHECK(run("accountant --votes " + tmp.file("votes.json") +
                " --gamma 0.1 --out " + out,
            tmp.file("log")) == 0);
  json doc = json::parse(read_text_file(out));
  CHECK(doc["epsilon"] == 0.0);
}

TEST_CASE("accountant error contracts") {
  TempDir tmp;
  write_text_file(tmp.file("bad.json"),
                  R"({"n": 5, "k": 2, "queries": [[3,2],[9,0]]})");
  CHECK(run("accountant --votes " + tmp.file("bad.json") + " --out " +
                tmp.file("r.json"),
            tmp.file("log")) == 3);
  const std::string log = read_text_file(tmp.file("log"));
  CHECK(log.find("row 1") != std::string::npos);

  CHECK(run("accountant --votes " + tmp.file("absent.json") + " --out " +
                tmp.file("r.json"),
            tmp.file("log")) == 4);

  write_unanimous_votes(tmp.file("votes.json"), 10, 3, 1);
  CHECK(run("accountant --votes " + tmp.file("votes.json") +
                " --gamma -1 --out " + tmp.file("r.json"),
            tmp.file("log")) == 3);
}

TEST_CASE("simulate is deterministic and feeds the accountant") {
  TempDir tmp;
  const std::string base =
      "simulate --teachers 40 --classes 5 --queries 20 --gamma 0.2 "
      "--seed 7 --out ";
  CHECK(run(base + tmp.file("a"), tmp.file("log")) == 0);
  CHECK(run(base + tmp.file("b"), tmp.file("log")) == 0);
  CHECK(read_text_file(tmp.file("a.votes.json")) ==
        read_text_file(tmp.file("b.votes.json")));
  CHECK(read_text_file(tmp.file("a.labels.json")) ==
        read_text_file(tmp.file("b.labels.json")));
  CHECK(read_text_file(tmp.file("a.report.json")) ==
        read_text_file(tmp.file("b.report.json")));

  CHECK(run("accountant --votes " + tmp.file("a.votes.json") +
                " --gamma 0.2 --out " + tmp.file("re.json"),
            tmp.file("log")) == 0);
}

TEST_CASE("simulate with the ideal circuit matches the clear path") {
  TempDir tmp;
  const std::string base =
      "simulate --teachers 30 --classes 4 --queries 15 --gamma 0.2 "
      "--seed 3 ";
  CHECK(run(base + "--he off --out " + tmp.file("off"), tmp.file("log")) == 0);
  CHECK(run(base + "--he ideal --out " + tmp.file("id"), tmp.file("log")) == 0);
  json off = json::parse(read_text_file(tmp.file("off.labels.json")));
  json ideal = json::parse(read_text_file(tmp.file("id.labels.json")));
  CHECK(off["labels"] == ideal["labels"]);
}

TEST_CASE("sweep emits one CSV row per grid point") {
  TempDir tmp;
  const std::string out = tmp.file("sweep.csv");
  CHECK(run("sweep --param gamma --from 0.05 --to 0.1 --points 2 "
            "--teachers 50 --classes 5 --queries 10 --out " + out,
            tmp.file("log")) == 0);
  const std::string csv = read_text_file(out);
  CHECK(csv.find(kSweepSchema) != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // schema+header+2

  CHECK(run("sweep --param gamma --from 0.1 --to 0.05 --points 2 --out " +
                out,
            tmp.file("log")) == 3);
  CHECK(run("sweep --param banana --out " + out, tmp.file("log")) == 3);
}

TEST_CASE("tau sweep is monotone non-increasing") {
  TempDir tmp;
  const std::string out = tmp.file("tau.csv");
  CHECK(run("sweep --param tau --from 0.5 --to 0.99 --points 8 "
            "--gamma 0.1 --teachers 200 --classes 10 --queries 50 --out " +
                out,
            tmp.file("log")) == 0);
  std::istringstream in(read_text_file(out));
  std::string line;
  std::getline(in, line);  // schema
  std::getline(in, line);  // header
  double prev = 1e300;
  int rows = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    const double eps = std::stod(line.substr(comma + 1));
    CHECK(eps <= prev + 1e-12);
    prev = eps;
    ++rows;
  }
  CHECK(rows == 8);
}

TEST_CASE("dist-check verdicts") {
  TempDir tmp;
  const std::string out = tmp.file("dist.json");
  CHECK(run("dist-check --teachers 20 --gamma 0.5 --samples 40000 "
            "--var-tol 0.1 --ks-tol 0.02 --seed 5 --out " + out,
            tmp.file("log")) == 0);
  json doc = json::parse(read_text_file(out));
  CHECK(doc["schema"] == kDistCheckSchema);
  CHECK(doc["pass"] == true);
  CHECK(doc["variance"].get<double>() ==
        doctest::Approx(8.0).epsilon(0.1));

  // Negative control: impossible tolerance must fail.
  CHECK(run("dist-check --teachers 20 --gamma 0.5 --samples 40000 "
            "--ks-tol 0.000001 --seed 5 --out " + out,
            tmp.file("log")) == 0);
  json fail = json::parse(read_text_file(out));
  CHECK(fail["pass"] == false);

  CHECK(run("dist-check --samples 100 --out " + out, tmp.file("log")) == 3);
}

TEST_CASE("attack demo artifact") {
  TempDir tmp;
  const std::string out = tmp.file("attack.json");
  CHECK(run("attack-demo --teachers 50 --classes 4 --gamma 0.5 --tau 1 "
            "--trials 2000 --seed 11 --out " + out,
            tmp.file("log")) == 0);
  json doc = json::parse(read_text_file(out));
  CHECK(doc["centralised_chi0_correct"] == true);
  CHECK(doc["centralised_chi1_correct"] == true);
  const double acc = doc["distributed_accuracy"].get<double>();
  const double bound = doc["accuracy_bound"].get<double>();
  CHECK(acc <= bound + 3.0 * std::sqrt(0.25 / 2000.0));
}

TEST_CASE("config file fills unset flags") {
  TempDir tmp;
  write_text_file(tmp.file("run.cfg"),
                  "gamma = 0.2\ntau = 0.9\nteachers = 60\n");
  write_unanimous_votes(tmp.file("votes.json"), 60, 5, 10);
  const std::string out = tmp.file("report.json");
  CHECK(run("accountant --votes " + tmp.file("votes.json") + " --config " +
                tmp.file("run.cfg") + " --tau 1 --out " + out,
            tmp.file("log")) == 0);
  json doc = json::parse(read_text_file(out));
  CHECK(doc["gamma"].get<double>() == doctest::Approx(0.2));  // from config
  CHECK(doc["tau"].get<double>() == doctest::Approx(1.0));    // flag wins
}
