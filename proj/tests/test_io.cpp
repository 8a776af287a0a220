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
#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "json.hpp"
#include "speed/io.hpp"

using namespace speed;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "speed_io_test";
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("votes JSON round trip") {
  TempDir tmp;
  VoteHistogram votes;
  votes.n = 12;
  votes.k = 3;
  votes.queries = {{8, 3, 1}, {0, 12, 0}};
  votes.true_labels = std::vector<int>{0, 1};
  save_votes_json(votes, tmp.file("votes.json"));
  VoteHistogram loaded = load_votes_json(tmp.file("votes.json"));
  CHECK(loaded.n == 12);
  CHECK(loaded.k == 3);
  CHECK(loaded.queries == votes.queries);
  CHECK(loaded.true_labels == votes.true_labels);

  nlohmann::json doc = nlohmann::json::parse(
      read_text_file(tmp.file("votes.json")));
  CHECK(doc["schema"] == kVotesSchema);
}

TEST_CASE("votes JSON diagnostics") {
  TempDir tmp;
  write_text_file(tmp.file("broken.json"), "{not json");
  CHECK_THROWS_AS(load_votes_json(tmp.file("broken.json")), ParseError);

  write_text_file(tmp.file("short_row.json"),
                  R"({"n": 5, "k": 3, "queries": [[2,2,1],[5,0]]})");
  CHECK_THROWS_WITH_AS(load_votes_json(tmp.file("short_row.json")),
                       doctest::Contains("row 1"), DomainError);

  write_text_file(tmp.file("over_n.json"),
                  R"({"n": 5, "k": 2, "queries": [[4,4]]})");
  CHECK_THROWS_WITH_AS(load_votes_json(tmp.file("over_n.json")),
                       doctest::Contains("row 0"), DomainError);

  CHECK_THROWS_AS(load_votes_json(tmp.file("missing.json")), IoError);
}

TEST_CASE("votes CSV import") {
  TempDir tmp;
  write_text_file(tmp.file("votes.csv"), "c0,c1,c2\n8,3,1\n0,12,0\n");
  VoteHistogram votes = load_votes_csv(tmp.file("votes.csv"));
  CHECK(votes.k == 3);
  CHECK(votes.n == 12);  // max row sum
  CHECK(votes.queries.size() == 2);

  write_text_file(tmp.file("ragged.csv"), "1,2,3\n4,5\n");
  CHECK_THROWS_WITH_AS(load_votes_csv(tmp.file("ragged.csv")),
                       doctest::Contains(":2"), ParseError);
  write_text_file(tmp.file("junk.csv"), "1,2,x\n");
  CHECK_THROWS_AS(load_votes_csv(tmp.file("junk.csv")), ParseError);
}

TEST_CASE("report emission") {
  TempDir tmp;
  PrivacyReport report;
  report.epsilon = 0.42;
  report.gamma = 0.1;
  report.tau = 0.9;
  report.per_query.push_back(
      {0.2, 0.03, MomentBranch::kDataDependent});
  save_report_json(report, {{"mode", "distributed"}}, tmp.file("report.json"));
  nlohmann::json doc =
      nlohmann::json::parse(read_text_file(tmp.file("report.json")));
  CHECK(doc["schema"] == kReportSchema);
  CHECK(doc["epsilon"] == doctest::Approx(0.42));
  CHECK(doc["per_query"][0]["branch"] == "data_dependent");
  CHECK(doc["config"]["mode"] == "distributed");
}

TEST_CASE("config files") {
  TempDir tmp;
  write_text_file(tmp.file("run.cfg"),
                  "gamma = 0.1   # inverse scale\n"
                  "tau=0.9\n"
                  "\n"
                  "[heargmax]\n"
                  "sigma_c = 0.002\n");
  auto cfg = load_config(tmp.file("run.cfg"));
  CHECK(cfg.at("gamma") == "0.1");
  CHECK(cfg.at("tau") == "0.9");
  CHECK(cfg.at("heargmax.sigma_c") == "0.002");

  write_text_file(tmp.file("bad.cfg"), "gamma 0.1\n");
  CHECK_THROWS_WITH_AS(load_config(tmp.file("bad.cfg")),
                       doctest::Contains(":1"), ParseError);
}
