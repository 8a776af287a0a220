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
#include "speed/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace speed {

using nlohmann::json;

// ---------------------------------------------------------------------------
// VoteHistogram basics.

void VoteHistogram::validate() const {
  if (n < 1) throw DomainError("n must be a positive integer");
  if (k < 2) throw DomainError("k must be at least 2");
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const std::vector<int>& row = queries[i];
    if (row.size() != static_cast<std::size_t>(k)) {
      throw DomainError("query row " + std::to_string(i) + " has " +
                        std::to_string(row.size()) + " counts, expected " +
                        std::to_string(k));
    }
    long sum = 0;
    for (int c : row) {
      if (c < 0) {
        throw DomainError("query row " + std::to_string(i) +
                          " has a negative count");
      }
      sum += c;
    }
    if (sum > n) {
      throw DomainError("query row " + std::to_string(i) + " counts sum to " +
                        std::to_string(sum) + ", more than n = " +
                        std::to_string(n));
    }
  }
  if (true_labels) {
    if (true_labels->size() != queries.size()) {
      throw DomainError("true_labels length does not match the query count");
    }
    for (std::size_t i = 0; i < true_labels->size(); ++i) {
      const int y = (*true_labels)[i];
      if (y < 0 || y >= k) {
        throw DomainError("true label of row " + std::to_string(i) +
                          " is out of range");
      }
    }
  }
}

int clear_argmax(const std::vector<int>& counts) {
  if (counts.empty()) throw DomainError("argmax of an empty vector");
  int best = 0;
  for (int k = 1; k < static_cast<int>(counts.size()); ++k) {
    if (counts[k] > counts[best]) best = k;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Files.

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

VoteHistogram load_votes_json(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  VoteHistogram votes;
  try {
    votes.n = doc.at("n").get<int>();
    votes.k = doc.at("k").get<int>();
    const json& rows = doc.at("queries");
    if (!rows.is_array()) throw ParseError(path + ": queries must be an array");
    votes.queries.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array()) {
        throw ParseError(path + ": query row " + std::to_string(i) +
                         " is not an array");
      }
      votes.queries.push_back(rows[i].get<std::vector<int>>());
    }
    if (doc.contains("true_labels") && !doc["true_labels"].is_null()) {
      votes.true_labels = doc["true_labels"].get<std::vector<int>>();
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  votes.validate();
  return votes;
}

void save_votes_json(const VoteHistogram& votes, const std::string& path) {
  votes.validate();
  json doc;
  doc["schema"] = kVotesSchema;
  doc["n"] = votes.n;
  doc["k"] = votes.k;
  doc["queries"] = votes.queries;
  if (votes.true_labels) doc["true_labels"] = *votes.true_labels;
  write_text_file(path, doc.dump(2) + "\n");
}

VoteHistogram load_votes_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  VoteHistogram votes;
  std::string line;
  std::size_t lineno = 0;
  long max_sum = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const char first = line[0];
    if (lineno == 1 && !std::isdigit(static_cast<unsigned char>(first)) &&
        first != '-') {
      continue;  // header
    }
    std::vector<int> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        row.push_back(std::stoi(field));
      } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": not an integer: '" + field + "'");
      }
    }
    if (votes.queries.empty()) {
      votes.k = static_cast<int>(row.size());
    } else if (row.size() != static_cast<std::size_t>(votes.k)) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected " + std::to_string(votes.k) + " fields");
    }
    max_sum = std::max(max_sum,
                       std::accumulate(row.begin(), row.end(), 0L));
    votes.queries.push_back(std::move(row));
  }
  if (votes.queries.empty()) throw ParseError(path + ": no vote rows");
  votes.n = static_cast<int>(max_sum);
  votes.validate();
  return votes;
}

void save_report_json(const PrivacyReport& report,
                      const std::map<std::string, std::string>& config,
                      const std::string& path) {
  json doc;
  doc["schema"] = kReportSchema;
  doc["epsilon"] = report.epsilon;
  doc["delta"] = report.delta;
  doc["lmax"] = report.lmax;
  doc["gamma"] = report.gamma;
  doc["tau"] = report.tau;
  json traces = json::array();
  for (const QueryTrace& trace : report.per_query) {
    traces.push_back(
        {{"epsilon_q", trace.epsilon_q},
         {"q_bound", trace.q_bound},
         {"branch", trace.branch == MomentBranch::kDataDependent
                        ? "data_dependent"
                        : "data_independent"}});
  }
  doc["per_query"] = std::move(traces);
  doc["config"] = config;
  write_text_file(path, doc.dump(2) + "\n");
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::map<std::string, std::string> out;
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty key");
    }
    out[section.empty() ? key : section + "." + key] = value;
  }
  return out;
}

}  // namespace speed
