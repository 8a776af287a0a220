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
// File formats: the votes JSON schema (with a CSV import path), privacy
// report emission and the flat key-value config format with a [heargmax]
// section.
#ifndef SPEED_IO_HPP
#define SPEED_IO_HPP

#include <map>
#include <string>

#include "speed/accountant.hpp"
#include "speed/votes.hpp"

namespace speed {

// {"schema": ..., "n": int, "k": int, "queries": [[int; k], ...],
//  "true_labels": optional [int]}. Diagnostics name the offending row.
VoteHistogram load_votes_json(const std::string& path);
void save_votes_json(const VoteHistogram& votes, const std::string& path);

// One query per row, k comma-separated counts; optional header line
// starting with a non-digit is skipped. n defaults to the max row sum.
VoteHistogram load_votes_csv(const std::string& path);

// Report with schema, resolved parameters and per-query traces. config
// carries extra resolved key-value pairs for provenance.
void save_report_json(const PrivacyReport& report,
                      const std::map<std::string, std::string>& config,
                      const std::string& path);

// Flat "key = value" lines with optional [section] headers; keys in a
// section are returned as "section.key". '#' starts a comment.
std::map<std::string, std::string> load_config(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace speed

#endif  // SPEED_IO_HPP
