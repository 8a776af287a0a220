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
#ifndef SPEED_COMMON_HPP
#define SPEED_COMMON_HPP

#include <stdexcept>
#include <string>

namespace speed {

// Parallel kernels fall back to the serial reference when OpenMP is absent.
enum class Execution { kSerial, kParallel };

// Parameter outside its mathematical domain (maps to CLI exit code 3).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// File-level failure: missing file, bad JSON/CSV (maps to CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public IoError {
 public:
  using IoError::IoError;
};

// Emits to stderr when the SPEED_LOG environment variable is set and not "0".
void log_warn(const std::string& msg);

inline constexpr const char* kVotesSchema = "speed.votes.v1";
inline constexpr const char* kReportSchema = "speed.report.v1";
inline constexpr const char* kSweepSchema = "speed.sweep.v1";
inline constexpr const char* kDistCheckSchema = "speed.dist_check.v1";

}  // namespace speed

#endif  // SPEED_COMMON_HPP
