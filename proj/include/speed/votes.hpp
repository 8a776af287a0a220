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
#ifndef SPEED_VOTES_HPP
#define SPEED_VOTES_HPP

#include <optional>
#include <vector>

#include "speed/common.hpp"

namespace speed {

// Per-query clear vote counts n_k, one row per query, plus optional ground
// truth labels. Shared between the protocol simulator, the accountant and
// the votes file format.
struct VoteHistogram {
  int n = 0;  // teacher count
  int k = 0;  // class count
  std::vector<std::vector<int>> queries;
  std::optional<std::vector<int>> true_labels;

  std::size_t query_count() const { return queries.size(); }

  // Throws DomainError if any row has the wrong arity, a negative count,
  // or counts summing to more than n. Diagnostics name the offending row.
  void validate() const;
};

// Lowest-index argmax of a count row.
int clear_argmax(const std::vector<int>& counts);

}  // namespace speed

#endif  // SPEED_VOTES_HPP
