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
#ifndef SPEED_RNG_HPP
#define SPEED_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace speed {

using Rng = std::mt19937_64;

// Named sub-stream tags so that every independent consumer of randomness
// (per query, per teacher, per chunk) gets a reproducible stream derived
// from the single top-level seed.
namespace stream {
inline constexpr std::uint64_t kTeacher = 1;
inline constexpr std::uint64_t kQueryNoise = 2;
inline constexpr std::uint64_t kCircuit = 3;
inline constexpr std::uint64_t kChunk = 4;
inline constexpr std::uint64_t kOracle = 5;
inline constexpr std::uint64_t kAttack = 6;
}  // namespace stream

// Derives a generator from (seed, tags...). Identical arguments always
// yield an identical stream; a stream must not be shared across tasks.
inline Rng make_stream(std::uint64_t seed,
                       std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words;
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  for (std::uint64_t t : tags) {
    words.push_back(static_cast<std::uint32_t>(t));
    words.push_back(static_cast<std::uint32_t>(t >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace speed

#endif  // SPEED_RNG_HPP
