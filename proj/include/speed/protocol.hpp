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
// Simulation of the collaborative labeling workflow: teacher oracles answer
// queries with noisy one-hot votes, the aggregator sums them and takes the
// argmax (in clear or through the encrypted circuit), the student collects
// labels. Includes collusion modeling and the crafted-offset attack demo.
#ifndef SPEED_PROTOCOL_HPP
#define SPEED_PROTOCOL_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "speed/genlap.hpp"
#include "speed/heargmax.hpp"
#include "speed/votes.hpp"

namespace speed {

enum class NoiseMode { kNone, kDistributed, kCentralised };
enum class HeMode { kOff, kIdeal, kNoisy };

// An opaque labeling function standing in for a teacher's private model.
// Deterministic given (oracle state, x).
class TeacherOracle {
 public:
  using Fn = std::function<int(std::uint64_t)>;

  TeacherOracle(int id, int num_classes, Fn fn);

  int id() const { return id_; }
  int num_classes() const { return num_classes_; }
  int label(std::uint64_t x) const;  // range-checked

  static TeacherOracle lookup_table(int id, int num_classes,
                                    std::vector<int> table);
  static TeacherOracle fixed_label(int id, int num_classes, int label);
  static TeacherOracle uniform_random(int id, int num_classes,
                                      std::uint64_t seed);
  // Answers truth[x mod |truth|] with probability 1 - error_rate, a
  // uniformly chosen wrong class otherwise.
  static TeacherOracle majority_with_error(int id, int num_classes,
                                           std::vector<int> truth,
                                           double error_rate,
                                           std::uint64_t seed);

 private:
  int id_;
  int num_classes_;
  Fn fn_;
};

// One-hot vote plus optional per-coordinate Gamma-difference noise.
struct EncodedVote {
  std::vector<double> coords;
  int teacher_id = -1;
  bool noised = false;
};

// Teachers whose noise is disclosed to the adversary (modeled as sending
// zero noise). tau is the secret-noise ratio seen from each viewpoint.
struct CollusionSpec {
  std::vector<int> colluders;

  bool is_colluder(int id) const;
  int honest_count(int n) const;
  double tau_outsider(int n) const;  // honest / n
  double tau_colluder(int n) const;  // honest / n (the secret set)
  double tau_honest(int n) const;    // (n - 1) / n
  void validate(int n) const;
};

EncodedVote encode_vote(int label, int num_classes, const NoiseParams& params,
                        Rng& rng, bool add_noise);

// Coordinate-wise sum; empty input yields an empty vector.
std::vector<double> aggregate(const std::vector<EncodedVote>& votes);

// counts plus i.i.d. Laplace(0, 1/gamma) per coordinate; distributionally
// identical to full distributed noise.
std::vector<double> centralised_noise(const std::vector<double>& counts,
                                      double gamma, Rng& rng);

struct QueryRecord {
  std::vector<int> clear_counts;
  std::vector<double> noisy_counts;
  int clear_label = 0;
  int label = 0;
  long bootstraps = 0;
  bool degenerate = false;
};

struct SessionConfig {
  int num_classes = 10;
  std::size_t queries = 100;
  NoiseParams params;  // params.n is the teacher count
  NoiseMode mode = NoiseMode::kDistributed;
  HeMode he = HeMode::kOff;
  CollusionSpec collusion;
  double offset_a = 900.0;
  double sigma_c = 0.0;  // noisy circuit backend
  std::uint64_t seed = 0;

  ArgmaxCircuitConfig circuit_config() const;
  void validate(std::size_t teacher_count) const;
};

// Lowest-index argmax over reals, mirroring clear_argmax.
int argmax_real(const std::vector<double>& values);

// One labeling round. Noise streams derive from (seed, query, teacher id),
// so each honest teacher's draw is independent of every other teacher's
// behavior or presence.
QueryRecord run_query(const std::vector<TeacherOracle>& teachers,
                      std::uint64_t x, const SessionConfig& config);

struct SessionResult {
  std::vector<int> labels;
  VoteHistogram votes;  // clear counts; true_labels = clear plurality
  std::vector<QueryRecord> records;
};

// Queries x = 0..queries-1, merged in query order. Deterministic given the
// config seed regardless of execution mode.
SessionResult run_session(const std::vector<TeacherOracle>& teachers,
                          const SessionConfig& config,
                          Execution exec = Execution::kParallel);

// Crafted-offset inference attack by a malicious aggregator. The victim's
// hidden characteristic chi flips their vote between classes k0 and k1;
// offsets are chosen so that under known noise the argmax equals k0 exactly
// when chi = chi0.
struct AttackScenario {
  int num_classes = 4;
  int k0 = 0;
  int k1 = 1;
  int nu0 = 3;  // votes for k0 when chi = chi0
  int nu1 = 1;  // votes for k1 when chi = chi0
  std::vector<int> other_counts;  // classes other than k0, k1, in index order

  // Full count vector for the given branch of chi.
  std::vector<int> counts(bool chi0) const;
  std::vector<double> offsets() const;
  void validate() const;
};

struct AttackResult {
  bool centralised_chi0_correct = false;
  bool centralised_chi1_correct = false;
  double distributed_accuracy = 0.0;
  double epsilon_refined = 0.0;  // per-query bound at the snapped tau
  double accuracy_bound = 0.0;   // e^eps / (1 + e^eps)
  std::size_t trials = 0;
};

AttackResult attack_demo(const AttackScenario& scenario,
                         const NoiseParams& params, std::size_t trials,
                         std::uint64_t seed);

}  // namespace speed

#endif  // SPEED_PROTOCOL_HPP
