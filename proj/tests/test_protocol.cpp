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

#include <cmath>

#include "speed/accountant.hpp"
#include "speed/protocol.hpp"

using namespace speed;

namespace {

std::vector<TeacherOracle> fixed_teachers(int n, int k, int label) {
  std::vector<TeacherOracle> teachers;
  for (int i = 0; i < n; ++i) {
    teachers.push_back(TeacherOracle::fixed_label(i, k, label));
  }
  return teachers;
}

}  // namespace

TEST_CASE("teacher oracles") {
  TeacherOracle fixed = TeacherOracle::fixed_label(0, 5, 3);
  CHECK(fixed.label(0) == 3);
  CHECK(fixed.label(999) == 3);
  CHECK_THROWS_AS(TeacherOracle::fixed_label(0, 5, 5), DomainError);

  TeacherOracle table = TeacherOracle::lookup_table(1, 4, {0, 1, 2, 3, 1});
  CHECK(table.label(4) == 1);
  CHECK(table.label(9) == 1);

  TeacherOracle rand = TeacherOracle::uniform_random(2, 10, 77);
  CHECK(rand.label(5) == rand.label(5));  // deterministic in x
  bool varies = false;
  for (std::uint64_t x = 0; x < 20; ++x) varies |= rand.label(x) != rand.label(0);
  CHECK(varies);

  TeacherOracle exact =
      TeacherOracle::majority_with_error(3, 4, std::vector<int>{2}, 0.0, 5);
  CHECK(exact.label(123) == 2);
  TeacherOracle always_wrong =
      TeacherOracle::majority_with_error(3, 4, std::vector<int>{2}, 1.0, 5);
  CHECK(always_wrong.label(123) != 2);
}

TEST_CASE("vote encoding") {
  NoiseParams p{0.1, 1.0, 250};
  Rng rng = make_stream(1, {stream::kQueryNoise});
  EncodedVote clean = encode_vote(3, 10, p, rng, false);
  for (int k = 0; k < 10; ++k) {
    CHECK(clean.coords[k] == (k == 3 ? 1.0 : 0.0));
  }
  CHECK_FALSE(clean.noised);

  // Small n so a single Gamma(1/n) share is visibly nonzero.
  NoiseParams chunky{0.1, 1.0, 5};
  EncodedVote noisy = encode_vote(3, 10, chunky, rng, true);
  CHECK(noisy.noised);
  CHECK(noisy.coords[3] != 1.0);
  CHECK_THROWS_AS(encode_vote(10, 10, p, rng, false), DomainError);
}

TEST_CASE("vote encoding noise is zero-mean") {
  NoiseParams p{0.5, 1.0, 20};
  Rng rng = make_stream(2, {stream::kQueryNoise});
  std::vector<double> mean(4, 0.0);
  const int reps = 100000;
  for (int r = 0; r < reps; ++r) {
    EncodedVote v = encode_vote(1, 4, p, rng, true);
    for (int k = 0; k < 4; ++k) mean[k] += v.coords[k];
  }
  // Coordinate std is sqrt(2/n)/gamma ~ 0.63, so the mean of 1e5 draws
  // stays within about 0.006 of the one-hot at 3 sigma.
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(mean[k] / reps - (k == 1 ? 1.0 : 0.0)) < 0.01);
  }
}

TEST_CASE("aggregation") {
  CHECK(aggregate({}).empty());
  NoiseParams p{0.1, 1.0, 3};
  Rng rng = make_stream(3, {stream::kQueryNoise});
  std::vector<EncodedVote> votes;
  for (int i = 0; i < 3; ++i) votes.push_back(encode_vote(2, 3, p, rng, false));
  const auto sum = aggregate(votes);
  CHECK((sum == std::vector<double>{0.0, 0.0, 3.0}));

  votes.push_back(encode_vote(1, 2, p, rng, false));
  CHECK_THROWS_AS(aggregate(votes), DomainError);
}

TEST_CASE("centralised noise variance") {
  Rng rng = make_stream(4, {stream::kQueryNoise});
  const double gamma = 0.5;
  double sum2 = 0.0;
  const int reps = 100000;
  for (int r = 0; r < reps; ++r) {
    const auto noisy = centralised_noise({0.0}, gamma, rng);
    sum2 += noisy[0] * noisy[0];
  }
  CHECK(sum2 / reps == doctest::Approx(2.0 / (gamma * gamma)).epsilon(0.05));
}

TEST_CASE("collusion viewpoints") {
  CollusionSpec spec;
  spec.colluders = {0, 1, 2};
  CHECK(spec.is_colluder(1));
  CHECK_FALSE(spec.is_colluder(3));
  CHECK(spec.honest_count(10) == 7);
  CHECK(spec.tau_outsider(10) == doctest::Approx(0.7));
  CHECK(spec.tau_colluder(10) == doctest::Approx(0.7));
  CHECK(spec.tau_honest(10) == doctest::Approx(0.9));
  CHECK_THROWS_AS(spec.validate(2), DomainError);
  CollusionSpec bad;
  bad.colluders = {5};
  CHECK_THROWS_AS(bad.validate(5), DomainError);
}

TEST_CASE("run_query basics") {
  SessionConfig config;
  config.num_classes = 4;
  config.params = NoiseParams{0.1, 1.0, 20};
  config.mode = NoiseMode::kNone;
  config.he = HeMode::kOff;
  config.seed = 5;
  QueryRecord record = run_query(fixed_teachers(20, 4, 2), 0, config);
  CHECK(record.label == 2);
  CHECK(record.clear_label == 2);
  CHECK((record.clear_counts == std::vector<int>{0, 0, 20, 0}));
}

TEST_CASE("ideal circuit matches the clear path on the same noise") {
  SessionConfig config;
  config.num_classes = 5;
  config.params = NoiseParams{0.2, 1.0, 30};
  config.mode = NoiseMode::kDistributed;
  config.seed = 9;

  std::vector<TeacherOracle> teachers;
  for (int i = 0; i < 30; ++i) {
    teachers.push_back(TeacherOracle::uniform_random(i, 5, 123));
  }
  for (std::uint64_t x = 0; x < 20; ++x) {
    config.he = HeMode::kOff;
    QueryRecord off = run_query(teachers, x, config);
    config.he = HeMode::kIdeal;
    QueryRecord ideal = run_query(teachers, x, config);
    CHECK(off.noisy_counts == ideal.noisy_counts);
    CHECK(off.label == ideal.label);
    CHECK(ideal.bootstraps == 25);
  }
}

TEST_CASE("honest noise is independent of collusion") {
  SessionConfig base;
  base.num_classes = 3;
  base.params = NoiseParams{0.3, 1.0, 6};
  base.mode = NoiseMode::kDistributed;
  base.seed = 21;
  const auto teachers = fixed_teachers(6, 3, 1);

  QueryRecord all_honest = run_query(teachers, 0, base);
  SessionConfig collusion = base;
  collusion.collusion.colluders = {2};
  QueryRecord with_colluder = run_query(teachers, 0, collusion);

  // The colluder sends a clean one-hot; everyone else's noise must be
  // bit-identical, so the difference is exactly teacher 2's share vector.
  Rng rng = make_stream(base.seed, {stream::kQueryNoise, 0, 2});
  for (int k = 0; k < 3; ++k) {
    const double share =
        sample_share(base.params.gamma, base.params.n, rng);
    CHECK(all_honest.noisy_counts[k] - with_colluder.noisy_counts[k] ==
          doctest::Approx(share).epsilon(1e-12));
  }
}

TEST_CASE("class permutation in clear mode permutes the label") {
  const int n = 9;
  std::vector<int> labels = {0, 0, 0, 0, 2, 2, 2, 1, 1};
  std::vector<TeacherOracle> teachers;
  std::vector<TeacherOracle> permuted;
  // Permutation 0 -> 1 -> 2 -> 0.
  for (int i = 0; i < n; ++i) {
    teachers.push_back(TeacherOracle::fixed_label(i, 3, labels[i]));
    permuted.push_back(TeacherOracle::fixed_label(i, 3, (labels[i] + 1) % 3));
  }
  SessionConfig config;
  config.num_classes = 3;
  config.params = NoiseParams{0.1, 1.0, n};
  config.mode = NoiseMode::kNone;
  config.seed = 2;
  const int a = run_query(teachers, 0, config).label;
  const int b = run_query(permuted, 0, config).label;
  CHECK(b == (a + 1) % 3);
}

TEST_CASE("sessions are deterministic and ordered") {
  SessionConfig config;
  config.num_classes = 4;
  config.queries = 25;
  config.params = NoiseParams{0.2, 0.9, 12};
  config.mode = NoiseMode::kDistributed;
  config.seed = 31;
  std::vector<TeacherOracle> teachers;
  for (int i = 0; i < 12; ++i) {
    teachers.push_back(TeacherOracle::uniform_random(i, 4, 8));
  }
  SessionResult a = run_session(teachers, config, Execution::kSerial);
  SessionResult b = run_session(teachers, config, Execution::kParallel);
  CHECK(a.labels == b.labels);
  CHECK(a.votes.queries == b.votes.queries);
  CHECK(a.votes.true_labels == b.votes.true_labels);
  CHECK(a.votes.query_count() == 25);
  a.votes.validate();

  config.mode = NoiseMode::kNone;
  SessionResult clear = run_session(teachers, config);
  CHECK(clear.labels == *clear.votes.true_labels);
}

TEST_CASE("adjacent teacher sets give adjacent histograms") {
  std::vector<TeacherOracle> teachers;
  for (int i = 0; i < 10; ++i) {
    teachers.push_back(TeacherOracle::uniform_random(i, 3, 55));
  }
  std::vector<TeacherOracle> swapped = teachers;
  swapped[4] = TeacherOracle::uniform_random(4, 3, 56);

  SessionConfig config;
  config.num_classes = 3;
  config.queries = 10;
  config.params = NoiseParams{0.1, 1.0, 10};
  config.mode = NoiseMode::kNone;
  config.seed = 1;
  SessionResult a = run_session(teachers, config);
  SessionResult b = run_session(swapped, config);
  for (std::size_t i = 0; i < 10; ++i) {
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(a.votes.queries[i][k] - b.votes.queries[i][k]) <= 1);
    }
  }
}

TEST_CASE("attack demo") {
  AttackScenario scenario;
  scenario.num_classes = 4;
  scenario.nu0 = 10;
  scenario.nu1 = 5;
  scenario.other_counts = {4, 4};

  // Crafted offsets make the decision exact when the noise is known.
  CHECK(argmax_real(scenario.offsets()) >= 0);
  NoiseParams p{0.5, 1.0, 50};
  AttackResult result = attack_demo(scenario, p, 2000, 17);
  CHECK(result.centralised_chi0_correct);
  CHECK(result.centralised_chi1_correct);
  CHECK(result.epsilon_refined == doctest::Approx(1.0));
  CHECK(result.accuracy_bound ==
        doctest::Approx(std::exp(1.0) / (1.0 + std::exp(1.0))));
  const double slack = 3.0 * std::sqrt(0.25 / 2000.0);
  CHECK(result.distributed_accuracy <= result.accuracy_bound + slack);
  CHECK(result.distributed_accuracy > 0.4);

  AttackScenario bad = scenario;
  bad.other_counts = {4};
  CHECK_THROWS_AS(attack_demo(bad, p, 10, 1), DomainError);
}
