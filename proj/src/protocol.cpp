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
#include "speed/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "speed/accountant.hpp"

namespace speed {

// ---------------------------------------------------------------------------
// TeacherOracle.

TeacherOracle::TeacherOracle(int id, int num_classes, Fn fn)
    : id_(id), num_classes_(num_classes), fn_(std::move(fn)) {
  if (num_classes_ < 2) throw DomainError("oracle requires at least 2 classes");
}

int TeacherOracle::label(std::uint64_t x) const {
  const int y = fn_(x);
  if (y < 0 || y >= num_classes_) {
    throw DomainError("oracle produced a label out of range");
  }
  return y;
}

TeacherOracle TeacherOracle::lookup_table(int id, int num_classes,
                                          std::vector<int> table) {
  if (table.empty()) throw DomainError("lookup table must be non-empty");
  return TeacherOracle(id, num_classes,
                       [table = std::move(table)](std::uint64_t x) {
                         return table[x % table.size()];
                       });
}

TeacherOracle TeacherOracle::fixed_label(int id, int num_classes, int label) {
  if (label < 0 || label >= num_classes) {
    throw DomainError("fixed label out of range");
  }
  return TeacherOracle(id, num_classes, [label](std::uint64_t) { return label; });
}

TeacherOracle TeacherOracle::uniform_random(int id, int num_classes,
                                            std::uint64_t seed) {
  return TeacherOracle(
      id, num_classes, [id, num_classes, seed](std::uint64_t x) {
        Rng rng = make_stream(seed, {stream::kTeacher,
                                     static_cast<std::uint64_t>(id), x});
        std::uniform_int_distribution<int> pick(0, num_classes - 1);
        return pick(rng);
      });
}

TeacherOracle TeacherOracle::majority_with_error(int id, int num_classes,
                                                 std::vector<int> truth,
                                                 double error_rate,
                                                 std::uint64_t seed) {
  if (truth.empty()) throw DomainError("truth table must be non-empty");
  if (!(error_rate >= 0.0) || !(error_rate <= 1.0)) {
    throw DomainError("error rate must lie in [0, 1]");
  }
  return TeacherOracle(
      id, num_classes,
      [id, num_classes, seed, error_rate,
       truth = std::move(truth)](std::uint64_t x) {
        const int correct = truth[x % truth.size()];
        Rng rng = make_stream(seed, {stream::kTeacher,
                                     static_cast<std::uint64_t>(id), x});
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        if (u01(rng) >= error_rate) return correct;
        std::uniform_int_distribution<int> pick(0, num_classes - 2);
        const int wrong = pick(rng);
        return wrong < correct ? wrong : wrong + 1;
      });
}

// ---------------------------------------------------------------------------
// Votes and aggregation.

bool CollusionSpec::is_colluder(int id) const {
  return std::find(colluders.begin(), colluders.end(), id) != colluders.end();
}

int CollusionSpec::honest_count(int n) const {
  return n - static_cast<int>(colluders.size());
}

double CollusionSpec::tau_outsider(int n) const {
  return static_cast<double>(honest_count(n)) / n;
}

double CollusionSpec::tau_colluder(int n) const {
  return static_cast<double>(honest_count(n)) / n;
}

double CollusionSpec::tau_honest(int n) const {
  return static_cast<double>(n - 1) / n;
}

void CollusionSpec::validate(int n) const {
  for (int id : colluders) {
    if (id < 0 || id >= n) throw DomainError("colluder id out of range");
  }
  if (static_cast<int>(colluders.size()) >= n) {
    throw DomainError("at least one teacher must stay honest");
  }
}

EncodedVote encode_vote(int label, int num_classes, const NoiseParams& params,
                        Rng& rng, bool add_noise) {
  if (label < 0 || label >= num_classes) {
    throw DomainError("vote label out of range");
  }
  EncodedVote vote;
  vote.coords.assign(num_classes, 0.0);
  vote.coords[label] = 1.0;
  vote.noised = add_noise;
  if (add_noise) {
    params.validate();
    for (int k = 0; k < num_classes; ++k) {
      vote.coords[k] += sample_share(params.gamma, params.n, rng);
    }
  }
  return vote;
}

std::vector<double> aggregate(const std::vector<EncodedVote>& votes) {
  if (votes.empty()) return {};
  std::vector<double> sum(votes.front().coords.size(), 0.0);
  for (const EncodedVote& vote : votes) {
    if (vote.coords.size() != sum.size()) {
      throw DomainError("votes disagree on the class count");
    }
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += vote.coords[k];
  }
  return sum;
}

std::vector<double> centralised_noise(const std::vector<double>& counts,
                                      double gamma, Rng& rng) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  std::vector<double> out = counts;
  for (double& c : out) c += sample_laplace(1.0 / gamma, rng);
  return out;
}

int argmax_real(const std::vector<double>& values) {
  if (values.empty()) throw DomainError("argmax of an empty vector");
  int best = 0;
  for (int k = 1; k < static_cast<int>(values.size()); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Queries and sessions.

ArgmaxCircuitConfig SessionConfig::circuit_config() const {
  ArgmaxCircuitConfig cfg;
  cfg.offset_a = offset_a;
  cfg.n = params.n;
  cfg.sigma_c = sigma_c;
  return cfg;
}

void SessionConfig::validate(std::size_t teacher_count) const {
  params.validate();
  if (num_classes < 2) throw DomainError("at least 2 classes required");
  if (teacher_count != static_cast<std::size_t>(params.n)) {
    throw DomainError("teacher list size must match params.n");
  }
  collusion.validate(params.n);
}

namespace {

// Tag separating the aggregator's own noise stream from teacher streams.
constexpr std::uint64_t kAggregatorTag = ~0ULL;

}  // namespace

QueryRecord run_query(const std::vector<TeacherOracle>& teachers,
                      std::uint64_t x, const SessionConfig& config) {
  config.validate(teachers.size());
  QueryRecord record;
  record.clear_counts.assign(config.num_classes, 0);

  std::vector<EncodedVote> votes;
  votes.reserve(teachers.size());
  for (const TeacherOracle& teacher : teachers) {
    const int y = teacher.label(x);
    ++record.clear_counts[y];
    const bool noise = config.mode == NoiseMode::kDistributed &&
                       !config.collusion.is_colluder(teacher.id());
    Rng rng = make_stream(config.seed,
                          {stream::kQueryNoise, x,
                           static_cast<std::uint64_t>(teacher.id())});
    votes.push_back(encode_vote(y, config.num_classes, config.params, rng,
                                noise));
  }
  record.clear_label = clear_argmax(record.clear_counts);

  record.noisy_counts = aggregate(votes);
  if (config.mode == NoiseMode::kCentralised) {
    Rng rng = make_stream(config.seed, {stream::kQueryNoise, x, kAggregatorTag});
    record.noisy_counts =
        centralised_noise(record.noisy_counts, config.params.gamma, rng);
  }

  if (config.he == HeMode::kOff) {
    record.label = argmax_real(record.noisy_counts);
    return record;
  }

  const ArgmaxCircuitConfig circuit = config.circuit_config();
  IdealBackend ideal;
  NoisyBackend noisy(config.sigma_c,
                     make_stream(config.seed, {stream::kCircuit, x})());
  CipherBackend& inner =
      config.he == HeMode::kIdeal ? static_cast<CipherBackend&>(ideal)
                                  : static_cast<CipherBackend&>(noisy);
  CountingBackend backend(inner);
  OnehotResult result = encrypted_argmax(record.noisy_counts, backend, circuit);
  record.label = result.index;
  record.degenerate = result.degenerate;
  record.bootstraps = backend.bootstraps();
  return record;
}

SessionResult run_session(const std::vector<TeacherOracle>& teachers,
                          const SessionConfig& config, Execution exec) {
  config.validate(teachers.size());
  SessionResult result;
  const std::size_t q = config.queries;
  result.records.resize(q);

  auto fill = [&](std::size_t i) {
    result.records[i] = run_query(teachers, i, config);
  };
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(q); ++i) {
      fill(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < q; ++i) fill(i);
  }

  result.labels.reserve(q);
  result.votes.n = config.params.n;
  result.votes.k = config.num_classes;
  result.votes.queries.reserve(q);
  result.votes.true_labels.emplace();
  result.votes.true_labels->reserve(q);
  for (const QueryRecord& record : result.records) {
    result.labels.push_back(record.label);
    result.votes.queries.push_back(record.clear_counts);
    result.votes.true_labels->push_back(record.clear_label);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Attack demo.

std::vector<int> AttackScenario::counts(bool chi0) const {
  validate();
  std::vector<int> out(num_classes, 0);
  out[k0] = chi0 ? nu0 : nu0 - 1;
  out[k1] = chi0 ? nu1 : nu1 + 1;
  std::size_t j = 0;
  for (int k = 0; k < num_classes; ++k) {
    if (k == k0 || k == k1) continue;
    out[k] = other_counts[j++];
  }
  return out;
}

std::vector<double> AttackScenario::offsets() const {
  validate();
  std::vector<double> out(num_classes, 0.0);
  out[k0] = 0.0;
  out[k1] = static_cast<double>(nu0) - 1.0 - nu1;
  std::size_t j = 0;
  for (int k = 0; k < num_classes; ++k) {
    if (k == k0 || k == k1) continue;
    out[k] = static_cast<double>(nu0) - 0.5 - other_counts[j++];
  }
  return out;
}

void AttackScenario::validate() const {
  if (num_classes < 2) throw DomainError("attack scenario requires K >= 2");
  if (k0 == k1 || k0 < 0 || k1 < 0 || k0 >= num_classes ||
      k1 >= num_classes) {
    throw DomainError("k0 and k1 must be distinct valid classes");
  }
  if (nu0 < 1 || nu1 < 0) {
    throw DomainError("nu0 must be >= 1 and nu1 >= 0");
  }
  if (other_counts.size() != static_cast<std::size_t>(num_classes - 2)) {
    throw DomainError("other_counts must cover the remaining classes");
  }
  for (int c : other_counts) {
    if (c < 0) throw DomainError("counts must be non-negative");
  }
}

AttackResult attack_demo(const AttackScenario& scenario,
                         const NoiseParams& params, std::size_t trials,
                         std::uint64_t seed) {
  scenario.validate();
  params.validate();
  AttackResult result;
  result.trials = trials;

  const std::vector<double> offsets = scenario.offsets();
  auto shifted = [&](const std::vector<int>& counts) {
    std::vector<double> v(counts.begin(), counts.end());
    for (int k = 0; k < scenario.num_classes; ++k) v[k] += offsets[k];
    return v;
  };

  // Known (cancelled) noise: the decision is exact on counts + offsets.
  result.centralised_chi0_correct =
      argmax_real(shifted(scenario.counts(true))) == scenario.k0;
  result.centralised_chi1_correct =
      argmax_real(shifted(scenario.counts(false))) != scenario.k0;

  NoiseParams snapped = params;
  snapped.tau = params.snapped_tau();
  result.epsilon_refined =
      per_query_epsilon_refined(snapped.gamma, snapped.tau);
  result.accuracy_bound =
      1.0 / (1.0 + std::exp(-result.epsilon_refined));

  GenLapDist dist(snapped);
  std::size_t correct = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = make_stream(seed, {stream::kAttack, t});
    std::uniform_int_distribution<int> coin(0, 1);
    const bool chi0 = coin(rng) == 0;
    std::vector<double> noisy = shifted(scenario.counts(chi0));
    for (double& c : noisy) c += dist.sample_aggregate(rng);
    const bool guess_chi0 = argmax_real(noisy) == scenario.k0;
    if (guess_chi0 == chi0) ++correct;
  }
  result.distributed_accuracy =
      trials == 0 ? 0.0 : static_cast<double>(correct) / trials;
  return result;
}

}  // namespace speed
