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
#include "speed/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace speed {

MistakeInput MistakeInput::from_counts(const std::vector<int>& counts) {
  const int star = clear_argmax(counts);
  MistakeInput input;
  input.deltas.reserve(counts.size() - 1);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (static_cast<int>(k) == star) continue;
    input.deltas.push_back(static_cast<long>(counts[star]) - counts[k]);
  }
  return input;
}

void MistakeInput::validate() const {
  for (long d : deltas) {
    if (d < 0) throw DomainError("vote margins must be non-negative");
  }
}

MomentsLedger MomentsLedger::zeros(int lmax) {
  if (lmax < 1) throw DomainError("lmax must be a positive integer");
  return MomentsLedger{std::vector<double>(static_cast<std::size_t>(lmax), 0.0)};
}

double per_query_epsilon(double gamma, double tau,
                         const QuadratureSettings& qs) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be a positive finite real");
  }
  if (!(tau > 0.0) || !(tau < 1.0)) {
    throw DomainError("per_query_epsilon requires tau in (0, 1)");
  }
  const double lower = lower_integral(tau, gamma, qs);
  const double tail = tail_integral(tau, 2.0 * gamma, qs);
  return std::log1p(2.0 * lower / tail);
}

double per_query_epsilon_refined(double gamma, double tau,
                                 const QuadratureSettings& qs) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be a positive finite real");
  }
  if (!(tau > 0.0) || !(tau <= 1.0)) {
    throw DomainError("tau must lie in (0, 1]");
  }
  if (tau == 1.0) {
    return 2.0 * gamma;  // plain Laplace: the ratio bound is tight
  }
  const double base = per_query_epsilon(gamma, tau, qs);
  if (tau <= 0.5) {
    return base;  // density ratio g is not differentiable at 0 here
  }
  if (tau < 0.55) {
    log_warn("per-query epsilon refinement is ill-conditioned for tau near "
             "1/2 (tau = " + std::to_string(tau) + ")");
  }
  const double half_mass = 0.5 * std::exp(2.0 * std::lgamma(tau));
  const double tail = tail_integral(tau, 2.0 * gamma, qs);
  const double i2g = eval_I(tau, 2.0 * gamma, qs);
  const double g0 = half_mass / tail;
  const double gp0 = gamma *
                     (half_mass * std::exp(-2.0 * gamma) * i2g -
                      eval_I_origin(tau) * tail) /
                     (tail * tail);
  return std::min(base, std::log(g0 - gp0));
}

namespace {

double mistake_term(double gamma, double tau, double delta) {
  const double v = gamma * delta;
  if (tau == 1.0) {
    return (2.0 + v) * std::exp(-v) / 4.0;
  }
  const double lg2 = 2.0 * std::lgamma(tau);
  if (tau > 0.5) {
    const double extra = std::pow(v, 2.0 * tau - 1.0) /
                         (tau * std::exp2(4.0 * tau - 2.0) * std::exp(lg2));
    return std::exp(-v) * (0.5 + extra);
  }
  const double shape = 1.5 * tau;
  const double extra = std::pow(v, 0.5 * tau) /
                       (tau * std::exp2(2.5 * tau - 1.0) * std::exp(lg2)) *
                       std::pow(shape, shape) *
                       std::pow(2.0 / tau - 3.0, 1.0 - shape);
  return std::exp(-v) * (0.5 + extra);
}

}  // namespace

double mistake_bound(double gamma, double tau, const MistakeInput& input) {
  if (!(gamma > 0.0) || !(tau > 0.0) || !(tau <= 1.0)) {
    throw DomainError("mistake_bound requires gamma > 0 and tau in (0, 1]");
  }
  input.validate();
  double sum = 0.0;
  for (long d : input.deltas) {
    sum += mistake_term(gamma, tau, static_cast<double>(d));
  }
  return sum;
}

double mistake_bound_holder(double gamma, double tau, const MistakeInput& input,
                            double hq) {
  if (!(gamma > 0.0) || !(tau > 0.0) || !(tau < 1.0)) {
    throw DomainError("the Hoelder variant requires gamma > 0, tau in (0, 1)");
  }
  if (!(hq > 1.0 / (1.0 - tau))) {
    throw DomainError("Hoelder exponent must exceed 1 / (1 - tau)");
  }
  input.validate();
  const double hp = hq / (hq - 1.0);
  const double denom = tau * std::exp(2.0 * std::lgamma(tau)) *
                       std::exp2(4.0 * tau - 2.0 + 1.0 / hq) *
                       std::pow(hp, 1.0 / hp) *
                       std::pow(hq * (1.0 - tau) - 1.0, 1.0 / hq);
  double sum = 0.0;
  for (long d : input.deltas) {
    const double v = gamma * static_cast<double>(d);
    sum += std::exp(-v) *
           (0.5 + std::pow(v, 2.0 * tau - 1.0 + 1.0 / hq) / denom);
  }
  return sum;
}

double moment_per_query(double eps, double q, int l) {
  if (!(eps > 0.0) || l < 1) {
    throw DomainError("moment_per_query requires eps > 0 and l >= 1");
  }
  if (q < 0.0 || q > 1.0) {
    throw DomainError("mistake probability must lie in [0, 1]");
  }
  if (q == 0.0) return 0.0;
  const double ld = static_cast<double>(l);
  double bound = std::min(eps * ld, eps * eps * ld * (ld + 1.0) / 2.0);
  if (q < 1.0 / (std::exp(eps) + 1.0)) {
    const double ee = std::exp(eps);
    const double dep = std::log((1.0 - q) *
                                    std::pow((1.0 - q) / (1.0 - q * ee), ld) +
                                q * std::exp(eps * ld));
    bound = std::min(bound, dep);
  }
  return bound;
}

MomentsLedger compose(const std::vector<MomentsLedger>& ledgers) {
  if (ledgers.empty()) {
    throw DomainError("compose requires at least one ledger");
  }
  MomentsLedger total = MomentsLedger::zeros(ledgers.front().lmax());
  for (const MomentsLedger& ledger : ledgers) {
    if (ledger.lmax() != total.lmax()) {
      throw DomainError("all ledgers must share the same lmax");
    }
    for (int i = 0; i < total.lmax(); ++i) {
      total.alpha[i] += ledger.alpha[i];
    }
  }
  return total;
}

double tail_epsilon(const MomentsLedger& ledger, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw DomainError("delta must lie in (0, 1)");
  }
  if (ledger.lmax() < 1) {
    throw DomainError("ledger must hold at least one moment order");
  }
  const double log_inv_delta = -std::log(delta);
  double best = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= ledger.lmax(); ++l) {
    best = std::min(best, (ledger.alpha[l - 1] + log_inv_delta) / l);
  }
  return best;
}

PrivacyReport analyze(const VoteHistogram& votes, const NoiseParams& params,
                      double delta, int lmax, Execution exec) {
  params.validate();
  votes.validate();
  if (lmax < 1) throw DomainError("lmax must be a positive integer");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw DomainError("delta must lie in (0, 1)");
  }

  PrivacyReport report;
  report.delta = delta;
  report.lmax = lmax;
  report.gamma = params.gamma;
  report.tau = params.snapped_tau();
  const std::size_t queries = votes.query_count();
  report.per_query.resize(queries);
  if (queries == 0) {
    report.epsilon = 0.0;
    return report;
  }

  NoiseParams snapped = params;
  snapped.tau = report.tau;
  const double eps_q = per_query_epsilon_refined(snapped.gamma, snapped.tau);
  const double q_threshold = 1.0 / (std::exp(eps_q) + 1.0);

  // alphas[i * lmax + l - 1] holds query i's order-l moment bound.
  std::vector<double> alphas(queries * static_cast<std::size_t>(lmax), 0.0);
  auto run_query = [&](std::size_t i) {
    MistakeInput input = MistakeInput::from_counts(votes.queries[i]);
    const double q = std::min(mistake_bound(snapped.gamma, snapped.tau, input),
                              1.0);
    QueryTrace& trace = report.per_query[i];
    trace.epsilon_q = eps_q;
    trace.q_bound = q;
    trace.branch = q < q_threshold ? MomentBranch::kDataDependent
                                   : MomentBranch::kDataIndependent;
    for (int l = 1; l <= lmax; ++l) {
      alphas[i * lmax + (l - 1)] = moment_per_query(eps_q, q, l);
    }
  };

  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(queries); ++i) {
      run_query(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < queries; ++i) run_query(i);
  }

  MomentsLedger total = MomentsLedger::zeros(lmax);
  for (std::size_t i = 0; i < queries; ++i) {
    for (int l = 0; l < lmax; ++l) {
      total.alpha[l] += alphas[i * lmax + l];
    }
  }
  report.epsilon = tail_epsilon(total, delta);
  return report;
}

}  // namespace speed
