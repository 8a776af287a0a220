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
// Differential-privacy accountant for the report-noisy-max mechanism under
// generalised Laplace noise: per-query cost bounds, the mistake-probability
// bound on the noisy argmax, per-query log-moment bounds, additive
// composition across queries and the tail-bound conversion to (eps, delta).
#ifndef SPEED_ACCOUNTANT_HPP
#define SPEED_ACCOUNTANT_HPP

#include <vector>

#include "speed/genlap.hpp"
#include "speed/votes.hpp"

namespace speed {

// Margins Delta_k = n_{k*} - n_k for every class other than the clear
// argmax k*; length K - 1, all entries non-negative.
struct MistakeInput {
  std::vector<long> deltas;

  static MistakeInput from_counts(const std::vector<int>& counts);
  void validate() const;
};

// Log-moment bounds alpha(l) for l = 1..lmax; composes additively.
struct MomentsLedger {
  std::vector<double> alpha;  // alpha[i] is the bound for order l = i + 1

  int lmax() const { return static_cast<int>(alpha.size()); }
  static MomentsLedger zeros(int lmax);
};

inline constexpr int kDefaultLmax = 25;
inline constexpr double kDefaultDelta = 1e-5;

enum class MomentBranch { kDataDependent, kDataIndependent };

struct QueryTrace {
  double epsilon_q = 0.0;  // per-query cost used for the moments
  double q_bound = 0.0;    // clamped mistake-probability bound
  MomentBranch branch = MomentBranch::kDataIndependent;
};

struct PrivacyReport {
  double epsilon = 0.0;
  double delta = kDefaultDelta;
  int lmax = kDefaultLmax;
  double gamma = 0.0;
  double tau = 1.0;  // snapped value actually used
  std::vector<QueryTrace> per_query;
};

// First per-query bound: log(1 + 2 L(gamma) / T(2 gamma)) where L and T are
// the lower and upper tail integrals of e^(-v) I(v). Requires tau in (0, 1)
// strictly; at tau = 1 use the refined bound, which is exact there.
double per_query_epsilon(double gamma, double tau,
                         const QuadratureSettings& qs = {});

// min(first bound, log(g(0) - g'(0))) for tau > 1/2; falls back to the
// first bound for tau <= 1/2 (g is not differentiable at 0 there) and
// returns exactly 2 gamma at tau = 1.
double per_query_epsilon_refined(double gamma, double tau,
                                 const QuadratureSettings& qs = {});

// Upper bound on P[noisy argmax != k*]; sum over classes of per-margin
// terms, each in (0, 1/2]. May exceed 1 overall (union bound).
double mistake_bound(double gamma, double tau, const MistakeInput& input);

// General Hoelder-exponent variant; requires hq > 1 / (1 - tau), tau < 1.
double mistake_bound_holder(double gamma, double tau, const MistakeInput& input,
                            double hq);

// Log-moment bound of order l for an eps-DP mechanism whose output misses a
// fixed outcome with probability at most q. The data-dependent branch
// applies only when q < (e^eps - 1) / (e^(2 eps) - 1).
double moment_per_query(double eps, double q, int l);

MomentsLedger compose(const std::vector<MomentsLedger>& ledgers);

// eps = min_l (alpha(l) + ln(1/delta)) / l.
double tail_epsilon(const MomentsLedger& ledger, double delta);

// End-to-end pipeline over a vote histogram: per-query cost + mistake bound
// + moments, composed and converted at the given delta.
PrivacyReport analyze(const VoteHistogram& votes, const NoiseParams& params,
                      double delta = kDefaultDelta, int lmax = kDefaultLmax,
                      Execution exec = Execution::kParallel);

}  // namespace speed

#endif  // SPEED_ACCOUNTANT_HPP
