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
// Test-only reference numerics, deliberately independent of the production
// code paths: adaptive Simpson quadrature instead of Gauss-Kronrod, the
// iterated double integral instead of the incomplete-gamma reformulation,
// and the two-Gamma-difference representation of the aggregate noise
// instead of per-share summation.
#ifndef SPEED_TESTS_ORACLE_HPP
#define SPEED_TESTS_ORACLE_HPP

#include "speed/genlap.hpp"
#include "speed/rng.hpp"

namespace speed::testing {

// I(v) = int_0^inf (t+v)^(tau-1) t^(tau-1) e^(-2t) dt via adaptive Simpson
// with the u = t^tau substitution on the first unit interval.
double oracle_eval_I(double tau, double v);

// int_a^inf e^(-v) I(v) dv, iterated.
double oracle_tail(double tau, double a);

// int_0^a e^(-v) I(v) dv, iterated.
double oracle_lower(double tau, double a);

// Same distribution as the production aggregate (sum of round(tau n)
// Gamma(1/n) difference shares) but drawn as a single difference of two
// Gamma(round(tau n)/n) variables.
double oracle_sample_aggregate(const NoiseParams& params, Rng& rng);

}  // namespace speed::testing

#endif  // SPEED_TESTS_ORACLE_HPP
