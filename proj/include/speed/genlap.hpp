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
// Numerics for the generalised Laplace distribution that arises when a
// Laplace(0, 1/gamma) noise is split into n Gamma-difference shares and only
// a fraction tau of the shares stays secret: the kernel integral
// I(v) = int_0^inf (t+v)^(tau-1) t^(tau-1) e^(-2t) dt, the density
// L e^(-gamma|u|) I(gamma|u|) with L = gamma / Gamma(tau)^2, the CDF, the
// tail integrals of e^(-v) I(v), and samplers for shares and aggregates.
#ifndef SPEED_GENLAP_HPP
#define SPEED_GENLAP_HPP

#include <cstdint>
#include <vector>

#include "speed/common.hpp"
#include "speed/rng.hpp"

namespace speed {

// (gamma, tau, n): inverse noise scale, secret-noise ratio, teacher count.
struct NoiseParams {
  double gamma = 0.1;
  double tau = 1.0;
  int n = 1;

  // Throws DomainError unless gamma > 0, 0 < tau <= 1, n >= 1.
  void validate() const;

  // Number of shares whose noise stays secret, round(tau * n).
  int secret_share_count() const;

  // tau snapped to an integer share count over n.
  double snapped_tau() const;
};

struct QuadratureSettings {
  double rel_tol = 1e-10;
  int max_depth = 15;
};

// I(v) for tau in (0, 1]. v = 0 requires tau > 1/2 (the integral diverges
// otherwise); decreasing in v and bounded by v^(tau-1) Gamma(tau) / 2^tau.
double eval_I(double tau, double v, const QuadratureSettings& qs = {});

// I(0) = Gamma(2 tau - 1) / 2^(2 tau - 1), closed form, tau > 1/2 only.
double eval_I_origin(double tau);

// int_a^inf e^(-v) I(v) dv. Production path: the order-swapped form
// int_0^inf t^(tau-1) e^(-t) UpperGamma(tau, t + a) dt.
// Note int_0^inf e^(-v) I(v) dv = Gamma(tau)^2 / 2.
double tail_integral(double tau, double a, const QuadratureSettings& qs = {});

// Same quantity via direct iterated quadrature of e^(-v) I(v); kept as the
// independent cross-check route.
double tail_integral_iterated(double tau, double a,
                              const QuadratureSettings& qs = {});

// int_0^a e^(-v) I(v) dv, without cancellation against the full mass.
double lower_integral(double tau, double a, const QuadratureSettings& qs = {});

// Gamma(shape, scale) sampler valid for sub-unit shapes (rejection method).
double sample_gamma(double shape, double scale, Rng& rng);

// One teacher's share G1 - G2, both Gamma(1/n, 1/gamma). Zero mean,
// variance 2 / (n gamma^2).
double sample_share(double gamma, int n, Rng& rng);

// Laplace(0, scale) helpers.
double laplace_pdf(double x, double scale);
double laplace_cdf(double x, double scale);
double sample_laplace(double scale, Rng& rng);

class GenLapDist {
 public:
  explicit GenLapDist(NoiseParams params, QuadratureSettings qs = {});

  const NoiseParams& params() const { return params_; }

  // f(u) = L e^(-gamma|u|) I(gamma|u|); even; u = 0 requires tau > 1/2.
  double density(double u) const;

  // Monotone, F(0) = 1/2, F(t) + F(-t) = 1.
  double cdf(double t) const;

  // Sum of round(tau * n) independent shares.
  double sample_aggregate(Rng& rng) const;

 private:
  NoiseParams params_;
  QuadratureSettings qs_;
  double log_norm_;  // log of Gamma(tau)^2
};

// count aggregate draws, deterministically chunked so the result does not
// depend on the thread count.
std::vector<double> sample_aggregates(const NoiseParams& params,
                                      std::size_t count, std::uint64_t seed,
                                      Execution exec = Execution::kParallel);

}  // namespace speed

#endif  // SPEED_GENLAP_HPP
