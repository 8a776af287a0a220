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
#include "speed/genlap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace speed {

void log_warn(const std::string& msg) {
  const char* lvl = std::getenv("SPEED_LOG");
  if (lvl != nullptr && std::string(lvl) != "0") {
    std::cerr << "[speed] warning: " << msg << "\n";
  }
}

void NoiseParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be a positive finite real");
  }
  if (!(tau > 0.0) || !(tau <= 1.0)) {
    throw DomainError("tau must lie in (0, 1]");
  }
  if (n < 1) {
    throw DomainError("n must be a positive integer");
  }
}

int NoiseParams::secret_share_count() const {
  return static_cast<int>(std::lround(tau * n));
}

double NoiseParams::snapped_tau() const {
  return static_cast<double>(secret_share_count()) / n;
}

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0) || !(tau <= 1.0)) {
    throw DomainError("tau must lie in (0, 1]");
  }
}

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Integrates f(t) t^(tau-1) over t in (0, 1] with the substitution u = t^tau,
// which removes the endpoint singularity exactly, then f(t) t^(tau-1) on
// [1, inf) directly. f must be smooth and decay at least exponentially.
template <typename F>
double integrate_singular_split(double tau, F&& f,
                                const QuadratureSettings& qs) {
  const double inv_tau = 1.0 / tau;
  auto head = [&](double u) { return f(std::pow(u, inv_tau)); };
  auto tail = [&](double t) { return f(t) * std::pow(t, tau - 1.0); };
  double err1 = 0.0, err2 = 0.0;
  double part1 =
      GK::integrate(head, 0.0, 1.0, qs.max_depth, qs.rel_tol, &err1) * inv_tau;
  double part2 = GK::integrate(tail, 1.0, kInf, qs.max_depth, qs.rel_tol, &err2);
  return part1 + part2;
}

}  // namespace

double eval_I_origin(double tau) {
  if (!(tau > 0.5) || !(tau <= 1.0)) {
    throw DomainError("I(0) is finite only for tau in (1/2, 1]");
  }
  return boost::math::tgamma(2.0 * tau - 1.0) / std::pow(2.0, 2.0 * tau - 1.0);
}

double eval_I(double tau, double v, const QuadratureSettings& qs) {
  check_tau(tau);
  if (v < 0.0) {
    throw DomainError("eval_I requires v >= 0");
  }
  if (v == 0.0) {
    return eval_I_origin(tau);  // throws for tau <= 1/2
  }
  if (tau == 1.0) {
    return 0.5;  // both power factors vanish
  }
  auto f = [&](double t) { return std::pow(t + v, tau - 1.0) * std::exp(-2.0 * t); };
  return integrate_singular_split(tau, f, qs);
}

double tail_integral(double tau, double a, const QuadratureSettings& qs) {
  check_tau(tau);
  if (a < 0.0) {
    throw DomainError("tail_integral requires a >= 0");
  }
  auto f = [&](double t) {
    return std::exp(-t) * boost::math::tgamma(tau, t + a);
  };
  return integrate_singular_split(tau, f, qs);
}

double tail_integral_iterated(double tau, double a,
                              const QuadratureSettings& qs) {
  check_tau(tau);
  if (a < 0.0) {
    throw DomainError("tail_integral requires a >= 0");
  }
  // Inner integrals run tighter so outer adaptivity sees a smooth function.
  QuadratureSettings inner{qs.rel_tol * 1e-2, qs.max_depth};
  auto f = [&](double v) { return std::exp(-v) * eval_I(tau, v, inner); };
  // e^(-v) I(v) ~ v^(2 tau - 1) near 0: integrable but singular for
  // tau <= 1/2, so the first unit interval goes through tanh_sinh.
  boost::math::quadrature::tanh_sinh<double> ts(qs.max_depth);
  double head = ts.integrate(f, a, a + 1.0, qs.rel_tol);
  double tail = GK::integrate(f, a + 1.0, kInf, qs.max_depth, qs.rel_tol);
  return head + tail;
}

double lower_integral(double tau, double a, const QuadratureSettings& qs) {
  check_tau(tau);
  if (a < 0.0) {
    throw DomainError("lower_integral requires a >= 0");
  }
  auto f = [&](double t) {
    return std::exp(-t) *
           (boost::math::tgamma(tau, t) - boost::math::tgamma(tau, t + a));
  };
  return integrate_singular_split(tau, f, qs);
}

// ---------------------------------------------------------------------------
// Sampling.

namespace {

// Ahrens-Dieter GS rejection sampler, shape in (0, 1), unit scale.
// Note exp(-x) == 1.0 in double precision for x below ~1e-17, so the
// acceptance test is skipped exactly when it cannot reject.
double gamma_gs(double shape, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double inv_shape = 1.0 / shape;
  const double b = 1.0 + shape * 0.36787944117144233;  // 1 + shape/e
  for (;;) {
    const double p = b * u01(rng);
    if (p <= 1.0) {
      const double x = std::exp(std::log(p) * inv_shape);
      if (x < 1e-17 || u01(rng) <= std::exp(-x)) return x;
    } else {
      const double x = -std::log((b - p) * inv_shape);
      if (u01(rng) <= std::pow(x, shape - 1.0)) return x;
    }
  }
}

}  // namespace

double sample_gamma(double shape, double scale, Rng& rng) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw DomainError("gamma sampler requires positive shape and scale");
  }
  if (shape < 1.0) {
    return gamma_gs(shape, rng) * scale;
  }
  std::gamma_distribution<double> dist(shape, scale);
  return dist(rng);
}

double sample_share(double gamma, int n, Rng& rng) {
  if (n < 1) throw DomainError("n must be a positive integer");
  const double shape = 1.0 / n;
  const double scale = 1.0 / gamma;
  return sample_gamma(shape, scale, rng) - sample_gamma(shape, scale, rng);
}

double laplace_pdf(double x, double scale) {
  return std::exp(-std::abs(x) / scale) / (2.0 * scale);
}

double laplace_cdf(double x, double scale) {
  if (x < 0.0) return 0.5 * std::exp(x / scale);
  return 1.0 - 0.5 * std::exp(-x / scale);
}

double sample_laplace(double scale, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double u = u01(rng) - 0.5;
  const double s = (u >= 0.0) ? 1.0 : -1.0;
  return -scale * s * std::log1p(-2.0 * std::abs(u));
}

// ---------------------------------------------------------------------------
// GenLapDist.

GenLapDist::GenLapDist(NoiseParams params, QuadratureSettings qs)
    : params_(params), qs_(qs) {
  params_.validate();
  log_norm_ = 2.0 * std::lgamma(params_.tau);
}

double GenLapDist::density(double u) const {
  const double tau = params_.tau;
  const double gamma = params_.gamma;
  if (tau == 1.0) {
    return laplace_pdf(u, 1.0 / gamma);
  }
  if (u == 0.0 && tau <= 0.5) {
    throw DomainError("density is unbounded at 0 for tau <= 1/2");
  }
  const double au = std::abs(u);
  const double scale = gamma * std::exp(-log_norm_);  // L = gamma/Gamma(tau)^2
  return scale * std::exp(-gamma * au) * eval_I(tau, gamma * au, qs_);
}

double GenLapDist::cdf(double t) const {
  const double tau = params_.tau;
  const double gamma = params_.gamma;
  if (tau == 1.0) {
    return laplace_cdf(t, 1.0 / gamma);
  }
  // 1 - F(t) = T(gamma t) / Gamma(tau)^2 for t >= 0, by evenness.
  const double upper = tail_integral(tau, gamma * std::abs(t), qs_) *
                       std::exp(-log_norm_);
  return (t >= 0.0) ? 1.0 - upper : upper;
}

double GenLapDist::sample_aggregate(Rng& rng) const {
  const int m = params_.secret_share_count();
  if (m < 1) {
    throw DomainError("round(tau * n) must be at least one share");
  }
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    sum += sample_share(params_.gamma, params_.n, rng);
  }
  return sum;
}

std::vector<double> sample_aggregates(const NoiseParams& params,
                                      std::size_t count, std::uint64_t seed,
                                      Execution exec) {
  params.validate();
  GenLapDist dist(params);
  std::vector<double> out(count);
  constexpr std::size_t kChunkSize = 4096;
  const std::size_t chunks = (count + kChunkSize - 1) / kChunkSize;

  auto fill_chunk = [&](std::size_t c) {
    Rng rng = make_stream(seed, {stream::kChunk, c});
    const std::size_t lo = c * kChunkSize;
    const std::size_t hi = std::min(count, lo + kChunkSize);
    for (std::size_t i = lo; i < hi; ++i) {
      out[i] = dist.sample_aggregate(rng);
    }
  };

  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
      fill_chunk(static_cast<std::size_t>(c));
    }
  } else {
    for (std::size_t c = 0; c < chunks; ++c) fill_chunk(c);
  }
  return out;
}

}  // namespace speed
