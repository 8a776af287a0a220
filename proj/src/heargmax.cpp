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
#include "speed/heargmax.hpp"

#include <atomic>
#include <cmath>

#include "speed/votes.hpp"

namespace speed {

namespace {

std::atomic<int> g_next_backend_id{1};

}  // namespace

void CipherBackend::check_owner(const Cipher& c) const {
  if (c.owner != id()) {
    throw DomainError("cipher belongs to a different backend instance");
  }
}

// ---------------------------------------------------------------------------
// IdealBackend.

IdealBackend::IdealBackend() : id_(g_next_backend_id.fetch_add(1)) {}

Cipher IdealBackend::encrypt(double torus_value) {
  return Cipher{torus_wrap(torus_value), id_};
}

Cipher IdealBackend::add(const Cipher& a, const Cipher& b) {
  check_owner(a);
  check_owner(b);
  return Cipher{torus_wrap(a.value + b.value), id_};
}

Cipher IdealBackend::sub(const Cipher& a, const Cipher& b) {
  check_owner(a);
  check_owner(b);
  return Cipher{torus_wrap(a.value - b.value), id_};
}

Cipher IdealBackend::add_plain(const Cipher& a, double torus_value) {
  check_owner(a);
  return Cipher{torus_wrap(a.value + torus_value), id_};
}

Cipher IdealBackend::bootstrap(const Cipher& c, double threshold,
                               double output_true, double output_false) {
  check_owner(c);
  const bool above = torus_signed(c.value) > torus_signed(torus_wrap(threshold));
  return Cipher{torus_wrap(above ? output_true : output_false), id_};
}

double IdealBackend::decrypt(const Cipher& c) {
  check_owner(c);
  return c.value;
}

// ---------------------------------------------------------------------------
// NoisyBackend.

NoisyBackend::NoisyBackend(double sigma_c, std::uint64_t seed)
    : id_(g_next_backend_id.fetch_add(1)),
      sigma_c_(sigma_c),
      rng_(make_stream(seed, {stream::kCircuit})) {
  if (sigma_c < 0.0) throw DomainError("sigma_c must be non-negative");
}

Cipher NoisyBackend::encrypt(double torus_value) {
  double v = torus_wrap(torus_value);
  if (sigma_c_ > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma_c_);
    v = torus_wrap(v + noise(rng_));
  }
  return Cipher{v, id_};
}

Cipher NoisyBackend::add(const Cipher& a, const Cipher& b) {
  check_owner(a);
  check_owner(b);
  return Cipher{torus_wrap(a.value + b.value), id_};
}

Cipher NoisyBackend::sub(const Cipher& a, const Cipher& b) {
  check_owner(a);
  check_owner(b);
  return Cipher{torus_wrap(a.value - b.value), id_};
}

Cipher NoisyBackend::add_plain(const Cipher& a, double torus_value) {
  check_owner(a);
  return Cipher{torus_wrap(a.value + torus_value), id_};
}

Cipher NoisyBackend::bootstrap(const Cipher& c, double threshold,
                               double output_true, double output_false) {
  check_owner(c);
  const bool above = torus_signed(c.value) > torus_signed(torus_wrap(threshold));
  return Cipher{torus_wrap(above ? output_true : output_false), id_};
}

double NoisyBackend::decrypt(const Cipher& c) {
  check_owner(c);
  return c.value;
}

// ---------------------------------------------------------------------------
// CountingBackend.

Cipher CountingBackend::encrypt(double torus_value) {
  ++encrypts_;
  return inner_.encrypt(torus_value);
}

Cipher CountingBackend::add(const Cipher& a, const Cipher& b) {
  ++additions_;
  return inner_.add(a, b);
}

Cipher CountingBackend::sub(const Cipher& a, const Cipher& b) {
  ++additions_;
  return inner_.sub(a, b);
}

Cipher CountingBackend::add_plain(const Cipher& a, double torus_value) {
  ++additions_;
  return inner_.add_plain(a, torus_value);
}

Cipher CountingBackend::bootstrap(const Cipher& c, double threshold,
                                  double output_true, double output_false) {
  ++bootstraps_;
  return inner_.bootstrap(c, threshold, output_true, output_false);
}

double CountingBackend::decrypt(const Cipher& c) { return inner_.decrypt(c); }

// ---------------------------------------------------------------------------
// Circuit.

void ArgmaxCircuitConfig::validate(int num_classes) const {
  if (num_classes < 2) throw DomainError("argmax circuit requires K >= 2");
  if (!(offset_a > 0.0) || n < 1) {
    throw DomainError("circuit config requires offset_a > 0 and n >= 1");
  }
  if (b_theta1 < 2 || b_theta2 < 2) {
    throw DomainError("bootstrap output moduli must be at least 2");
  }
  // Theta_k = sum of K-1 values 1/b_theta1 must stay in the positive half
  // of the torus for the sign convention to hold.
  if (2 * (num_classes - 1) >= b_theta1) {
    throw DomainError("b_theta1 too small for this class count");
  }
  if (sigma_c < 0.0) throw DomainError("sigma_c must be non-negative");
}

RescaleResult rescale(double value, const ArgmaxCircuitConfig& config) {
  RescaleResult r;
  r.overflow = value < -config.offset_a;
  r.torus = torus_wrap((value + config.offset_a) / config.b_input());
  return r;
}

Cipher compare(const Cipher& left, const Cipher& right, CipherBackend& backend,
               const ArgmaxCircuitConfig& config) {
  Cipher diff = backend.sub(left, right);
  return backend.bootstrap(diff, 0.0, 1.0 / config.b_theta1, 0.0);
}

std::vector<Cipher> argmax_circuit(const std::vector<Cipher>& ciphers,
                                   CipherBackend& backend,
                                   const ArgmaxCircuitConfig& config) {
  const int num_classes = static_cast<int>(ciphers.size());
  config.validate(num_classes);
  const double threshold = (num_classes - 1.5) / config.b_theta1;
  std::vector<Cipher> out;
  out.reserve(ciphers.size());
  for (int k = 0; k < num_classes; ++k) {
    Cipher theta_sum = backend.encrypt(0.0);
    for (int i = 0; i < num_classes; ++i) {
      if (i == k) continue;
      theta_sum = backend.add(theta_sum,
                              compare(ciphers[k], ciphers[i], backend, config));
    }
    out.push_back(backend.bootstrap(theta_sum, threshold,
                                    1.0 / config.b_theta2, 0.0));
  }
  return out;
}

OnehotResult decrypt_onehot(const std::vector<Cipher>& ciphers,
                            CipherBackend& backend,
                            const ArgmaxCircuitConfig& config) {
  const double cut = 0.5 / config.b_theta2;
  OnehotResult r;
  int nonzeros = 0;
  int first = -1;
  for (std::size_t k = 0; k < ciphers.size(); ++k) {
    if (backend.decrypt(ciphers[k]) > cut) {
      ++nonzeros;
      if (first < 0) first = static_cast<int>(k);
    }
  }
  r.index = first < 0 ? 0 : first;
  r.degenerate = nonzeros != 1;
  return r;
}

OnehotResult encrypted_argmax(const std::vector<double>& values,
                              CipherBackend& backend,
                              const ArgmaxCircuitConfig& config) {
  std::vector<Cipher> ciphers;
  ciphers.reserve(values.size());
  for (double v : values) {
    RescaleResult r = rescale(v, config);
    if (r.overflow) {
      log_warn("argmax input below -A; rescale wrapped around");
    }
    ciphers.push_back(backend.encrypt(r.torus));
  }
  std::vector<Cipher> onehot = argmax_circuit(ciphers, backend, config);
  return decrypt_onehot(onehot, backend, config);
}

double circuit_accuracy(const ArgmaxCircuitConfig& config, int num_classes,
                        double sigma_c, std::size_t trials,
                        std::uint64_t seed) {
  config.validate(num_classes);
  ArgmaxCircuitConfig cfg = config;
  cfg.sigma_c = sigma_c;
  Rng votes_rng = make_stream(seed, {stream::kOracle});
  std::uniform_int_distribution<int> pick(0, num_classes - 1);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<int> counts(num_classes, 0);
    for (int i = 0; i < cfg.n; ++i) ++counts[pick(votes_rng)];
    std::vector<double> values(counts.begin(), counts.end());
    NoisyBackend backend(sigma_c, seed + 0x9e3779b97f4a7c15ULL * (t + 1));
    OnehotResult r = encrypted_argmax(values, backend, cfg);
    if (!r.degenerate && r.index == clear_argmax(counts)) ++hits;
  }
  return static_cast<double>(hits) / trials;
}

double calibrate_sigma_c(const ArgmaxCircuitConfig& config, int num_classes,
                         double target_accuracy, std::size_t trials,
                         std::uint64_t seed) {
  if (!(target_accuracy > 0.0) || !(target_accuracy < 1.0)) {
    throw DomainError("target accuracy must lie in (0, 1)");
  }
  // Accuracy decreases in sigma_c under common random numbers. Bracket:
  // the gap unit on the torus is 1 / b_input, so a few gap units of noise
  // already destroys most comparisons.
  double lo = 0.0;
  double hi = 8.0 / config.b_input();
  while (circuit_accuracy(config, num_classes, hi, trials, seed) >
         target_accuracy) {
    hi *= 2.0;
    if (hi > 1.0) throw DomainError("sigma_c calibration failed to bracket");
  }
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double acc = circuit_accuracy(config, num_classes, mid, trials, seed);
    if (acc > target_accuracy) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-3 / config.b_input()) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace speed
