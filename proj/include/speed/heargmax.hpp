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
// Non-interactive encrypted argmax circuit over a pluggable scalar backend:
// offset and rescale into the torus, pairwise sign-bootstrap comparisons,
// per-class accumulation and a final threshold bootstrap. Real lattice
// cryptography is out of scope; the backends model exact and noisy
// evaluation of the same circuit.
#ifndef SPEED_HEARGMAX_HPP
#define SPEED_HEARGMAX_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "speed/common.hpp"
#include "speed/rng.hpp"

namespace speed {

// Torus scalar: value lives in [0, 1). owner ties a cipher to the backend
// instance that produced it.
struct Cipher {
  double value = 0.0;
  int owner = 0;
};

// Reads a torus value as a signed real in [-1/2, 1/2).
inline double torus_signed(double v) { return v < 0.5 ? v : v - 1.0; }

inline double torus_wrap(double v) {
  double w = v - static_cast<long long>(v);
  return w < 0.0 ? w + 1.0 : w;
}

// Scalar homomorphic interface. bootstrap applies the step function
// g_{t,a,b}: output_true if the signed argument exceeds the signed
// threshold strictly, output_false otherwise, producing a fresh (exact)
// cipher either way.
class CipherBackend {
 public:
  virtual ~CipherBackend() = default;

  virtual Cipher encrypt(double torus_value) = 0;
  virtual Cipher add(const Cipher& a, const Cipher& b) = 0;
  virtual Cipher sub(const Cipher& a, const Cipher& b) = 0;
  virtual Cipher add_plain(const Cipher& a, double torus_value) = 0;
  virtual Cipher bootstrap(const Cipher& c, double threshold,
                           double output_true, double output_false) = 0;
  virtual double decrypt(const Cipher& c) = 0;
  virtual int id() const = 0;

 protected:
  void check_owner(const Cipher& c) const;
};

// decrypt(encrypt(v)) == v and bootstrap decides on the exact value.
class IdealBackend : public CipherBackend {
 public:
  IdealBackend();

  Cipher encrypt(double torus_value) override;
  Cipher add(const Cipher& a, const Cipher& b) override;
  Cipher sub(const Cipher& a, const Cipher& b) override;
  Cipher add_plain(const Cipher& a, double torus_value) override;
  Cipher bootstrap(const Cipher& c, double threshold, double output_true,
                   double output_false) override;
  double decrypt(const Cipher& c) override;
  int id() const override { return id_; }

 private:
  int id_;
};

// encrypt perturbs the stored value with Gaussian noise of std sigma_c;
// additions are exact on the perturbed values, bootstrap decides on the
// perturbed value and emits a clean output. A comparison of two fresh
// encryptions therefore flips with probability Phi(-|gap| / (sqrt(2)
// sigma_c)).
class NoisyBackend : public CipherBackend {
 public:
  NoisyBackend(double sigma_c, std::uint64_t seed);

  Cipher encrypt(double torus_value) override;
  Cipher add(const Cipher& a, const Cipher& b) override;
  Cipher sub(const Cipher& a, const Cipher& b) override;
  Cipher add_plain(const Cipher& a, double torus_value) override;
  Cipher bootstrap(const Cipher& c, double threshold, double output_true,
                   double output_false) override;
  double decrypt(const Cipher& c) override;
  int id() const override { return id_; }

 private:
  int id_;
  double sigma_c_;
  Rng rng_;
};

// Pass-through decorator tallying operation counts; shares the wrapped
// backend's id so ciphers flow freely across the boundary.
class CountingBackend : public CipherBackend {
 public:
  explicit CountingBackend(CipherBackend& inner) : inner_(inner) {}

  Cipher encrypt(double torus_value) override;
  Cipher add(const Cipher& a, const Cipher& b) override;
  Cipher sub(const Cipher& a, const Cipher& b) override;
  Cipher add_plain(const Cipher& a, double torus_value) override;
  Cipher bootstrap(const Cipher& c, double threshold, double output_true,
                   double output_false) override;
  double decrypt(const Cipher& c) override;
  int id() const override { return inner_.id(); }

  long bootstraps() const { return bootstraps_; }
  long encrypts() const { return encrypts_; }
  long additions() const { return additions_; }

 private:
  CipherBackend& inner_;
  long bootstraps_ = 0;
  long encrypts_ = 0;
  long additions_ = 0;
};

struct ArgmaxCircuitConfig {
  double offset_a = 900.0;  // added so noisy counts are positive w.h.p.
  int n = 250;              // teacher count, sets the input modulus
  int b_theta1 = 36;        // comparison output modulus
  int b_theta2 = 4;         // final output modulus
  double sigma_c = 0.0;     // comparison noise std (noisy backend)

  // Input modulus 2 (n + 2 A): honest values rescale into [0, 1/2).
  double b_input() const { return 2.0 * (n + 2.0 * offset_a); }
  void validate(int num_classes) const;
};

struct RescaleResult {
  double torus = 0.0;
  bool overflow = false;  // value fell below -A
};

// (value + A) / b_input, reduced mod 1.
RescaleResult rescale(double value, const ArgmaxCircuitConfig& config);

// theta_{k,k'}: sign bootstrap of the difference; decrypts to 1/b_theta1
// iff left > right strictly, 0 otherwise (ideal backend).
Cipher compare(const Cipher& left, const Cipher& right, CipherBackend& backend,
               const ArgmaxCircuitConfig& config);

// Full circuit: K(K-1) comparison bootstraps, then per class a threshold
// bootstrap of Theta_k at (K - 3/2) / b_theta1. Output decrypts to a
// one-hot vector scaled by 1/b_theta2.
std::vector<Cipher> argmax_circuit(const std::vector<Cipher>& ciphers,
                                   CipherBackend& backend,
                                   const ArgmaxCircuitConfig& config);

struct OnehotResult {
  int index = 0;
  bool degenerate = false;  // all-zero or multiple nonzeros
};

// Index of the unique nonzero coordinate; lowest nonzero (or 0 if all are
// zero) with the degenerate flag set otherwise.
OnehotResult decrypt_onehot(const std::vector<Cipher>& ciphers,
                            CipherBackend& backend,
                            const ArgmaxCircuitConfig& config);

// Convenience wrapper: rescale + encrypt raw count values, run the
// circuit, decrypt.
OnehotResult encrypted_argmax(const std::vector<double>& values,
                              CipherBackend& backend,
                              const ArgmaxCircuitConfig& config);

// Bisects sigma_c so that circuit agreement with the clear argmax over
// uniform-random vote histograms (n teachers, num_classes classes) hits
// target_accuracy. Deterministic given seed.
double calibrate_sigma_c(const ArgmaxCircuitConfig& config, int num_classes,
                         double target_accuracy, std::size_t trials,
                         std::uint64_t seed);

// Agreement rate of the noisy-backend circuit with the clear argmax over
// uniform-random vote histograms, at a given sigma_c.
double circuit_accuracy(const ArgmaxCircuitConfig& config, int num_classes,
                        double sigma_c, std::size_t trials,
                        std::uint64_t seed);

}  // namespace speed

#endif  // SPEED_HEARGMAX_HPP
