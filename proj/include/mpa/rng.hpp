// SPDX-License-Identifier: Apache-2.0
//
// Counter-style splitmix64 generator.  State advances by a fixed increment
// and the output is a bijective mix of the state, so any (seed, stream)
// pair reproduces bit-identically regardless of what other streams do;
// parallel workers draw from separate substreams via substream().
#pragma once

#include <complex>
#include <cstdint>
#include <utility>

namespace mpa {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]: 53-bit mantissa, never 0 so logs are safe.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  // Standard normal pair (Box-Muller).
  std::pair<double, double> gaussian_pair() {
    double r = std::sqrt(-2.0 * std::log(uniform()));
    double t = 2.0 * M_PI * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

  // Circularly-symmetric complex Gaussian, unit total variance
  // (real and imaginary parts are N(0, 1/2); |z|^2 is Exp(1)).
  std::complex<double> cgauss() {
    double r = std::sqrt(-std::log(uniform()));
    double t = 2.0 * M_PI * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

  double exponential() { return -std::log(uniform()); }

 private:
  std::uint64_t state_;
};

// Substream for a parallel worker / grid point: seed xor a mixed index.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

}  // namespace mpa
