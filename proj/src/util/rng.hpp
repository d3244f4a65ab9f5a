// Copyright 2026 The Clavier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLAVIER_UTIL_RNG_HPP_
#define CLAVIER_UTIL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

namespace clavier {

// Deterministic random stream. Distribution transforms are implemented here
// (not via std:: distribution objects) so that sampled sequences are
// identical across standard libraries and releases.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Modulo bias is < 2^-53 for any n used here.
  int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<uint64_t>(n)); }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; the second deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so that log(u1) is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Full generator state as text, exact round-trip (for checkpoints).
  std::string state() const {
    std::ostringstream os;
    os << gen_ << ' ' << (has_spare_ ? 1 : 0);
    if (has_spare_) {
      os << ' ';
      uint64_t bits;
      static_assert(sizeof bits == sizeof spare_);
      std::memcpy(&bits, &spare_, sizeof bits);
      os << bits;
    }
    return os.str();
  }

  void set_state(const std::string& s) {
    std::istringstream is(s);
    int has = 0;
    is >> gen_ >> has;
    has_spare_ = has != 0;
    spare_ = 0.0;
    if (has_spare_) {
      uint64_t bits = 0;
      is >> bits;
      std::memcpy(&spare_, &bits, sizeof spare_);
    }
  }

  // Derive an independent stream seed from a root seed and a stream name.
  static uint64_t derive(uint64_t seed, std::string_view stream) {
    uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    for (char c : stream) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    uint64_t z = seed ^ h;  // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace clavier

#endif  // CLAVIER_UTIL_RNG_HPP_
