// Copyright (c) the LogoForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOGOFORGE_RANDOM_HPP
#define LOGOFORGE_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace logoforge {

/// splitmix64 finalizer. Stable across platforms and toolchains; every
/// random draw in the project bottoms out here so outputs never depend
/// on the standard library's distribution internals.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Folds an ordered tuple of 64-bit parts into one seed:
///   s0 = 0x6c6f676f666f7267 ("logoforg"), s_{i+1} = mix64(s_i ^ mix64(p_i)).
/// Pipeline streams are derived as
///   derive_seed({global_seed, image_id, pass_index, stage_index}),
/// which other implementations can reproduce structurally.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = 0x6c6f676f666f7267ull;
  for (std::uint64_t p : parts) s = mix64(s ^ mix64(p));
  return s;
}

/// Deterministic random stream (splitmix64 sequence).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 mantissa bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
    const std::uint64_t threshold = (0 - span) % span;
    std::uint64_t u;
    do {
      u = next_u64();
    } while (u < threshold);
    return lo + static_cast<std::int64_t>(u % span);
  }

  /// Box-Muller; consumes exactly two uniform draws per sample.
  double normal(double mean, double stddev) {
    double u1;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace logoforge

#endif  // LOGOFORGE_RANDOM_HPP
