// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace skygan {

/// SplitMix64: a 64-bit counter-based generator. State is one word, so it
/// checkpoints trivially and child streams can be split off deterministically.
///
/// Draw conventions are fixed here rather than delegated to <random>
/// distributions, whose outputs are implementation-defined:
///   uniform01()  = (next() >> 11) * 2^-53        in [0, 1)
///   uniform(a,b) = a + (b - a) * uniform01()
///   normal()     = Box-Muller cosine branch on two uniform01() draws
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next(); }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal(double mean = 0.0, double stddev = 1.0);

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Independent child stream; advances this stream by one draw.
  SplitMix64 split();

  std::uint64_t state() const { return state_; }
  void set_state(std::uint64_t s) { state_ = s; }

 private:
  std::uint64_t state_;
};

/// Finalizer from SplitMix64, usable as a standalone 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive seed derivation. Stable across platforms and runs.
class SeedHasher {
 public:
  explicit SeedHasher(std::uint64_t base) : h_(mix64(base ^ 0xA0761D6478BD642FULL)) {}

  SeedHasher& add(std::uint64_t v);
  SeedHasher& add(std::string_view s);
  std::uint64_t value() const { return mix64(h_); }

 private:
  std::uint64_t h_;
};

}  // namespace skygan
