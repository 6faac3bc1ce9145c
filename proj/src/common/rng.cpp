// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/common/rng.hpp"

#include <cmath>
#include <numbers>

namespace skygan {

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double SplitMix64::normal(double mean, double stddev) {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

SplitMix64 SplitMix64::split() { return SplitMix64(mix64(next() ^ 0x6A09E667F3BCC909ULL)); }

SeedHasher& SeedHasher::add(std::uint64_t v) {
  h_ = mix64(h_ ^ (v + 0x9E3779B97F4A7C15ULL + (h_ << 6) + (h_ >> 2)));
  return *this;
}

SeedHasher& SeedHasher::add(std::string_view s) {
  // FNV-1a over the bytes, then folded in with the length.
  std::uint64_t f = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    f ^= c;
    f *= 0x100000001B3ULL;
  }
  add(f);
  return add(static_cast<std::uint64_t>(s.size()));
}

}  // namespace skygan
