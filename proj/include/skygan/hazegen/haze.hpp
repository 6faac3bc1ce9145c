// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "skygan/colorcue/color.hpp"
#include "skygan/imagecore/image.hpp"

namespace skygan::haze {

/// Square (2^n + 1)^2 plasma field, row-major, values in [0, 1].
struct HazeField {
  int exponent = 0;
  int side = 1;
  std::vector<double> values;

  double at(int y, int x) const { return values[static_cast<std::size_t>(y) * side + x]; }
};

/// Corner order is top-left, top-right, bottom-left, bottom-right.
using Corners = std::array<double, 4>;

/// Diamond-square midpoint displacement on a (2^n + 1)^2 grid.
///
/// RNG stream order (SplitMix64 seeded with `seed`):
///   1. four corner draws in Corners order, skipped when `corners` is given;
///   2. for pass k = 0, 1, ..., n-1 with step = 2^(n-k):
///      diamond points (square centres) in row-major order, then
///      square points (edge midpoints) in row-major order,
///      one draw each.
/// Each point gets the mean of its in-grid neighbours plus r_k * (2u - 1),
/// r_k = roughness * 2^-k. The finished field is min-max normalized to [0, 1]
/// unless it is constant, in which case it is returned unchanged.
HazeField diamond_square(int n, double roughness, std::uint64_t seed,
                         std::optional<Corners> corners = std::nullopt);

/// Bilinear resampling with corner-aligned sample grids; 1-channel result.
image::ImageTensor resample_field(const HazeField& field, int height, int width);

/// Per-level synthesis parameters.
struct HazeLevelParams {
  int level = 1;
  int grid_exponent = 7;
  double roughness = 1.0;
  double density_scale = 0.4;
  color::Triple airlight{0.95, 0.95, 0.98};
};

/// Levels 1..5, in order.
const std::vector<HazeLevelParams>& default_level_table();
const HazeLevelParams& default_level(int level);

/// t = 1 - d * field; I = J * t + A * (1 - t), clamped to [0, 1].
image::ImageTensor composite_haze(const image::ImageTensor& clean, const image::ImageTensor& field,
                                  const HazeLevelParams& params);

/// diamond_square -> resample to the image size -> composite.
image::ImageTensor synthesize_hazy(const image::ImageTensor& clean, const HazeLevelParams& params,
                                   std::uint64_t seed);

}  // namespace skygan::haze
