// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "skygan/common/errors.hpp"
#include "skygan/common/rng.hpp"
#include "skygan/hazegen/haze.hpp"

namespace skygan::haze {

HazeField diamond_square(int n, double roughness, std::uint64_t seed,
                         std::optional<Corners> corners) {
  if (n < 1 || n > 12) {
    throw ArgumentError("diamond_square grid exponent must be in 1..12, got " + std::to_string(n));
  }
  if (!(roughness >= 0.0) || !std::isfinite(roughness)) {
    throw ArgumentError("roughness must be finite and non-negative");
  }
  const int side = (1 << n) + 1;
  HazeField field{n, side, std::vector<double>(static_cast<std::size_t>(side) * side, 0.0)};
  auto cell = [&](int y, int x) -> double& {
    return field.values[static_cast<std::size_t>(y) * side + x];
  };

  SplitMix64 rng(seed);
  const int last = side - 1;
  Corners c{};
  if (corners) {
    c = *corners;
  } else {
    for (double& v : c) v = rng.uniform01();
  }
  cell(0, 0) = c[0];
  cell(0, last) = c[1];
  cell(last, 0) = c[2];
  cell(last, last) = c[3];

  for (int k = 0; k < n; ++k) {
    const int step = last >> k;
    const int half = step / 2;
    const double r = roughness * std::ldexp(1.0, -k);

    // Diamond: centre of each square.
    for (int y = half; y < side; y += step) {
      for (int x = half; x < side; x += step) {
        const double mean = (cell(y - half, x - half) + cell(y - half, x + half) +
                             cell(y + half, x - half) + cell(y + half, x + half)) /
                            4.0;
        cell(y, x) = mean + r * (2.0 * rng.uniform01() - 1.0);
      }
    }
    // Square: edge midpoints, averaging the in-grid neighbours.
    for (int y = 0; y < side; y += half) {
      for (int x = (y / half) % 2 == 0 ? half : 0; x < side; x += step) {
        double sum = 0.0;
        int count = 0;
        if (y - half >= 0) sum += cell(y - half, x), ++count;
        if (x - half >= 0) sum += cell(y, x - half), ++count;
        if (x + half < side) sum += cell(y, x + half), ++count;
        if (y + half < side) sum += cell(y + half, x), ++count;
        cell(y, x) = sum / count + r * (2.0 * rng.uniform01() - 1.0);
      }
    }
  }

  const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
  const double mn = *lo;
  const double range = *hi - mn;
  if (range > 0.0) {
    for (double& v : field.values) v = (v - mn) / range;
  } else if (mn < 0.0 || mn > 1.0) {
    throw ArgumentError("constant haze field outside [0, 1]");
  }
  return field;
}

image::ImageTensor resample_field(const HazeField& field, int height, int width) {
  if (height < 1 || width < 1) throw ArgumentError("resample target must be at least 1x1");
  const int s = field.side;
  auto coord = [s](int i, int n) {
    return n == 1 ? 0.5 * (s - 1) : static_cast<double>(i) * (s - 1) / (n - 1);
  };
  std::vector<double> out(static_cast<std::size_t>(height) * width);
  for (int y = 0; y < height; ++y) {
    const double fy = coord(y, height);
    const int y0 = std::min(static_cast<int>(fy), s - 1);
    const int y1 = std::min(y0 + 1, s - 1);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = coord(x, width);
      const int x0 = std::min(static_cast<int>(fx), s - 1);
      const int x1 = std::min(x0 + 1, s - 1);
      const double tx = fx - x0;
      const double top = field.at(y0, x0) * (1.0 - tx) + field.at(y0, x1) * tx;
      const double bottom = field.at(y1, x0) * (1.0 - tx) + field.at(y1, x1) * tx;
      out[static_cast<std::size_t>(y) * width + x] = top * (1.0 - ty) + bottom * ty;
    }
  }
  return image::ImageTensor::clamped(height, width, 1, std::move(out));
}

const std::vector<HazeLevelParams>& default_level_table() {
  static const std::vector<HazeLevelParams> table = [] {
    const int exponents[5] = {7, 6, 5, 4, 3};
    const double densities[5] = {0.4, 0.55, 0.7, 0.85, 1.0};
    std::vector<HazeLevelParams> t;
    for (int i = 0; i < 5; ++i) {
      t.push_back({i + 1, exponents[i], 1.0, densities[i], {0.95, 0.95, 0.98}});
    }
    return t;
  }();
  return table;
}

const HazeLevelParams& default_level(int level) {
  if (level < 1 || level > 5) {
    throw ArgumentError("haze level must be in 1..5, got " + std::to_string(level));
  }
  return default_level_table()[level - 1];
}

image::ImageTensor composite_haze(const image::ImageTensor& clean, const image::ImageTensor& field,
                                  const HazeLevelParams& params) {
  if (clean.channels() != 3) throw ShapeError("composite_haze expects a 3-channel clean image");
  if (field.channels() != 1) throw ShapeError("composite_haze expects a 1-channel field");
  if (!clean.same_dims(field)) {
    throw ShapeError("composite_haze: field " + std::to_string(field.height()) + "x" +
                     std::to_string(field.width()) + " does not match image " +
                     std::to_string(clean.height()) + "x" + std::to_string(clean.width()));
  }
  std::vector<double> out(clean.size());
  const double d = params.density_scale;
  for (int y = 0; y < clean.height(); ++y) {
    for (int x = 0; x < clean.width(); ++x) {
      const double t = 1.0 - d * field.at(y, x, 0);
      for (int c = 0; c < 3; ++c) {
        out[clean.index(y, x, c)] = clean.at(y, x, c) * t + params.airlight[c] * (1.0 - t);
      }
    }
  }
  return image::ImageTensor::clamped(clean.height(), clean.width(), 3, std::move(out));
}

image::ImageTensor synthesize_hazy(const image::ImageTensor& clean, const HazeLevelParams& params,
                                   std::uint64_t seed) {
  const HazeField field = diamond_square(params.grid_exponent, params.roughness, seed);
  return composite_haze(clean, resample_field(field, clean.height(), clean.width()), params);
}

}  // namespace skygan::haze
