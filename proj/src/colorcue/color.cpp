// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/colorcue/color.hpp"

#include <algorithm>
#include <cmath>

#include "skygan/common/errors.hpp"

namespace skygan::color {
namespace {

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

// sRGB -> XYZ (D65). The white point is taken as the row sums so that
// RGB white lands exactly on L* = 100, a* = b* = 0.
constexpr double kM[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kWhite[3] = {
    kM[0][0] + kM[0][1] + kM[0][2],
    kM[1][0] + kM[1][1] + kM[1][2],
    kM[2][0] + kM[2][1] + kM[2][2],
};

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

void require_channels(const image::ImageTensor& img, int channels, const char* op) {
  if (img.channels() != channels) {
    throw ShapeError(std::string(op) + " expects " + std::to_string(channels) +
                     " channels, got " + std::to_string(img.channels()));
  }
}

BandWeights make_band_weights() {
  BandWeights w{};
  for (int k = 0; k < kSpectralBands; ++k) {
    const double nm = band_wavelength(k);
    if (nm <= 450.0) {
      w[k] = {0.0, 0.0, 1.0};
    } else if (nm < 550.0) {
      const double t = (nm - 450.0) / 100.0;
      w[k] = {0.0, t, 1.0 - t};
    } else if (nm < 650.0) {
      const double t = (nm - 550.0) / 100.0;
      w[k] = {t, 1.0 - t, 0.0};
    } else {
      w[k] = {1.0, 0.0, 0.0};
    }
  }
  return w;
}

}  // namespace

Triple rgb_to_hsv(const Triple& rgb) {
  const auto [r, g, b] = rgb;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  const double s = mx > 0.0 ? delta / mx : 0.0;
  double h = 0.0;
  if (delta > 0.0) {
    if (mx == r) {
      h = (g - b) / delta;
      if (h < 0.0) h += 6.0;
    } else if (mx == g) {
      h = (b - r) / delta + 2.0;
    } else {
      h = (r - g) / delta + 4.0;
    }
    h /= 6.0;
    if (h >= 1.0) h -= 1.0;
  }
  return {h, s, mx};
}

Triple rgb_to_ycbcr(const Triple& rgb) {
  const auto [r, g, b] = rgb;
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return {y, (b - y) / 1.772 + 0.5, (r - y) / 1.402 + 0.5};
}

Triple rgb_to_lab_raw(const Triple& rgb) {
  const double lin[3] = {srgb_to_linear(rgb[0]), srgb_to_linear(rgb[1]), srgb_to_linear(rgb[2])};
  double f[3];
  for (int i = 0; i < 3; ++i) {
    const double v = kM[i][0] * lin[0] + kM[i][1] * lin[1] + kM[i][2] * lin[2];
    f[i] = lab_f(v / kWhite[i]);
  }
  return {116.0 * f[1] - 16.0, 500.0 * (f[0] - f[1]), 200.0 * (f[1] - f[2])};
}

Triple rgb_to_lab(const Triple& rgb) {
  const auto [l, a, b] = rgb_to_lab_raw(rgb);
  return {std::clamp(l / 100.0, 0.0, 1.0), std::clamp((a + 128.0) / 255.0, 0.0, 1.0),
          std::clamp((b + 128.0) / 255.0, 0.0, 1.0)};
}

image::ImageTensor assemble_multicue(const image::ImageTensor& rgb) {
  require_channels(rgb, 3, "assemble_multicue");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(rgb.height()) * rgb.width() * kMultiCueChannels);
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      auto px = rgb.pixel(y, x);
      const Triple p{px[0], px[1], px[2]};
      out.insert(out.end(), p.begin(), p.end());
      for (const Triple& t : {rgb_to_hsv(p), rgb_to_ycbcr(p), rgb_to_lab(p)}) {
        for (double v : t) out.push_back(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return image::ImageTensor(rgb.height(), rgb.width(), kMultiCueChannels, std::move(out));
}

const BandWeights& band_weights() {
  static const BandWeights weights = make_band_weights();
  return weights;
}

image::ImageTensor span_channels(const image::ImageTensor& rgb) {
  require_channels(rgb, 3, "span_channels");
  const BandWeights& w = band_weights();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(rgb.height()) * rgb.width() * kSpectralBands);
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      auto px = rgb.pixel(y, x);
      for (const Triple& row : w) {
        out.push_back(row[0] * px[0] + row[1] * px[1] + row[2] * px[2]);
      }
    }
  }
  // Convex weights keep values in [min, max] of the pixel up to rounding.
  return image::ImageTensor::clamped(rgb.height(), rgb.width(), kSpectralBands, std::move(out));
}

image::ImageTensor anchor_rgb(const image::ImageTensor& cube) {
  require_channels(cube, kSpectralBands, "anchor_rgb");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cube.height()) * cube.width() * 3);
  for (int y = 0; y < cube.height(); ++y) {
    for (int x = 0; x < cube.width(); ++x) {
      auto px = cube.pixel(y, x);
      out.push_back(px[kRedAnchorBand]);
      out.push_back(px[kGreenAnchorBand]);
      out.push_back(px[kBlueAnchorBand]);
    }
  }
  return image::ImageTensor(cube.height(), cube.width(), 3, std::move(out));
}

}  // namespace skygan::color
