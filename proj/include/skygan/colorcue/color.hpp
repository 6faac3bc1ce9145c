// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "skygan/imagecore/image.hpp"

namespace skygan::color {

using Triple = std::array<double, 3>;

inline constexpr int kMultiCueChannels = 12;
inline constexpr int kSpectralBands = 31;
inline constexpr double kFirstWavelengthNm = 400.0;
inline constexpr double kBandStepNm = 10.0;

/// Band indices holding the anchor primaries (650, 550, 450 nm).
inline constexpr int kRedAnchorBand = 25;
inline constexpr int kGreenAnchorBand = 15;
inline constexpr int kBlueAnchorBand = 5;

inline constexpr double band_wavelength(int band) {
  return kFirstWavelengthNm + kBandStepNm * band;
}

/// Hexcone HSV with hue scaled to [0, 1). Hue is 0 for achromatic input.
Triple rgb_to_hsv(const Triple& rgb);

/// Full-range BT.601 with Cb/Cr offset by 0.5.
Triple rgb_to_ycbcr(const Triple& rgb);

/// CIE L*a*b* from sRGB under D65, normalized to
/// (L / 100, (a + 128) / 255, (b + 128) / 255).
Triple rgb_to_lab(const Triple& rgb);

/// Un-normalized CIE L*a*b*.
Triple rgb_to_lab_raw(const Triple& rgb);

/// 12 channels: R,G,B, H,S,V, Y,Cb,Cr, L*,a*,b*.
image::ImageTensor assemble_multicue(const image::ImageTensor& rgb);

/// 31 x 3 row-stochastic matrix; row k gives (wR, wG, wB) for 400 + 10k nm.
/// Pure blue up to 450 nm, blue->green cross-fade to 550, green->red to 650,
/// pure red beyond.
using BandWeights = std::array<Triple, kSpectralBands>;
const BandWeights& band_weights();

/// Per-pixel band_k = w_k . (R, G, B).
image::ImageTensor span_channels(const image::ImageTensor& rgb);

/// (R, G, B) read back from the anchor bands of a 31-band image.
image::ImageTensor anchor_rgb(const image::ImageTensor& cube);

}  // namespace skygan::color
