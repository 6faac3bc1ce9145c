// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "skygan/imagecore/image.hpp"

namespace skygan::eval {

inline constexpr double kPsnrCapDb = 120.0;
inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

struct MetricPair {
  double psnr = 0;
  double ssim = 0;
};

/// 10 log10(1 / MSE) over every channel, peak 1. MSE below 1e-12 reports
/// the 120 dB cap.
double psnr(const image::ImageTensor& a, const image::ImageTensor& b);

/// Mean SSIM over the valid region of an 11x11 Gaussian window (sigma 1.5),
/// computed per channel and averaged. Both sides must be at least 11.
double ssim(const image::ImageTensor& a, const image::ImageTensor& b);

MetricPair score(const image::ImageTensor& result, const image::ImageTensor& reference);

}  // namespace skygan::eval
