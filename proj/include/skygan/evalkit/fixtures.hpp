// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "skygan/imagecore/image.hpp"

namespace skygan::eval {

/// Synthetic stand-in for measured spectral data.
struct SpectralFixture {
  image::ImageTensor cube;  // H x W x 31
  image::ImageTensor rgb;   // anchor bands of cube
};

inline constexpr int kFixtureRegions = 4;
inline constexpr int kFixtureBumps = 3;
inline constexpr double kFixtureSigmaMinNm = 40.0;
inline constexpr double kFixtureSigmaMaxNm = 100.0;
/// Largest possible |band_{k+1} - band_k|: a unit Gaussian's slope never
/// exceeds 1 / (sigma sqrt(e)), times the 10 nm band step.
inline const double kFixtureSmoothness = 10.0 / (kFixtureSigmaMinNm * std::sqrt(std::exp(1.0)));

/// Each fixture: kFixtureRegions spectra, each a normalized sum of
/// kFixtureBumps Gaussian bumps over wavelength; pixels blend the region
/// spectra with soft distance weights around random centres and take a
/// smooth shading factor in [0.5, 1]. Deterministic per (seed, index).
std::vector<SpectralFixture> make_spectral_fixtures(int count, int height, int width, std::uint64_t seed);

/// "HSC1", u32 H, u32 W, u32 31, then H*W*31 little-endian f32, band-major.
void save_cube(const image::ImageTensor& cube, const std::filesystem::path& path);
image::ImageTensor load_cube(const std::filesystem::path& path);

/// Every *.hsc file in `dir`, sorted by name.
std::vector<image::ImageTensor> load_cube_dir(const std::filesystem::path& dir);

}  // namespace skygan::eval
