// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/evalkit/fixtures.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <iterator>
#include <string>

#include "skygan/colorcue/color.hpp"
#include "skygan/common/errors.hpp"
#include "skygan/common/rng.hpp"

namespace skygan::eval {
namespace {

using Spectrum = std::array<double, color::kSpectralBands>;

Spectrum random_spectrum(SplitMix64& rng) {
  Spectrum s{};
  double amp_sum = 0;
  for (int k = 0; k < kFixtureBumps; ++k) {
    const double amp = rng.uniform(0.2, 1.0);
    const double mu = rng.uniform(380.0, 720.0);
    const double sigma = rng.uniform(kFixtureSigmaMinNm, kFixtureSigmaMaxNm);
    amp_sum += amp;
    for (int b = 0; b < color::kSpectralBands; ++b) {
      const double d = color::band_wavelength(b) - mu;
      s[b] += amp * std::exp(-d * d / (2 * sigma * sigma));
    }
  }
  for (auto& v : s) v /= amp_sum;
  return s;
}

SpectralFixture make_one(int h, int w, SplitMix64& rng) {
  std::array<Spectrum, kFixtureRegions> spectra;
  std::array<std::array<double, 2>, kFixtureRegions> centres;
  for (int r = 0; r < kFixtureRegions; ++r) {
    spectra[r] = random_spectrum(rng);
    centres[r] = {rng.uniform01() * h, rng.uniform01() * w};
  }
  const double tau = 0.25 * std::max(h, w);
  const double fy = rng.uniform(0.5, 2.0), fx = rng.uniform(0.5, 2.0), phase = rng.uniform(0.0, 6.283185307179586);

  std::vector<double> cube(static_cast<std::size_t>(h) * w * color::kSpectralBands);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::array<double, kFixtureRegions> wt{};
      double wsum = 0;
      for (int r = 0; r < kFixtureRegions; ++r) {
        const double dy = y - centres[r][0], dx = x - centres[r][1];
        wt[r] = std::exp(-(dy * dy + dx * dx) / (2 * tau * tau)) + 1e-12;
        wsum += wt[r];
      }
      const double shade =
          0.75 + 0.25 * std::sin(phase + 6.283185307179586 * (fy * y / std::max(h, 1) + fx * x / std::max(w, 1)));
      double* px = cube.data() + (static_cast<std::size_t>(y) * w + x) * color::kSpectralBands;
      for (int b = 0; b < color::kSpectralBands; ++b) {
        double v = 0;
        for (int r = 0; r < kFixtureRegions; ++r) v += wt[r] / wsum * spectra[r][b];
        px[b] = std::clamp(shade * v, 0.0, 1.0);
      }
    }
  }
  SpectralFixture f;
  f.cube = image::ImageTensor(h, w, color::kSpectralBands, std::move(cube));
  f.rgb = color::anchor_rgb(f.cube);
  return f;
}

void put_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

}  // namespace

std::vector<SpectralFixture> make_spectral_fixtures(int count, int height, int width, std::uint64_t seed) {
  if (count < 1) throw ArgumentError("fixture count must be >= 1");
  if (height < 1 || width < 1) throw ArgumentError("fixture size must be positive");
  std::vector<SpectralFixture> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SplitMix64 rng(SeedHasher(seed).add("fixture").add(static_cast<std::uint64_t>(i)).value());
    out.push_back(make_one(height, width, rng));
  }
  return out;
}

void save_cube(const image::ImageTensor& cube, const std::filesystem::path& path) {
  if (cube.channels() != color::kSpectralBands) {
    throw ShapeError("cube must have 31 bands, got " + std::to_string(cube.channels()));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write cube " + path.string());
  out.write("HSC1", 4);
  put_u32(out, static_cast<std::uint32_t>(cube.height()));
  put_u32(out, static_cast<std::uint32_t>(cube.width()));
  put_u32(out, color::kSpectralBands);
  std::vector<unsigned char> buf;
  buf.reserve(cube.size() * 4);
  for (int b = 0; b < color::kSpectralBands; ++b) {
    for (int y = 0; y < cube.height(); ++y) {
      for (int x = 0; x < cube.width(); ++x) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(cube.at(y, x, b)));
        for (int k = 0; k < 4; ++k) buf.push_back(static_cast<unsigned char>(bits >> (8 * k)));
      }
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("cannot write cube " + path.string());
}

image::ImageTensor load_cube(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open cube " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 16 || std::string(buf.begin(), buf.begin() + 4) != "HSC1") {
    throw DecodeError("not an HSC1 cube: " + path.string());
  }
  const std::uint32_t h = get_u32(&buf[4]), w = get_u32(&buf[8]), bands = get_u32(&buf[12]);
  if (bands != static_cast<std::uint32_t>(color::kSpectralBands) || h == 0 || w == 0) {
    throw DecodeError("bad cube header in " + path.string());
  }
  const std::uint64_t n = static_cast<std::uint64_t>(h) * w * bands;
  if (buf.size() != 16 + 4 * n) throw DecodeError("cube payload size mismatch in " + path.string());
  std::vector<double> data(n);
  std::size_t i = 16;
  for (std::uint32_t b = 0; b < bands; ++b) {
    for (std::uint32_t y = 0; y < h; ++y) {
      for (std::uint32_t x = 0; x < w; ++x, i += 4) {
        const double v = std::bit_cast<float>(get_u32(&buf[i]));
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
          throw DecodeError("cube value outside [0, 1] in " + path.string());
        }
        data[(static_cast<std::size_t>(y) * w + x) * bands + b] = v;
      }
    }
  }
  return image::ImageTensor(static_cast<int>(h), static_cast<int>(w), static_cast<int>(bands), std::move(data));
}

std::vector<image::ImageTensor> load_cube_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("cube directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".hsc") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no .hsc cubes in " + dir.string());
  std::vector<image::ImageTensor> out;
  for (const auto& f : files) out.push_back(load_cube(f));
  return out;
}

}  // namespace skygan::eval
