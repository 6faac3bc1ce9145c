// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/evalkit/metrics.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "skygan/common/errors.hpp"

namespace skygan::eval {
namespace {

void require_same(const image::ImageTensor& a, const image::ImageTensor& b, const char* who) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(who) + ": images differ in shape (" + std::to_string(a.height()) + "x" +
                     std::to_string(a.width()) + "x" + std::to_string(a.channels()) + " vs " +
                     std::to_string(b.height()) + "x" + std::to_string(b.width()) + "x" +
                     std::to_string(b.channels()) + ")");
  }
}

const std::array<double, kSsimWindow>& gaussian_taps() {
  static const std::array<double, kSsimWindow> taps = [] {
    std::array<double, kSsimWindow> g{};
    double sum = 0;
    for (int i = 0; i < kSsimWindow; ++i) {
      const double d = i - kSsimWindow / 2;
      g[i] = std::exp(-d * d / (2 * kSsimSigma * kSsimSigma));
      sum += g[i];
    }
    for (auto& v : g) v /= sum;
    return g;
  }();
  return taps;
}

// Separable valid-mode filter of one H x W plane.
std::vector<double> filter_valid(const std::vector<double>& src, int h, int w) {
  const auto& g = gaussian_taps();
  const int oh = h - kSsimWindow + 1, ow = w - kSsimWindow + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0;
      for (int k = 0; k < kSsimWindow; ++k) s += g[k] * src[static_cast<std::size_t>(y) * w + x + k];
      rows[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0;
      for (int k = 0; k < kSsimWindow; ++k) s += g[k] * rows[static_cast<std::size_t>(y + k) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

}  // namespace

double psnr(const image::ImageTensor& a, const image::ImageTensor& b) {
  require_same(a, b, "psnr");
  if (a.empty()) throw ShapeError("psnr: empty images");
  double acc = 0;
  const auto da = a.data(), db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = da[i] - db[i];
    acc += d * d;
  }
  const double mse = acc / static_cast<double>(da.size());
  if (mse < 1e-12) return kPsnrCapDb;
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const image::ImageTensor& a, const image::ImageTensor& b) {
  require_same(a, b, "ssim");
  const int h = a.height(), w = a.width(), c = a.channels();
  if (h < kSsimWindow || w < kSsimWindow) {
    throw ShapeError("ssim: images must be at least 11x11, got " + std::to_string(h) + "x" + std::to_string(w));
  }
  const double c1 = (kSsimK1 * 1.0) * (kSsimK1 * 1.0);
  const double c2 = (kSsimK2 * 1.0) * (kSsimK2 * 1.0);
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  double total = 0;
  std::vector<double> x(plane), y(plane), xx(plane), yy(plane), xy(plane);
  for (int k = 0; k < c; ++k) {
    for (std::size_t i = 0; i < plane; ++i) {
      x[i] = a.data()[i * c + k];
      y[i] = b.data()[i * c + k];
      xx[i] = x[i] * x[i];
      yy[i] = y[i] * y[i];
      xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, h, w), my = filter_valid(y, h, w);
    const auto sxx = filter_valid(xx, h, w), syy = filter_valid(yy, h, w), sxy = filter_valid(xy, h, w);
    double sum = 0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
      const double vx = sxx[i] - mx[i] * mx[i];
      const double vy = syy[i] - my[i] * my[i];
      const double cov = sxy[i] - mx[i] * my[i];
      sum += ((2 * mx[i] * my[i] + c1) * (2 * cov + c2)) /
             ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    total += sum / static_cast<double>(mx.size());
  }
  return total / c;
}

MetricPair score(const image::ImageTensor& result, const image::ImageTensor& reference) {
  return {psnr(result, reference), ssim(result, reference)};
}

}  // namespace skygan::eval
