// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

// Shared by the unit tests and the acceptance binary: independent reference
// implementations, tiny fixtures, and a finite-difference gradient checker.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "skygan/colorcue/color.hpp"
#include "skygan/imagecore/image.hpp"
#include "skygan/nn/networks.hpp"
#include "skygan/nn/ops.hpp"
#include "skygan/nn/var.hpp"
#include "skygan/orchestrator/config.hpp"

namespace skygan::testing {

// ---- reference math ----

/// Inverse of the hexcone transform (hue in [0, 1)).
color::Triple hsv_to_rgb(const color::Triple& hsv);
/// Inverse of the un-normalized L*a*b* transform back to gamma-encoded sRGB.
color::Triple lab_to_rgb(const color::Triple& lab);

/// 10 log10(1 / mse), computed with a plain loop and no cap.
double naive_psnr(const image::ImageTensor& a, const image::ImageTensor& b);
/// Direct 2-D windowed SSIM: every valid 11x11 window, explicit Gaussian
/// weights, two-pass moments.
double naive_ssim(const image::ImageTensor& a, const image::ImageTensor& b);

/// The 5x5 diamond-square (n = 2) written out point by point.
std::vector<double> diamond_square_n2_trace(double roughness, std::uint64_t seed);

/// Bilinear sample of a row-major s x s grid at fractional (fy, fx).
double bilinear(const std::vector<double>& grid, int s, double fy, double fx);

// ---- fixtures ----

image::ImageTensor random_image(int h, int w, int c, std::uint64_t seed);
/// Smooth, colourful, deterministic "aerial" texture.
image::ImageTensor synthetic_scene(int h, int w, std::uint64_t seed);

/// Fresh, empty directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// 4 synthetic 64x64 sources tiled at 64 with levels {2, 4}: 8 pairs.
/// Returns the manifest path.
std::filesystem::path make_toy_dataset(const std::filesystem::path& dir, std::uint64_t seed = 7);

/// Small networks that train in minutes on one core.
train::RunConfig toy_config(const std::filesystem::path& manifest, const std::filesystem::path& ckpt_dir,
                            std::int64_t h2h_steps, std::int64_t hsc_steps, std::int64_t i2i_steps,
                            std::uint64_t seed = 3);

/// Depth-1 / width-4 networks for gradient checks.
train::RunConfig tiny_config();

/// Wraps a module and adds a constant to every output element.
template <typename T>
class Shifted final : public nn::Module<T> {
 public:
  Shifted(const nn::Module<T>& inner, double delta) : inner_(inner), delta_(delta) {}

  nn::Var<T> forward(const nn::Var<T>& x) const override {
    const auto y = inner_(x);
    return nn::add(y, nn::Var<T>(nn::Tensor<T>(y.shape(), static_cast<T>(delta_))));
  }
  nlohmann::json spec() const override { return {{"kind", "shifted"}}; }
  int in_channels() const override { return inner_.in_channels(); }
  int out_channels() const override { return inner_.out_channels(); }

 private:
  const nn::Module<T>& inner_;
  double delta_;
};

std::vector<unsigned char> read_bytes(const std::filesystem::path& p);

// ---- gradient checking ----

struct GradCheck {
  double max_rel_error = 0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // near a non-differentiable point
};

/// Compares reverse-mode gradients of `loss()` with respect to every entry of
/// `wrt` (up to `per_tensor` evenly spaced entries each) against central
/// differences with step `eps`. Relative error is |a - n| / max(|a|, |n|, floor).
/// Entries whose one-sided slopes disagree (the probe straddles a kink of
/// |.| or a leaky ReLU) are skipped and counted.
GradCheck check_gradients(const std::function<nn::Var<double>()>& loss, std::vector<nn::Var<double>> wrt,
                          std::size_t per_tensor = 24, double eps = 1e-6, double floor = 1e-6);

struct NamedCheck {
  std::string name;
  GradCheck result;
};

/// Every training loss (adversarial x/h, generator adversarial, cycle,
/// identity, domain classifier, catalyst L1, I2I generator and
/// discriminator) differentiated with respect to the parameters of the
/// networks it touches, on depth-1 / width-4 networks and 8x8 inputs at f64.
std::vector<NamedCheck> loss_gradient_checks(std::uint64_t seed = 1);

}  // namespace skygan::testing
