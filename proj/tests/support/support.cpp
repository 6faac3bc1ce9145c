// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>

#include <unistd.h>

#include "skygan/common/rng.hpp"
#include "skygan/h2h/h2h.hpp"
#include "skygan/hazegen/dataset.hpp"
#include "skygan/hsc/hsc.hpp"
#include "skygan/i2i/i2i.hpp"

namespace skygan::testing {
namespace fs = std::filesystem;

color::Triple hsv_to_rgb(const color::Triple& hsv) {
  const auto [h, s, v] = hsv;
  const double h6 = h * 6.0;
  const int sector = static_cast<int>(std::floor(h6)) % 6;
  const double f = h6 - std::floor(h6);
  const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  switch (sector) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

color::Triple lab_to_rgb(const color::Triple& lab) {
  // IEC 61966-2-1 primaries; white is the image of RGB (1, 1, 1).
  Eigen::Matrix3d m;
  m << 0.4124564, 0.3575761, 0.1804375,
       0.2126729, 0.7151522, 0.0721750,
       0.0193339, 0.1191920, 0.9503041;
  const Eigen::Vector3d white = m * Eigen::Vector3d::Ones();
  const double d = 6.0 / 29.0;
  auto finv = [d](double f) { return f > d ? f * f * f : 3 * d * d * (f - 4.0 / 29.0); };
  const double fy = (lab[0] + 16) / 116;
  const Eigen::Vector3d xyz(finv(fy + lab[1] / 500) * white[0], finv(fy) * white[1],
                            finv(fy - lab[2] / 200) * white[2]);
  const Eigen::Vector3d lin = m.inverse() * xyz;
  color::Triple out;
  for (int i = 0; i < 3; ++i) {
    const double c = lin[i];
    out[i] = c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1 / 2.4) - 0.055;
  }
  return out;
}

double naive_psnr(const image::ImageTensor& a, const image::ImageTensor& b) {
  long double acc = 0;
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      for (int c = 0; c < a.channels(); ++c) {
        const long double d = static_cast<long double>(a.at(y, x, c)) - b.at(y, x, c);
        acc += d * d;
      }
  const double mse = static_cast<double>(acc / a.size());
  return -10.0 * std::log10(mse);
}

double naive_ssim(const image::ImageTensor& a, const image::ImageTensor& b) {
  constexpr int win = 11;
  double w[win][win];
  double total = 0;
  for (int i = 0; i < win; ++i)
    for (int j = 0; j < win; ++j) {
      const double di = i - 5, dj = j - 5;
      w[i][j] = std::exp(-(di * di + dj * dj) / (2 * 1.5 * 1.5));
      total += w[i][j];
    }
  for (auto& row : w)
    for (double& v : row) v /= total;
  const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;

  double acc = 0;
  for (int c = 0; c < a.channels(); ++c) {
    double chan = 0;
    int windows = 0;
    for (int y = 0; y + win <= a.height(); ++y)
      for (int x = 0; x + win <= a.width(); ++x) {
        double mx = 0, my = 0;
        for (int i = 0; i < win; ++i)
          for (int j = 0; j < win; ++j) {
            mx += w[i][j] * a.at(y + i, x + j, c);
            my += w[i][j] * b.at(y + i, x + j, c);
          }
        double vx = 0, vy = 0, cov = 0;
        for (int i = 0; i < win; ++i)
          for (int j = 0; j < win; ++j) {
            const double dx = a.at(y + i, x + j, c) - mx, dy = b.at(y + i, x + j, c) - my;
            vx += w[i][j] * dx * dx;
            vy += w[i][j] * dy * dy;
            cov += w[i][j] * dx * dy;
          }
        chan += (2 * mx * my + c1) * (2 * cov + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
        ++windows;
      }
    acc += chan / windows;
  }
  return acc / a.channels();
}

std::vector<double> diamond_square_n2_trace(double r0, std::uint64_t seed) {
  SplitMix64 rng(seed);
  auto u = [&] { return rng.uniform01(); };
  double g[5][5] = {};
  g[0][0] = u();
  g[0][4] = u();
  g[4][0] = u();
  g[4][4] = u();

  // Pass 0: radius r0, step 4.
  g[2][2] = (g[0][0] + g[0][4] + g[4][0] + g[4][4]) / 4 + r0 * (2 * u() - 1);
  g[0][2] = (g[0][0] + g[0][4] + g[2][2]) / 3 + r0 * (2 * u() - 1);
  g[2][0] = (g[0][0] + g[2][2] + g[4][0]) / 3 + r0 * (2 * u() - 1);
  g[2][4] = (g[0][4] + g[2][2] + g[4][4]) / 3 + r0 * (2 * u() - 1);
  g[4][2] = (g[2][2] + g[4][0] + g[4][4]) / 3 + r0 * (2 * u() - 1);

  // Pass 1: radius r0 / 2, step 2. Diamonds first.
  const double r1 = r0 / 2;
  g[1][1] = (g[0][0] + g[0][2] + g[2][0] + g[2][2]) / 4 + r1 * (2 * u() - 1);
  g[1][3] = (g[0][2] + g[0][4] + g[2][2] + g[2][4]) / 4 + r1 * (2 * u() - 1);
  g[3][1] = (g[2][0] + g[2][2] + g[4][0] + g[4][2]) / 4 + r1 * (2 * u() - 1);
  g[3][3] = (g[2][2] + g[2][4] + g[4][2] + g[4][4]) / 4 + r1 * (2 * u() - 1);
  // Squares, row-major. Neighbour order: up, left, right, down.
  g[0][1] = (g[0][0] + g[0][2] + g[1][1]) / 3 + r1 * (2 * u() - 1);
  g[0][3] = (g[0][2] + g[0][4] + g[1][3]) / 3 + r1 * (2 * u() - 1);
  g[1][0] = (g[0][0] + g[1][1] + g[2][0]) / 3 + r1 * (2 * u() - 1);
  g[1][2] = (g[0][2] + g[1][1] + g[1][3] + g[2][2]) / 4 + r1 * (2 * u() - 1);
  g[1][4] = (g[0][4] + g[1][3] + g[2][4]) / 3 + r1 * (2 * u() - 1);
  g[2][1] = (g[1][1] + g[2][0] + g[2][2] + g[3][1]) / 4 + r1 * (2 * u() - 1);
  g[2][3] = (g[1][3] + g[2][2] + g[2][4] + g[3][3]) / 4 + r1 * (2 * u() - 1);
  g[3][0] = (g[2][0] + g[3][1] + g[4][0]) / 3 + r1 * (2 * u() - 1);
  g[3][2] = (g[2][2] + g[3][1] + g[3][3] + g[4][2]) / 4 + r1 * (2 * u() - 1);
  g[3][4] = (g[2][4] + g[3][3] + g[4][4]) / 3 + r1 * (2 * u() - 1);
  g[4][1] = (g[3][1] + g[4][0] + g[4][2]) / 3 + r1 * (2 * u() - 1);
  g[4][3] = (g[3][3] + g[4][2] + g[4][4]) / 3 + r1 * (2 * u() - 1);

  double lo = g[0][0], hi = g[0][0];
  for (auto& row : g)
    for (double v : row) lo = std::min(lo, v), hi = std::max(hi, v);
  std::vector<double> out;
  for (auto& row : g)
    for (double v : row) out.push_back(hi > lo ? (v - lo) / (hi - lo) : v);
  return out;
}

double bilinear(const std::vector<double>& grid, int s, double fy, double fx) {
  const int y0 = std::min(static_cast<int>(fy), s - 2), x0 = std::min(static_cast<int>(fx), s - 2);
  const double ty = fy - y0, tx = fx - x0;
  auto g = [&](int y, int x) { return grid[static_cast<std::size_t>(y) * s + x]; };
  return (1 - ty) * (1 - tx) * g(y0, x0) + (1 - ty) * tx * g(y0, x0 + 1) + ty * (1 - tx) * g(y0 + 1, x0) +
         ty * tx * g(y0 + 1, x0 + 1);
}

image::ImageTensor random_image(int h, int w, int c, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> v(static_cast<std::size_t>(h) * w * c);
  for (double& x : v) x = rng.uniform01();
  return image::ImageTensor(h, w, c, std::move(v));
}

image::ImageTensor synthetic_scene(int h, int w, std::uint64_t seed) {
  SplitMix64 rng(seed);
  struct Wave {
    double fy, fx, phase, amp;
  };
  std::vector<Wave> waves[3];
  for (auto& ch : waves)
    for (int i = 0; i < 3; ++i)
      ch.push_back({rng.uniform(0.02, 0.2), rng.uniform(0.02, 0.2), rng.uniform(0, 2 * std::numbers::pi),
                    rng.uniform(0.05, 0.15)});
  struct Block {
    int y0, x0, y1, x1;
    color::Triple rgb;
  };
  std::vector<Block> blocks;
  for (int i = 0; i < 6; ++i) {
    const int bh = 4 + static_cast<int>(rng.below(h / 4)), bw = 4 + static_cast<int>(rng.below(w / 4));
    const int y0 = static_cast<int>(rng.below(h - bh)), x0 = static_cast<int>(rng.below(w - bw));
    blocks.push_back({y0, x0, y0 + bh, x0 + bw, {rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)}});
  }
  const color::Triple base{rng.uniform(0.2, 0.5), rng.uniform(0.3, 0.6), rng.uniform(0.2, 0.5)};
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(h) * w * 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      color::Triple px = base;
      for (const Block& b : blocks)
        if (y >= b.y0 && y < b.y1 && x >= b.x0 && x < b.x1) px = b.rgb;
      for (int c = 0; c < 3; ++c) {
        double s = px[c];
        for (const Wave& wv : waves[c]) s += wv.amp * std::sin(wv.fy * y + wv.fx * x + wv.phase);
        v.push_back(std::clamp(s, 0.02, 0.98));
      }
    }
  return image::ImageTensor(h, w, 3, std::move(v));
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("skygan_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

fs::path make_toy_dataset(const fs::path& dir, std::uint64_t seed) {
  const fs::path src = dir / "src";
  fs::create_directories(src);
  for (int i = 0; i < 4; ++i) {
    image::save_image(synthetic_scene(64, 64, SeedHasher(seed).add("scene").add(i).value()),
                      src / ("s" + std::to_string(i) + ".png"));
  }
  haze::BuildOptions o;
  o.levels = {2, 4};
  o.tile = 64;
  o.stride = 64;
  o.seed = seed;
  o.name = "toy";
  haze::build_dataset(src, dir / "ds", o);
  return dir / "ds" / haze::kManifestFile;
}

train::RunConfig toy_config(const fs::path& manifest, const fs::path& ckpt_dir, std::int64_t h2h_steps,
                            std::int64_t hsc_steps, std::int64_t i2i_steps, std::uint64_t seed) {
  train::RunConfig c;
  c.dataset = manifest;
  c.checkpoint_dir = ckpt_dir;
  c.seed = seed;
  c.checkpoint_every = 50;
  c.h2h = {h2h_steps, 4, 2e-3};
  c.hsc = {hsc_steps, 4, 2e-3};
  c.i2i = {i2i_steps, 4, 2e-3};
  c.h2h_model.gx = {31, 31, 2, 8};
  c.h2h_model.gh = {31, 3, 2, 8};
  c.h2h_model.dx = {31, 2, 8};
  c.h2h_model.dh = {3, 2, 8};
  c.h2h_model.cls = {31, 2, 8};
  c.hsc_model = {31, 3, 2, 16};
  c.i2i_model.gz = {15, 3, 2, 8};
  c.i2i_model.dz = {18, 2, 8};
  return c;
}

train::RunConfig tiny_config() {
  train::RunConfig c;
  c.h2h_model.gx = {31, 31, 1, 4};
  c.h2h_model.gh = {31, 3, 1, 4};
  c.h2h_model.dx = {31, 1, 4};
  c.h2h_model.dh = {3, 1, 4};
  c.h2h_model.cls = {31, 1, 4};
  c.hsc_model = {31, 3, 1, 4};
  c.i2i_model.gz = {15, 3, 1, 4};
  c.i2i_model.dz = {18, 1, 4};
  return c;
}

std::vector<unsigned char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

GradCheck check_gradients(const std::function<nn::Var<double>()>& loss, std::vector<nn::Var<double>> wrt,
                          std::size_t per_tensor, double eps, double floor) {
  for (auto& v : wrt) {
    v.set_requires_grad(true);
    v.zero_grad();
  }
  loss().backward();
  std::vector<nn::Tensor<double>> analytic;
  for (auto& v : wrt) analytic.push_back(v.grad().empty() ? nn::Tensor<double>(v.shape()) : v.grad());

  GradCheck out;
  for (std::size_t t = 0; t < wrt.size(); ++t) {
    auto& values = wrt[t].mutable_value();
    const std::size_t n = values.numel();
    const std::size_t stride = std::max<std::size_t>(1, n / per_tensor);
    for (std::size_t i = 0; i < n; i += stride) {
      const double orig = values[i];
      const double f0 = loss().item();
      values[i] = orig + eps;
      const double fp = loss().item();
      values[i] = orig - eps;
      const double fm = loss().item();
      values[i] = orig;
      const double up = (fp - f0) / eps, down = (f0 - fm) / eps;
      if (std::abs(up - down) > 1e-4 && std::abs(up - down) > 0.1 * std::max(std::abs(up), std::abs(down))) {
        ++out.skipped;
        continue;
      }
      const double numeric = (fp - fm) / (2 * eps);
      const double a = analytic[t][i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      out.max_rel_error = std::max(out.max_rel_error, rel);
      ++out.checked;
    }
  }
  return out;
}

}  // namespace skygan::testing

namespace skygan::testing {
namespace {

using V = nn::Var<double>;

nn::Tensor<double> uniform_tensor(nn::Shape s, SplitMix64& rng) {
  nn::Tensor<double> t(s);
  for (auto& v : t.values()) v = rng.uniform(0.05, 0.95);
  return t;
}

std::vector<V> params_of(std::initializer_list<const nn::Module<double>*> modules) {
  std::vector<V> out;
  for (const auto* m : modules)
    for (const auto& p : m->parameters()) out.push_back(p.var);
  return out;
}

}  // namespace

std::vector<NamedCheck> loss_gradient_checks(std::uint64_t seed) {
  const train::RunConfig tiny = tiny_config();
  auto h = h2h::H2HBundle<double>::create(tiny.h2h_model, seed);
  auto r = hsc::HscBundle<double>::create(tiny.hsc_model, seed);
  auto z = i2i::I2IBundle<double>::create(tiny.i2i_model, seed);

  SplitMix64 rng(SeedHasher(seed).add("gradcheck").value());
  const nn::Shape rgb{2, 3, 8, 8}, cube{2, 31, 8, 8};
  const V x_sp = h2h::span(V(uniform_tensor(rgb, rng)));
  const V y(uniform_tensor(rgb, rng));
  const V hc(uniform_tensor(cube, rng));
  const V cond(uniform_tensor({2, 15, 8, 8}, rng));
  const auto& gx = *h.gx;
  const auto& gh = *h.gh;

  std::vector<NamedCheck> out;
  out.push_back({"adversarial_x", check_gradients(
                                      [&] { return h2h::loss_adversarial_x((*h.dx)(gx(x_sp)), (*h.dx)(hc)); },
                                      params_of({h.dx.get(), h.gx.get()}))});
  out.push_back({"adversarial_h", check_gradients(
                                      [&] { return h2h::loss_adversarial_h((*h.dh)(gh(hc)), (*h.dh)(h2h::anchor(x_sp))); },
                                      params_of({h.dh.get(), h.gh.get()}))});
  out.push_back({"generator_adversarial",
                 check_gradients([&] { return h2h::generator_adversarial((*h.dx)(gx(x_sp))); },
                                 params_of({h.gx.get(), h.dx.get()}))});
  out.push_back({"cycle", check_gradients([&] { return h2h::loss_cycle(x_sp, y, hc, gx, gh); },
                                          params_of({h.gx.get(), h.gh.get()}))});
  out.push_back({"identity", check_gradients([&] { return h2h::loss_identity(hc, gx, x_sp, gh); },
                                             params_of({h.gx.get(), h.gh.get()}))});
  out.push_back({"domain_classifier",
                 check_gradients(
                     [&] { return h2h::loss_domain_classifier(*h.cls, gx(x_sp), gx(h2h::span(y))).classifier_loss; },
                     params_of({h.cls.get(), h.gx.get()}))});
  out.push_back({"domain_classifier_penalty",
                 check_gradients(
                     [&] { return h2h::loss_domain_classifier(*h.cls, gx(x_sp), gx(h2h::span(y))).generator_penalty; },
                     params_of({h.gx.get()}))});
  out.push_back({"catalyst_l1", check_gradients([&] { return hsc::loss_hsc(y, (*r.net)(hc)); },
                                                params_of({r.net.get()}))});
  auto i2i_losses = [&] {
    const V fake = (*z.gz)(cond);
    return i2i::loss_i2i(fake, y, (*z.dz)(nn::concat_channels(cond, y)),
                         (*z.dz)(nn::concat_channels(cond, fake)), z.lambda_l1);
  };
  out.push_back({"i2i_generator", check_gradients([&] { return i2i_losses().g_loss; },
                                                  params_of({z.gz.get(), z.dz.get()}))});
  out.push_back({"i2i_discriminator", check_gradients([&] { return i2i_losses().d_loss; },
                                                      params_of({z.dz.get(), z.gz.get()}))});
  return out;
}

}  // namespace skygan::testing
