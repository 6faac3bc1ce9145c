// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "skygan/colorcue/color.hpp"
#include "skygan/common/errors.hpp"
#include "skygan/common/rng.hpp"
#include "skygan/i2i/i2i.hpp"
#include "support.hpp"

using namespace skygan;
using nn::Shape;
using nn::Tensor;
using V = nn::Var<double>;

namespace {

Tensor<double> uniform(Shape s, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  SplitMix64 rng(seed);
  Tensor<double> t(s);
  for (auto& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

i2i::Pipeline<float> small_pipeline(std::uint64_t seed) {
  const auto c = testing::toy_config({}, {}, 1, 1, 1);
  return {h2h::H2HBundle<float>::create(c.h2h_model, seed), hsc::HscBundle<float>::create(c.hsc_model, seed),
          i2i::I2IBundle<float>::create(c.i2i_model, seed)};
}

}  // namespace

TEST_SUITE("i2i") {

TEST_CASE("conditioning layout and ablations") {
  const auto x = testing::random_image(4, 5, 3, 1);
  const auto cat = testing::random_image(4, 5, 3, 2);
  const auto full = i2i::assemble_i2i_input(x, cat);
  REQUIRE(full.channels() == 15);
  const auto mc = color::assemble_multicue(x);
  for (int c = 0; c < 12; ++c) CHECK(full.at(2, 3, c) == mc.at(2, 3, c));
  for (int c = 0; c < 3; ++c) CHECK(full.at(2, 3, 12 + c) == cat.at(2, 3, c));

  const auto no_mc = i2i::assemble_i2i_input(x, cat, false, true);
  const auto no_cat = i2i::assemble_i2i_input(x, cat, true, false);
  for (int y = 0; y < 4; ++y)
    for (int xx = 0; xx < 5; ++xx) {
      for (int c = 0; c < 3; ++c) CHECK(no_mc.at(y, xx, c) == x.at(y, xx, c));
      for (int c = 3; c < 12; ++c) CHECK(no_mc.at(y, xx, c) == 0.0);
      for (int c = 12; c < 15; ++c) {
        CHECK(no_cat.at(y, xx, c) == 0.0);
        CHECK(no_mc.at(y, xx, c) == cat.at(y, xx, c - 12));
      }
    }
  CHECK_THROWS_AS(i2i::assemble_i2i_input(x, testing::random_image(4, 6, 3, 3)), ShapeError);
}

TEST_CASE("losses against elementwise oracles") {
  const auto fake = uniform({2, 3, 4, 4}, 1), y = uniform({2, 3, 4, 4}, 2);
  const auto rl = uniform({2, 1, 2, 2}, 3, -3, 3), fl = uniform({2, 1, 2, 2}, 4, -3, 3);
  const auto l = i2i::loss_i2i(V(fake), V(y), V(rl), V(fl), 100.0);
  auto sig = [](double v) { return 1 / (1 + std::exp(-v)); };
  double l1 = 0, g = 0, dr = 0, df = 0;
  for (std::size_t i = 0; i < fake.numel(); ++i) l1 += std::abs(fake[i] - y[i]) / fake.numel();
  for (std::size_t i = 0; i < fl.numel(); ++i) {
    g -= std::log(sig(fl[i])) / fl.numel();
    df -= std::log(1 - sig(fl[i])) / fl.numel();
    dr -= std::log(sig(rl[i])) / rl.numel();
  }
  CHECK(l.l1.item() == doctest::Approx(l1).epsilon(1e-12));
  CHECK(l.g_loss.item() == doctest::Approx(g + 100 * l1).epsilon(1e-12));
  CHECK(l.d_loss.item() == doctest::Approx(0.5 * (dr + df)).epsilon(1e-12));
  CHECK(l.l1.item() >= 0);
}

TEST_CASE("reflect padding matches a mirror-index oracle") {
  const auto img = testing::random_image(5, 4, 2, 4);
  auto mirror = [](int i, int n) {
    // Reflect without repeating the edge, bouncing for long pads.
    const int period = 2 * (n - 1);
    i %= period;
    return i < n ? i : period - i;
  };
  for (int pb : {0, 1, 3, 7})
    for (int pr : {0, 2, 5}) {
      const auto p = i2i::reflect_pad(img, pb, pr);
      REQUIRE(p.height() == 5 + pb);
      REQUIRE(p.width() == 4 + pr);
      for (int y = 0; y < p.height(); ++y)
        for (int x = 0; x < p.width(); ++x)
          for (int c = 0; c < 2; ++c) REQUIRE(p.at(y, x, c) == img.at(mirror(y, 5), mirror(x, 4), c));
    }
}

TEST_CASE("identity pipeline returns its input") {
  const auto x = testing::random_image(13, 10, 3, 5);
  const auto r = i2i::dehaze(i2i::identity_pipeline<float>(), x, true);
  REQUIRE(r.dehazed.same_shape(x));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(r.dehazed.data()[i] - x.data()[i]) < 1e-6);
  REQUIRE(r.spanned);
  REQUIRE(r.cube);
  REQUIRE(r.catalyst);
  CHECK(r.cube->channels() == 31);
  CHECK(r.catalyst->channels() == 3);
  CHECK(r.spanned->height() == 13);
}

TEST_CASE("dehaze keeps odd sizes and equals the direct path on divisible ones") {
  const auto p = small_pipeline(1);
  CHECK(p.size_multiple() == 4);
  const auto odd = i2i::dehaze(p, testing::random_image(18, 23, 3, 6));
  CHECK(odd.dehazed.height() == 18);
  CHECK(odd.dehazed.width() == 23);
  CHECK(odd.dehazed.channels() == 3);
  for (double v : odd.dehazed.data()) CHECK((v >= 0 && v <= 1));

  // Divisible input: no padding happens, so the result is the plain stage chain.
  const auto x = testing::random_image(16, 20, 3, 7);
  const auto cond = i2i::i2i_condition(p, x);
  nn::NoGradGuard ng;
  const auto direct = nn::to_image((*p.i2i.gz)(nn::Var<float>(nn::to_tensor<float>(cond))).value());
  CHECK(i2i::dehaze(p, x).dehazed == direct);
  CHECK(i2i::dehaze(p, x).dehazed == i2i::dehaze(p, x).dehazed);
}

TEST_CASE("i2i training step") {
  auto b = i2i::I2IBundle<float>::create(testing::tiny_config().i2i_model, 2);
  auto opt = i2i::make_optimizers(b, {});
  SplitMix64 rng(3);
  i2i::I2IBatch<float> batch{Tensor<float>({2, 15, 8, 8}), Tensor<float>({2, 3, 8, 8})};
  for (auto& v : batch.condition.values()) v = static_cast<float>(rng.uniform01());
  for (auto& v : batch.y.values()) v = static_cast<float>(rng.uniform01());
  const auto g0 = b.gz->parameter_hash(), d0 = b.dz->parameter_hash();
  const auto r = i2i::train_i2i_step(b, batch, opt);
  CHECK(r.step == 1);
  CHECK((std::isfinite(r.g_loss) && std::isfinite(r.d_loss)));
  CHECK(r.l1 >= 0);
  CHECK(b.gz->parameter_hash() != g0);
  CHECK(b.dz->parameter_hash() != d0);
}

TEST_CASE("spec and bundle round trips") {
  testing::TempDir dir("i2i");
  i2i::I2ISpec s;
  s.lambda_l1 = 50;
  s.catalyst = false;
  CHECK(i2i::to_json(i2i::i2i_spec_from_json(i2i::to_json(s))) == i2i::to_json(s));
  auto bad = i2i::to_json(s);
  bad["dz"]["in_channels"] = 15;
  CHECK_THROWS_AS(i2i::i2i_spec_from_json(bad), ConfigError);

  const auto a = i2i::I2IBundle<float>::create(testing::tiny_config().i2i_model, 4);
  nn::Checkpoint c;
  i2i::put_bundle(c, a);
  c.save(dir / "z.ckpt");
  const auto b = i2i::load_bundle<float>(nn::Checkpoint::load(dir / "z.ckpt"));
  CHECK(b.gz->parameter_hash() == a.gz->parameter_hash());
  CHECK(b.dz->parameter_hash() == a.dz->parameter_hash());
  CHECK(b.lambda_l1 == a.lambda_l1);
}

TEST_CASE("500x500 input gives 500x500x3") {
  const auto p = small_pipeline(5);
  const auto out = i2i::dehaze(p, testing::synthetic_scene(500, 500, 1));
  CHECK(out.dehazed.height() == 500);
  CHECK(out.dehazed.width() == 500);
  CHECK(out.dehazed.channels() == 3);
}

}
