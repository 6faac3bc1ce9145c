// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/i2i/i2i.hpp"

#include <cmath>
#include <numeric>

#include "skygan/colorcue/color.hpp"
#include "skygan/common/errors.hpp"
#include "skygan/common/rng.hpp"

namespace skygan::i2i {
using nlohmann::json;
using nn::Var;

namespace {

// Mirror index into [0, n) without repeating the edge sample.
int mirror(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

template <typename T>
void check_finite(double v, const char* term) {
  if (!std::isfinite(v)) throw NumericError(std::string("non-finite loss term '") + term + "'");
}

template <typename F>
auto with_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ShapeError& e) {
    throw ShapeError(std::string(stage) + ": " + e.what());
  }
}

}  // namespace

json to_json(const I2ISpec& s) {
  return {{"gz", nn::to_json(s.gz)},
          {"dz", nn::to_json(s.dz)},
          {"lambda_l1", s.lambda_l1},
          {"multicue", s.multicue},
          {"catalyst", s.catalyst}};
}

I2ISpec i2i_spec_from_json(const json& j) {
  I2ISpec s;
  if (j.contains("gz")) s.gz = nn::generator_spec_from_json(j["gz"]);
  if (j.contains("dz")) s.dz = nn::discriminator_spec_from_json(j["dz"]);
  s.lambda_l1 = j.value("lambda_l1", s.lambda_l1);
  s.multicue = j.value("multicue", s.multicue);
  s.catalyst = j.value("catalyst", s.catalyst);
  if (s.gz.in_channels != kConditionChannels || s.gz.out_channels != 3) {
    throw ConfigError("G_z must map 15 -> 3 channels");
  }
  if (s.dz.in_channels != kConditionChannels + 3) throw ConfigError("D_z must take 18 channels");
  if (s.lambda_l1 < 0) throw ConfigError("lambda_l1 must be >= 0");
  return s;
}

json to_json(const I2IReport& r) {
  return {{"step", r.step}, {"g_loss", r.g_loss}, {"d_loss", r.d_loss}, {"l1", r.l1}};
}

template <typename T>
I2IBundle<T> I2IBundle<T>::create(const I2ISpec& spec, std::uint64_t seed) {
  SplitMix64 rng(SeedHasher(seed).add("i2i").value());
  I2IBundle b;
  b.gz = std::make_unique<nn::UNet<T>>(spec.gz, rng);
  b.dz = std::make_unique<nn::PatchDiscriminator<T>>(spec.dz, rng);
  b.lambda_l1 = spec.lambda_l1;
  b.multicue = spec.multicue;
  b.catalyst = spec.catalyst;
  return b;
}

template <typename T>
void put_bundle(nn::Checkpoint& ckpt, const I2IBundle<T>& b) {
  ckpt.meta["i2i"] = {{"lambda_l1", b.lambda_l1}, {"multicue", b.multicue}, {"catalyst", b.catalyst}};
  nn::put_module(ckpt, "i2i.gz", *b.gz);
  if (b.dz) nn::put_module(ckpt, "i2i.dz", *b.dz);
}

template <typename T>
I2IBundle<T> load_bundle(const nn::Checkpoint& ckpt) {
  if (!ckpt.meta.contains("i2i")) throw CheckpointError("checkpoint holds no I2I bundle");
  const json& meta = ckpt.meta["i2i"];
  I2IBundle<T> b;
  b.lambda_l1 = meta.value("lambda_l1", 100.0);
  b.multicue = meta.value("multicue", true);
  b.catalyst = meta.value("catalyst", true);
  b.gz = nn::get_module<T>(ckpt, "i2i.gz");
  if (ckpt.meta["networks"].contains("i2i.dz")) b.dz = nn::get_module<T>(ckpt, "i2i.dz");
  if (b.gz->in_channels() != kConditionChannels || b.gz->out_channels() != 3) {
    throw nn::SpecMismatchError("G_z in checkpoint has the wrong channel counts");
  }
  return b;
}

template <typename T>
I2IBundle<T> identity_bundle() {
  I2IBundle<T> b;
  b.gz = std::make_unique<nn::ChannelSelect<T>>(kConditionChannels, 3);
  return b;
}

image::ImageTensor assemble_i2i_input(const image::ImageTensor& x_rgb, const image::ImageTensor& catalyst_img,
                                      bool multicue, bool catalyst) {
  if (x_rgb.channels() != 3) throw ShapeError("I2I input expects 3-channel RGB");
  if (catalyst_img.channels() != 3) throw ShapeError("catalyst must have 3 channels");
  if (!x_rgb.same_dims(catalyst_img)) throw ShapeError("catalyst dims differ from the input");
  image::ImageTensor cues = multicue ? color::assemble_multicue(x_rgb)
                                     : image::concat_channels(
                                           x_rgb, image::ImageTensor(x_rgb.height(), x_rgb.width(),
                                                                     color::kMultiCueChannels - 3));
  return image::concat_channels(
      cues, catalyst ? catalyst_img : image::ImageTensor(x_rgb.height(), x_rgb.width(), 3));
}

template <typename T>
I2ILoss<T> loss_i2i(const Var<T>& fake, const Var<T>& y, const Var<T>& real_logits, const Var<T>& fake_logits,
                    double lambda_l1) {
  if (!(fake.shape() == y.shape())) throw ShapeError("loss_i2i: " + fake.shape().str() + " vs " + y.shape().str());
  I2ILoss<T> out;
  out.l1 = nn::l1(y, fake);
  out.g_loss = nn::weighted_sum<T>({nn::mean_log_sigmoid(fake_logits), out.l1}, {T(-1), T(lambda_l1)});
  out.d_loss = nn::weighted_sum<T>({nn::bce_with_logits(real_logits, T(1)), nn::bce_with_logits(fake_logits, T(0))},
                                   {T(0.5), T(0.5)});
  return out;
}

template <typename T>
I2IOptimizers<T> make_optimizers(const I2IBundle<T>& b, const nn::AdamOptions& options) {
  if (!b.dz) throw ConfigError("I2I bundle has no discriminator to train against");
  return I2IOptimizers<T>{nn::Adam<T>(nn::Adam<T>::gather({{"gz", b.gz.get()}}), options),
                          nn::Adam<T>(nn::Adam<T>::gather({{"dz", b.dz.get()}}), options)};
}

template <typename T>
I2IReport train_i2i_step(I2IBundle<T>& b, const I2IBatch<T>& batch, I2IOptimizers<T>& opt) {
  if (!b.dz) throw ConfigError("I2I bundle has no discriminator to train against");
  const Var<T> cond(batch.condition);
  const Var<T> y(batch.y);
  b.gz->set_trainable(true);
  b.dz->set_trainable(true);
  const Var<T> fake = (*b.gz)(cond);
  if (!(fake.shape() == y.shape())) throw ShapeError("G_z output " + fake.shape().str() + " vs target " + y.shape().str());

  opt.discriminator.zero_grad();
  const Var<T> real_logits = (*b.dz)(nn::concat_channels(cond, y));
  const Var<T> d_loss = loss_i2i(fake.detach(), y, real_logits, (*b.dz)(nn::concat_channels(cond, fake.detach())),
                                 b.lambda_l1)
                            .d_loss;
  check_finite<T>(d_loss.item(), "d_loss");
  d_loss.backward();
  opt.discriminator.step();

  b.dz->set_trainable(false);
  opt.generator.zero_grad();
  const Var<T> fake_logits = (*b.dz)(nn::concat_channels(cond, fake));
  const auto g = loss_i2i(fake, y, fake_logits, fake_logits, b.lambda_l1);
  check_finite<T>(g.g_loss.item(), "g_loss");
  g.g_loss.backward();
  opt.generator.step();
  b.dz->set_trainable(true);

  I2IReport r;
  r.d_loss = d_loss.item();
  r.g_loss = g.g_loss.item();
  r.l1 = g.l1.item();
  r.step = opt.generator.steps_taken();
  return r;
}

template <typename T>
int Pipeline<T>::size_multiple() const {
  int m = 1;
  for (const nn::Module<T>* mod : {h2h.gx.get(), hsc.net.get(), i2i.gz.get()}) {
    if (mod) m = std::lcm(m, mod->size_multiple());
  }
  return m;
}

template <typename T>
Pipeline<T> identity_pipeline() {
  return Pipeline<T>{h2h::identity_bundle<T>(), hsc::identity_bundle<T>(), identity_bundle<T>()};
}

image::ImageTensor reflect_pad(const image::ImageTensor& img, int pad_bottom, int pad_right) {
  if (pad_bottom < 0 || pad_right < 0) throw ArgumentError("negative padding");
  if (pad_bottom == 0 && pad_right == 0) return img;
  const int h = img.height(), w = img.width(), c = img.channels();
  const int ph = h + pad_bottom, pw = w + pad_right;
  std::vector<double> out(static_cast<std::size_t>(ph) * pw * c);
  for (int y = 0; y < ph; ++y) {
    const int sy = mirror(y, h);
    for (int x = 0; x < pw; ++x) {
      const int sx = mirror(x, w);
      for (int k = 0; k < c; ++k) out[(static_cast<std::size_t>(y) * pw + x) * c + k] = img.at(sy, sx, k);
    }
  }
  return image::ImageTensor(ph, pw, c, std::move(out));
}

template <typename T>
image::ImageTensor i2i_condition(const Pipeline<T>& p, const image::ImageTensor& x_rgb, DehazeResult* keep) {
  if (x_rgb.channels() != 3) throw ShapeError("dehaze input must have 3 channels, got " + std::to_string(x_rgb.channels()));
  const image::ImageTensor spanned = color::span_channels(x_rgb);
  image::ImageTensor cube = with_stage("G_x", [&] {
    nn::NoGradGuard no_grad;
    return nn::to_image((*p.h2h.gx)(Var<T>(nn::to_tensor<T>(spanned))).value());
  });
  image::ImageTensor cat = with_stage("G_r", [&] { return hsc::catalyst(*p.hsc.net, cube); });
  image::ImageTensor cond = with_stage("assemble", [&] {
    return assemble_i2i_input(x_rgb, cat, p.i2i.multicue, p.i2i.catalyst);
  });
  if (keep) {
    keep->spanned = spanned;
    keep->cube = std::move(cube);
    keep->catalyst = std::move(cat);
  }
  return cond;
}

template <typename T>
DehazeResult dehaze(const Pipeline<T>& p, const image::ImageTensor& x_rgb, bool keep_intermediates) {
  if (x_rgb.empty()) throw ShapeError("dehaze input is empty");
  const int m = p.size_multiple();
  const int h = x_rgb.height(), w = x_rgb.width();
  const int pad_h = (m - h % m) % m, pad_w = (m - w % m) % m;
  const image::ImageTensor padded = reflect_pad(x_rgb, pad_h, pad_w);

  DehazeResult result;
  const image::ImageTensor cond = i2i_condition(p, padded, keep_intermediates ? &result : nullptr);
  image::ImageTensor out = with_stage("G_z", [&] {
    nn::NoGradGuard no_grad;
    return nn::to_image((*p.i2i.gz)(Var<T>(nn::to_tensor<T>(cond))).value());
  });
  if (out.channels() != 3) throw ShapeError("G_z: produced " + std::to_string(out.channels()) + " channels");
  auto crop_back = [&](const image::ImageTensor& img) {
    return (pad_h || pad_w) ? image::crop(img, 0, 0, h, w) : img;
  };
  result.dehazed = crop_back(out);
  if (keep_intermediates) {
    result.spanned = crop_back(*result.spanned);
    result.cube = crop_back(*result.cube);
    result.catalyst = crop_back(*result.catalyst);
  }
  return result;
}

#define SKYGAN_INSTANTIATE(T)                                                                                  \
  template struct I2IBundle<T>;                                                                                \
  template struct Pipeline<T>;                                                                                 \
  template void put_bundle<T>(nn::Checkpoint&, const I2IBundle<T>&);                                           \
  template I2IBundle<T> load_bundle<T>(const nn::Checkpoint&);                                                 \
  template I2IBundle<T> identity_bundle<T>();                                                                  \
  template I2ILoss<T> loss_i2i<T>(const Var<T>&, const Var<T>&, const Var<T>&, const Var<T>&, double);         \
  template I2IOptimizers<T> make_optimizers<T>(const I2IBundle<T>&, const nn::AdamOptions&);                   \
  template I2IReport train_i2i_step<T>(I2IBundle<T>&, const I2IBatch<T>&, I2IOptimizers<T>&);                  \
  template Pipeline<T> identity_pipeline<T>();                                                                 \
  template image::ImageTensor i2i_condition<T>(const Pipeline<T>&, const image::ImageTensor&, DehazeResult*);  \
  template DehazeResult dehaze<T>(const Pipeline<T>&, const image::ImageTensor&, bool);
SKYGAN_INSTANTIATE(float)
SKYGAN_INSTANTIATE(double)
#undef SKYGAN_INSTANTIATE

}  // namespace skygan::i2i
