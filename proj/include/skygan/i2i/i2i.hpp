// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include <nlohmann/json.hpp>

#include "skygan/h2h/h2h.hpp"
#include "skygan/hsc/hsc.hpp"
#include "skygan/imagecore/image.hpp"
#include "skygan/nn/adam.hpp"
#include "skygan/nn/checkpoint.hpp"
#include "skygan/nn/networks.hpp"

namespace skygan::i2i {

inline constexpr int kConditionChannels = 15;

struct I2ISpec {
  nn::GeneratorSpec gz{15, 3, 4, 32};
  nn::DiscriminatorSpec dz{18, 3, 32};
  double lambda_l1 = 100.0;
  /// Off: channels 3..11 of the conditioning are zero (RGB kept).
  bool multicue = true;
  /// Off: channels 12..14 of the conditioning are zero.
  bool catalyst = true;
};

nlohmann::json to_json(const I2ISpec& spec);
I2ISpec i2i_spec_from_json(const nlohmann::json& j);

template <typename T>
struct I2IBundle {
  std::unique_ptr<nn::Module<T>> gz;  // 15 -> 3
  std::unique_ptr<nn::Module<T>> dz;  // conditioning + candidate RGB -> logit map
  double lambda_l1 = 100.0;
  bool multicue = true;
  bool catalyst = true;

  static I2IBundle create(const I2ISpec& spec, std::uint64_t seed);
};

/// Prefixes "i2i.gz", "i2i.dz" plus meta["i2i"].
template <typename T>
void put_bundle(nn::Checkpoint& ckpt, const I2IBundle<T>& bundle);
template <typename T>
I2IBundle<T> load_bundle(const nn::Checkpoint& ckpt);

/// G_z returns the first three conditioning channels (the input RGB).
template <typename T>
I2IBundle<T> identity_bundle();

/// [12 multi-cue | 3 catalyst]. Disabled cues are zero-filled.
image::ImageTensor assemble_i2i_input(const image::ImageTensor& x_rgb, const image::ImageTensor& catalyst_img,
                                      bool multicue = true, bool catalyst = true);

template <typename T>
struct I2ILoss {
  nn::Var<T> g_loss;  // -mean log sigmoid(fake) + lambda * mean|y - fake|
  nn::Var<T> d_loss;  // 0.5 * (BCE(real, 1) + BCE(fake, 0))
  nn::Var<T> l1;
};

template <typename T>
I2ILoss<T> loss_i2i(const nn::Var<T>& fake, const nn::Var<T>& y, const nn::Var<T>& real_logits,
                    const nn::Var<T>& fake_logits, double lambda_l1);

template <typename T>
struct I2IBatch {
  nn::Tensor<T> condition;  // N x 15 x H x W
  nn::Tensor<T> y;          // N x 3 x H x W
};

template <typename T>
struct I2IOptimizers {
  nn::Adam<T> generator;
  nn::Adam<T> discriminator;
};

template <typename T>
I2IOptimizers<T> make_optimizers(const I2IBundle<T>& bundle, const nn::AdamOptions& options);

struct I2IReport {
  double g_loss = 0;
  double d_loss = 0;
  double l1 = 0;
  std::int64_t step = 0;
};

nlohmann::json to_json(const I2IReport& r);

/// D_z step on detached G_z output, then G_z step against the updated D_z.
template <typename T>
I2IReport train_i2i_step(I2IBundle<T>& bundle, const I2IBatch<T>& batch, I2IOptimizers<T>& opt);

template <typename T>
struct Pipeline {
  h2h::H2HBundle<T> h2h;
  hsc::HscBundle<T> hsc;
  I2IBundle<T> i2i;

  /// Least common multiple of every stage's size requirement.
  int size_multiple() const;
};

/// Every stage a stub: G_x identity, G_r and G_h anchor readers, G_z reads
/// the input RGB back. dehaze() on it returns the input up to float rounding.
template <typename T>
Pipeline<T> identity_pipeline();

struct DehazeResult {
  image::ImageTensor dehazed;
  std::optional<image::ImageTensor> spanned;
  std::optional<image::ImageTensor> cube;
  std::optional<image::ImageTensor> catalyst;
};

/// 15-channel conditioning for one image whose sides already satisfy
/// size_multiple(). Shared by training and inference.
template <typename T>
image::ImageTensor i2i_condition(const Pipeline<T>& pipeline, const image::ImageTensor& x_rgb,
                                 DehazeResult* intermediates = nullptr);

/// Reflect-pads to the pipeline multiple, runs every stage, crops back.
template <typename T>
DehazeResult dehaze(const Pipeline<T>& pipeline, const image::ImageTensor& x_rgb, bool keep_intermediates = false);

/// Reflect padding on the bottom and right edges (mirror without repeating
/// the edge pixel; longer pads keep bouncing).
image::ImageTensor reflect_pad(const image::ImageTensor& img, int pad_bottom, int pad_right);

}  // namespace skygan::i2i
