// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "skygan/imagecore/image.hpp"
#include "skygan/nn/adam.hpp"
#include "skygan/nn/checkpoint.hpp"
#include "skygan/nn/networks.hpp"

namespace skygan::h2h {

template <typename T>
using ModulePtr = std::unique_ptr<nn::Module<T>>;

struct LossWeights {
  double gan = 1.0;
  double cyc = 10.0;
  double idt = 5.0;
  double cls = 1.0;
};

/// Architecture, loss weights and ablation switches of the hazy-to-spectral
/// stage.
struct H2HSpec {
  nn::GeneratorSpec gx{31, 31, 4, 32};
  nn::GeneratorSpec gh{31, 3, 4, 32};
  nn::DiscriminatorSpec dx{31, 3, 32};
  nn::DiscriminatorSpec dh{3, 3, 32};
  nn::ClassifierSpec cls{31, 3, 32};
  LossWeights weights;
  /// Off: the classifier is neither trained nor used as a penalty.
  bool domain_classifier = true;
  /// Off: the x-cycle reconstructs the hazy input instead of the clean target.
  bool task_supervision = true;
};

nlohmann::json to_json(const H2HSpec& spec);
/// Missing keys keep their defaults.
H2HSpec h2h_spec_from_json(const nlohmann::json& j);

template <typename T>
struct H2HBundle {
  ModulePtr<T> gx;   // 31 -> 31
  ModulePtr<T> gh;   // 31 -> 3
  ModulePtr<T> dx;   // judges cubes
  ModulePtr<T> dh;   // judges RGB
  ModulePtr<T> cls;  // hazy (1) vs clear (0) on reconstructed cubes
  LossWeights weights;
  bool domain_classifier = true;
  bool task_supervision = true;

  /// Networks are initialized in the order gx, gh, dx, dh, cls from one stream.
  static H2HBundle create(const H2HSpec& spec, std::uint64_t seed);

  std::vector<std::pair<std::string, const nn::Module<T>*>> generators() const;
  std::vector<std::pair<std::string, const nn::Module<T>*>> critics() const;
  std::uint64_t generator_hash() const;
  std::uint64_t critic_hash() const;
  void set_trainable(bool on);
};

/// Checkpoint prefixes "h2h.gx", "h2h.gh", ... plus meta["h2h"].
template <typename T>
void put_bundle(nn::Checkpoint& ckpt, const H2HBundle<T>& bundle);
template <typename T>
H2HBundle<T> load_bundle(const nn::Checkpoint& ckpt);

/// RGB -> 31 bands with the fixed band-weight matrix.
template <typename T>
nn::Var<T> span(const nn::Var<T>& rgb);
/// Anchor bands (650, 550, 450 nm) of a 31-band tensor as RGB.
template <typename T>
nn::Var<T> anchor(const nn::Var<T>& cube);

/// mean log(1 - sigmoid(fake)) + mean log sigmoid(real).
template <typename T>
nn::Var<T> loss_adversarial_x(const nn::Var<T>& fake_logits, const nn::Var<T>& real_logits);
template <typename T>
nn::Var<T> loss_adversarial_h(const nn::Var<T>& fake_logits, const nn::Var<T>& real_logits);

/// Non-saturating generator term: -mean log sigmoid(fake).
template <typename T>
nn::Var<T> generator_adversarial(const nn::Var<T>& fake_logits);

/// mse(y, gh(gx(x_spanned))) + mse(h, gx(span(gh(h)))).
template <typename T>
nn::Var<T> loss_cycle(const nn::Var<T>& x_spanned, const nn::Var<T>& y, const nn::Var<T>& h,
                      const nn::Module<T>& gx, const nn::Module<T>& gh);

/// mse(h, gx(h)) + mse(anchor(x_spanned), gh(x_spanned)).
template <typename T>
nn::Var<T> loss_identity(const nn::Var<T>& h, const nn::Module<T>& gx, const nn::Var<T>& x_spanned,
                         const nn::Module<T>& gh);

template <typename T>
struct ClassifierLoss {
  nn::Var<T> classifier_loss;    // BCE, hazy = 1, clear = 0, mean over all samples
  nn::Var<T> generator_penalty;  // -classifier_loss
};

template <typename T>
ClassifierLoss<T> loss_domain_classifier(const nn::Module<T>& cls, const nn::Var<T>& from_hazy,
                                         const nn::Var<T>& from_clear);

struct LossReport {
  double l_x = 0;
  double l_h = 0;
  double l_gan = 0;
  double l_cyc = 0;
  double l_idt = 0;
  double l_cls = 0;
  double total = 0;  // generator objective
  std::int64_t step = 0;
};

nlohmann::json to_json(const LossReport& r);

/// NCHW batch. x_spanned is span(x), 31 channels; y is clean RGB; h holds
/// unpaired cubes (same batch size, 31 channels).
template <typename T>
struct H2HBatch {
  nn::Tensor<T> x_spanned;
  nn::Tensor<T> y;
  nn::Tensor<T> h;
};

template <typename T>
struct H2HOptimizers {
  nn::Adam<T> generators;
  nn::Adam<T> critics;  // D_x, D_h and the classifier
};

template <typename T>
H2HOptimizers<T> make_optimizers(const H2HBundle<T>& bundle, const nn::AdamOptions& options);

/// One alternating update: critics on their own objective with generator
/// outputs detached, then generators against the freshly updated critics.
/// Throws NumericError naming the first non-finite term.
template <typename T>
LossReport train_h2h_step(H2HBundle<T>& bundle, const H2HBatch<T>& batch, H2HOptimizers<T>& opt);

/// span(x_rgb) -> G_x, clamped to [0, 1]. Returns H x W x 31.
template <typename T>
image::ImageTensor reconstruct_hsi(const H2HBundle<T>& bundle, const image::ImageTensor& x_rgb);

/// Bundle whose G_x is the identity and whose G_h reads the anchor bands.
template <typename T>
H2HBundle<T> identity_bundle();

}  // namespace skygan::h2h
