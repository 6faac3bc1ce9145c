// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>

#include "skygan/h2h/h2h.hpp"
#include "skygan/imagecore/image.hpp"
#include "skygan/nn/adam.hpp"
#include "skygan/nn/checkpoint.hpp"
#include "skygan/nn/networks.hpp"

namespace skygan::hsc {

/// The catalyst network G_r (31 -> 3) and nothing else.
template <typename T>
struct HscBundle {
  std::unique_ptr<nn::Module<T>> net;

  static HscBundle create(const nn::CatalystNetSpec& spec, std::uint64_t seed);
};

/// Prefix "hsc.net".
template <typename T>
void put_bundle(nn::Checkpoint& ckpt, const HscBundle<T>& bundle);
template <typename T>
HscBundle<T> load_bundle(const nn::Checkpoint& ckpt);

/// G_r reading the anchor bands, so catalyst(span(x)) == x.
template <typename T>
HscBundle<T> identity_bundle();

/// H x W x 31 cube -> H x W x 3 in [0, 1].
template <typename T>
image::ImageTensor catalyst(const nn::Module<T>& net, const image::ImageTensor& cube);

/// Mean absolute error between the clean target and G_r's output.
template <typename T>
nn::Var<T> loss_hsc(const nn::Var<T>& y, const nn::Var<T>& prediction);

/// Cubes are G_x(span(x)) from the frozen upstream; see reconstruct_batch.
template <typename T>
struct HscBatch {
  nn::Tensor<T> cubes;
  nn::Tensor<T> y;
};

/// Runs the frozen G_x over spanned hazy inputs without recording a graph.
template <typename T>
nn::Tensor<T> reconstruct_batch(const h2h::H2HBundle<T>& h2h, const nn::Tensor<T>& x_spanned);

/// One Adam step on loss_hsc; returns the pre-update loss.
template <typename T>
double train_hsc_step(HscBundle<T>& bundle, const HscBatch<T>& batch, nn::Adam<T>& opt);

/// Same, reconstructing the cubes from spanned hazy inputs through the frozen
/// H2H bundle first. The H2H parameters are never touched.
template <typename T>
double train_hsc_step(HscBundle<T>& bundle, const h2h::H2HBundle<T>& h2h, const nn::Tensor<T>& x_spanned,
                      const nn::Tensor<T>& y, nn::Adam<T>& opt);

}  // namespace skygan::hsc
