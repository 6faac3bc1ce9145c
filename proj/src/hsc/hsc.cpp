// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/hsc/hsc.hpp"

#include <cmath>

#include "skygan/colorcue/color.hpp"
#include "skygan/common/errors.hpp"
#include "skygan/common/rng.hpp"

namespace skygan::hsc {
using nn::Var;

template <typename T>
HscBundle<T> HscBundle<T>::create(const nn::CatalystNetSpec& spec, std::uint64_t seed) {
  if (spec.in_channels != color::kSpectralBands || spec.out_channels != 3) {
    throw ConfigError("catalyst network must map 31 -> 3 channels");
  }
  SplitMix64 rng(SeedHasher(seed).add("hsc").value());
  HscBundle b;
  b.net = std::make_unique<nn::ResNetCatalyst<T>>(spec, rng);
  return b;
}

template <typename T>
void put_bundle(nn::Checkpoint& ckpt, const HscBundle<T>& bundle) {
  nn::put_module(ckpt, "hsc.net", *bundle.net);
}

template <typename T>
HscBundle<T> load_bundle(const nn::Checkpoint& ckpt) {
  HscBundle<T> b;
  b.net = nn::get_module<T>(ckpt, "hsc.net");
  if (b.net->in_channels() != color::kSpectralBands || b.net->out_channels() != 3) {
    throw nn::SpecMismatchError("catalyst network in checkpoint has the wrong channel counts");
  }
  return b;
}

template <typename T>
HscBundle<T> identity_bundle() {
  HscBundle<T> b;
  b.net = std::make_unique<nn::ChannelSelect<T>>(
      color::kSpectralBands,
      std::vector<int>{color::kRedAnchorBand, color::kGreenAnchorBand, color::kBlueAnchorBand});
  return b;
}

template <typename T>
image::ImageTensor catalyst(const nn::Module<T>& net, const image::ImageTensor& cube) {
  if (cube.channels() != color::kSpectralBands) {
    throw ShapeError("catalyst expects a 31-band cube, got " + std::to_string(cube.channels()) + " channels");
  }
  nn::NoGradGuard no_grad;
  return nn::to_image(net(Var<T>(nn::to_tensor<T>(cube))).value());
}

template <typename T>
Var<T> loss_hsc(const Var<T>& y, const Var<T>& prediction) {
  if (!(y.shape() == prediction.shape())) {
    throw ShapeError("loss_hsc: " + y.shape().str() + " vs " + prediction.shape().str());
  }
  return nn::l1(y, prediction);
}

template <typename T>
nn::Tensor<T> reconstruct_batch(const h2h::H2HBundle<T>& h2h, const nn::Tensor<T>& x_spanned) {
  nn::NoGradGuard no_grad;
  return (*h2h.gx)(Var<T>(x_spanned)).value();
}

template <typename T>
double train_hsc_step(HscBundle<T>& b, const HscBatch<T>& batch, nn::Adam<T>& opt) {
  b.net->set_trainable(true);
  opt.zero_grad();
  const Var<T> loss = loss_hsc(Var<T>(batch.y), (*b.net)(Var<T>(batch.cubes)));
  const double value = loss.item();
  if (!std::isfinite(value)) throw NumericError("non-finite loss term 'l_r'");
  loss.backward();
  opt.step();
  return value;
}

template <typename T>
double train_hsc_step(HscBundle<T>& b, const h2h::H2HBundle<T>& h2h, const nn::Tensor<T>& x_spanned,
                      const nn::Tensor<T>& y, nn::Adam<T>& opt) {
  return train_hsc_step(b, HscBatch<T>{reconstruct_batch(h2h, x_spanned), y}, opt);
}

#define SKYGAN_INSTANTIATE(T)                                                                  \
  template struct HscBundle<T>;                                                                \
  template void put_bundle<T>(nn::Checkpoint&, const HscBundle<T>&);                           \
  template HscBundle<T> load_bundle<T>(const nn::Checkpoint&);                                 \
  template HscBundle<T> identity_bundle<T>();                                                  \
  template image::ImageTensor catalyst<T>(const nn::Module<T>&, const image::ImageTensor&);    \
  template Var<T> loss_hsc<T>(const Var<T>&, const Var<T>&);                                   \
  template nn::Tensor<T> reconstruct_batch<T>(const h2h::H2HBundle<T>&, const nn::Tensor<T>&); \
  template double train_hsc_step<T>(HscBundle<T>&, const HscBatch<T>&, nn::Adam<T>&);            \
  template double train_hsc_step<T>(HscBundle<T>&, const h2h::H2HBundle<T>&, const nn::Tensor<T>&, \
                                    const nn::Tensor<T>&, nn::Adam<T>&);
SKYGAN_INSTANTIATE(float)
SKYGAN_INSTANTIATE(double)
#undef SKYGAN_INSTANTIATE

}  // namespace skygan::hsc
