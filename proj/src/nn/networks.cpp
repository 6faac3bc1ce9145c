// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/nn/networks.hpp"

#include <algorithm>

#include "skygan/common/errors.hpp"

namespace skygan::nn {
using nlohmann::json;

namespace {

constexpr double kInitStd = 0.02;
constexpr double kEncoderSlope = 0.2;

int stage_width(int base, int k) { return base << std::min(k, 3); }

template <typename T>
Tensor<T> normal_init(Shape s, SplitMix64& rng) {
  Tensor<T> t(s);
  for (auto& v : t.values()) v = static_cast<T>(rng.normal(0.0, kInitStd));
  return t;
}

void require_positive(int v, const char* what) {
  if (v < 1) throw ConfigError(std::string(what) + " must be >= 1");
}

void check_input(const Shape& s, int channels, int multiple, const std::string& who) {
  if (s.c != channels) {
    throw ShapeError(who + " expects " + std::to_string(channels) + " channels, got " +
                     std::to_string(s.c));
  }
  if (s.h % multiple != 0 || s.w % multiple != 0) {
    throw ShapeError(who + " needs H and W divisible by " + std::to_string(multiple) + ", got " +
                     std::to_string(s.h) + "x" + std::to_string(s.w));
  }
}

}  // namespace

template <typename T>
std::size_t Module<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.var.value().numel();
  return n;
}

template <typename T>
std::uint64_t Module<T>::parameter_hash() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const auto& p : params_) h = hash_bytes(p.var.value(), h);
  return h;
}

template <typename T>
void Module<T>::set_trainable(bool on) {
  for (auto& p : params_) p.var.set_requires_grad(on);
}

template <typename T>
void Module<T>::zero_grad() {
  for (auto& p : params_) p.var.zero_grad();
}

template <typename T>
Var<T> Module<T>::register_param(std::string name, Tensor<T> init) {
  Var<T> v(std::move(init), true);
  params_.push_back({std::move(name), v});
  return v;
}

template <typename T>
Conv<T> Module<T>::add_conv(const std::string& name, int cin, int cout, int k, int stride, int pad,
                            SplitMix64& rng) {
  Conv<T> c;
  c.weight = register_param(name + ".weight", normal_init<T>(Shape{cout, cin, k, k}, rng));
  c.bias = register_param(name + ".bias", Tensor<T>(Shape{cout, 1, 1, 1}));
  c.stride = stride;
  c.pad = pad;
  return c;
}

json to_json(const GeneratorSpec& s) {
  return {{"kind", "unet"},
          {"in_channels", s.in_channels},
          {"out_channels", s.out_channels},
          {"depth", s.depth},
          {"base_width", s.base_width}};
}

json to_json(const DiscriminatorSpec& s) {
  return {{"kind", "patch_discriminator"},
          {"in_channels", s.in_channels},
          {"layers", s.layers},
          {"base_width", s.base_width}};
}

json to_json(const ClassifierSpec& s) {
  return {{"kind", "domain_classifier"},
          {"in_channels", s.in_channels},
          {"stages", s.stages},
          {"width", s.width}};
}

json to_json(const CatalystNetSpec& s) {
  return {{"kind", "resnet_catalyst"},
          {"in_channels", s.in_channels},
          {"out_channels", s.out_channels},
          {"residual_blocks", s.residual_blocks},
          {"width", s.width}};
}

GeneratorSpec generator_spec_from_json(const json& j) {
  GeneratorSpec s;
  s.in_channels = j.value("in_channels", s.in_channels);
  s.out_channels = j.value("out_channels", s.out_channels);
  s.depth = j.value("depth", s.depth);
  s.base_width = j.value("base_width", s.base_width);
  return s;
}

DiscriminatorSpec discriminator_spec_from_json(const json& j) {
  DiscriminatorSpec s;
  s.in_channels = j.value("in_channels", s.in_channels);
  s.layers = j.value("layers", s.layers);
  s.base_width = j.value("base_width", s.base_width);
  return s;
}

ClassifierSpec classifier_spec_from_json(const json& j) {
  ClassifierSpec s;
  s.in_channels = j.value("in_channels", s.in_channels);
  s.stages = j.value("stages", s.stages);
  s.width = j.value("width", s.width);
  return s;
}

CatalystNetSpec catalyst_spec_from_json(const json& j) {
  CatalystNetSpec s;
  s.in_channels = j.value("in_channels", s.in_channels);
  s.out_channels = j.value("out_channels", s.out_channels);
  s.residual_blocks = j.value("residual_blocks", s.residual_blocks);
  s.width = j.value("width", s.width);
  return s;
}

// --- UNet -------------------------------------------------------------------

template <typename T>
UNet<T>::UNet(const GeneratorSpec& spec, SplitMix64& rng) : spec_(spec) {
  require_positive(spec.in_channels, "generator in_channels");
  require_positive(spec.out_channels, "generator out_channels");
  require_positive(spec.depth, "generator depth");
  require_positive(spec.base_width, "generator base_width");
  const int depth = spec.depth;
  int cin = spec.in_channels;
  for (int k = 0; k < depth; ++k) {
    const int w = stage_width(spec.base_width, k);
    encoder_.push_back(this->add_conv("enc" + std::to_string(k), cin, w, 3, 2, 1, rng));
    cin = w;
  }
  decoder_.resize(depth);
  for (int k = depth - 1; k >= 1; --k) {
    const int w_in = stage_width(spec.base_width, k) + stage_width(spec.base_width, k - 1);
    decoder_[k - 1] = this->add_conv("dec" + std::to_string(k - 1), w_in,
                                  stage_width(spec.base_width, k - 1), 3, 1, 1, rng);
  }
  const int w0 = stage_width(spec.base_width, 0);
  full_res_ = this->add_conv("full", w0 + spec.in_channels, w0, 3, 1, 1, rng);
  head_ = this->add_conv("head", w0, spec.out_channels, 1, 1, 0, rng);
}

template <typename T>
Var<T> UNet<T>::forward(const Var<T>& x) const {
  check_input(x.shape(), spec_.in_channels, size_multiple(), "unet");
  const T enc_slope = static_cast<T>(kEncoderSlope);
  std::vector<Var<T>> skips;
  Var<T> h = x;
  for (const auto& conv : encoder_) {
    h = leaky_relu(instance_norm(conv(h)), enc_slope);
    skips.push_back(h);
  }
  for (int k = spec_.depth - 1; k >= 1; --k) {
    h = relu(instance_norm(decoder_[k - 1](concat_channels(upsample2x(h), skips[k - 1]))));
  }
  h = relu(instance_norm(full_res_(concat_channels(upsample2x(h), x))));
  return sigmoid(head_(h));
}

template <typename T>
json UNet<T>::spec() const {
  return to_json(spec_);
}

// --- PatchDiscriminator -----------------------------------------------------

template <typename T>
PatchDiscriminator<T>::PatchDiscriminator(const DiscriminatorSpec& spec, SplitMix64& rng) : spec_(spec) {
  require_positive(spec.in_channels, "discriminator in_channels");
  require_positive(spec.layers, "discriminator layers");
  require_positive(spec.base_width, "discriminator base_width");
  int cin = spec.in_channels;
  for (int k = 0; k < spec.layers; ++k) {
    const int w = stage_width(spec.base_width, k);
    stages_.push_back(this->add_conv("stage" + std::to_string(k), cin, w, 4, 2, 1, rng));
    cin = w;
  }
  head_ = this->add_conv("head", cin, 1, 3, 1, 1, rng);
}

template <typename T>
Var<T> PatchDiscriminator<T>::forward(const Var<T>& x) const {
  check_input(x.shape(), spec_.in_channels, 1, "patch discriminator");
  const T slope = static_cast<T>(kEncoderSlope);
  Var<T> h = x;
  for (std::size_t k = 0; k < stages_.size(); ++k) {
    h = stages_[k](h);
    if (k > 0) h = instance_norm(h);
    h = leaky_relu(h, slope);
  }
  return head_(h);
}

template <typename T>
json PatchDiscriminator<T>::spec() const {
  return to_json(spec_);
}

// --- DomainClassifier -------------------------------------------------------

template <typename T>
DomainClassifier<T>::DomainClassifier(const ClassifierSpec& spec, SplitMix64& rng) : spec_(spec) {
  require_positive(spec.in_channels, "classifier in_channels");
  require_positive(spec.stages, "classifier stages");
  require_positive(spec.width, "classifier width");
  int cin = spec.in_channels;
  for (int k = 0; k < spec.stages; ++k) {
    stages_.push_back(this->add_conv("stage" + std::to_string(k), cin, spec.width, 3, 2, 1, rng));
    cin = spec.width;
  }
  linear_ = this->add_conv("linear", spec.width, 1, 1, 1, 0, rng);
}

template <typename T>
Var<T> DomainClassifier<T>::forward(const Var<T>& x) const {
  check_input(x.shape(), spec_.in_channels, 1, "domain classifier");
  const T slope = static_cast<T>(kEncoderSlope);
  Var<T> h = x;
  for (const auto& conv : stages_) h = leaky_relu(conv(h), slope);
  return linear_(global_avg_pool(h));
}

template <typename T>
json DomainClassifier<T>::spec() const {
  return to_json(spec_);
}

// --- ResNetCatalyst ---------------------------------------------------------

template <typename T>
ResNetCatalyst<T>::ResNetCatalyst(const CatalystNetSpec& spec, SplitMix64& rng) : spec_(spec) {
  require_positive(spec.in_channels, "catalyst in_channels");
  require_positive(spec.out_channels, "catalyst out_channels");
  require_positive(spec.width, "catalyst width");
  if (spec.residual_blocks < 0) throw ConfigError("catalyst residual_blocks must be >= 0");
  stem_ = this->add_conv("stem", spec.in_channels, spec.width, 3, 1, 1, rng);
  for (int b = 0; b < spec.residual_blocks; ++b) {
    const std::string n = "block" + std::to_string(b);
    auto first = this->add_conv(n + ".conv0", spec.width, spec.width, 3, 1, 1, rng);
    auto second = this->add_conv(n + ".conv1", spec.width, spec.width, 3, 1, 1, rng);
    blocks_.emplace_back(first, second);
  }
  head_ = this->add_conv("head", spec.width, spec.out_channels, 3, 1, 1, rng);
}

template <typename T>
Var<T> ResNetCatalyst<T>::forward(const Var<T>& x) const {
  check_input(x.shape(), spec_.in_channels, 1, "catalyst net");
  Var<T> h = relu(instance_norm(stem_(x)));
  for (const auto& [first, second] : blocks_) {
    h = add(h, instance_norm(second(relu(instance_norm(first(h))))));
  }
  return sigmoid(head_(h));
}

template <typename T>
json ResNetCatalyst<T>::spec() const {
  return to_json(spec_);
}

template <typename T>
void ResNetCatalyst<T>::zero_output_head() {
  head_.weight.mutable_value().fill(T(0));
  head_.bias.mutable_value().fill(T(0));
}

// --- ChannelSelect ----------------------------------------------------------

namespace {

std::vector<int> first_channels(int out) {
  std::vector<int> c(static_cast<std::size_t>(std::max(out, 0)));
  for (int i = 0; i < out; ++i) c[static_cast<std::size_t>(i)] = i;
  return c;
}

}  // namespace

template <typename T>
ChannelSelect<T>::ChannelSelect(int in, int out) : ChannelSelect(in, first_channels(out)) {}

template <typename T>
ChannelSelect<T>::ChannelSelect(int in, std::vector<int> channels) : in_(in), channels_(std::move(channels)) {
  require_positive(in, "channel_select in_channels");
  if (channels_.empty()) throw ConfigError("channel_select needs at least one channel");
  for (int c : channels_) {
    if (c < 0 || c >= in) throw ConfigError("channel_select index " + std::to_string(c) + " out of range");
  }
}

template <typename T>
Var<T> ChannelSelect<T>::forward(const Var<T>& x) const {
  check_input(x.shape(), in_, 1, "channel_select");
  const int out = out_channels();
  bool prefix = true;
  for (int i = 0; i < out; ++i) prefix = prefix && channels_[static_cast<std::size_t>(i)] == i;
  if (prefix) return out == in_ ? x : slice_channels(x, 0, out);
  std::vector<double> mix(static_cast<std::size_t>(out) * in_, 0.0);
  for (int o = 0; o < out; ++o) mix[static_cast<std::size_t>(o) * in_ + channels_[static_cast<std::size_t>(o)]] = 1.0;
  return channel_mix(x, mix, out);
}

template <typename T>
json ChannelSelect<T>::spec() const {
  return {{"kind", "channel_select"}, {"in_channels", in_}, {"channels", channels_}};
}

template <typename T>
std::unique_ptr<Module<T>> make_module(const json& spec, SplitMix64& rng) {
  const std::string kind = spec.value("kind", "");
  if (kind == "unet") return std::make_unique<UNet<T>>(generator_spec_from_json(spec), rng);
  if (kind == "patch_discriminator") {
    return std::make_unique<PatchDiscriminator<T>>(discriminator_spec_from_json(spec), rng);
  }
  if (kind == "domain_classifier") {
    return std::make_unique<DomainClassifier<T>>(classifier_spec_from_json(spec), rng);
  }
  if (kind == "resnet_catalyst") {
    return std::make_unique<ResNetCatalyst<T>>(catalyst_spec_from_json(spec), rng);
  }
  if (kind == "channel_select") {
    const int in = spec.at("in_channels").get<int>();
    if (spec.contains("channels")) {
      return std::make_unique<ChannelSelect<T>>(in, spec.at("channels").get<std::vector<int>>());
    }
    return std::make_unique<ChannelSelect<T>>(in, spec.at("out_channels").get<int>());
  }
  throw ConfigError("unknown network kind '" + kind + "'");
}

#define SKYGAN_INSTANTIATE(T)                                                   \
  template class Module<T>;                                                     \
  template class UNet<T>;                                                       \
  template class PatchDiscriminator<T>;                                         \
  template class DomainClassifier<T>;                                           \
  template class ResNetCatalyst<T>;                                             \
  template class ChannelSelect<T>;                                              \
  template std::unique_ptr<Module<T>> make_module<T>(const json&, SplitMix64&);
SKYGAN_INSTANTIATE(float)
SKYGAN_INSTANTIATE(double)
#undef SKYGAN_INSTANTIATE

}  // namespace skygan::nn
