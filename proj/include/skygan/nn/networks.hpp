// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skygan/common/rng.hpp"
#include "skygan/nn/ops.hpp"

namespace skygan::nn {

template <typename T>
struct NamedParam {
  std::string name;
  Var<T> var;
};

template <typename T>
struct Conv;

/// Base for every trainable network. Parameters are registered in a fixed
/// order at construction, which fixes both initialization draws and the
/// checkpoint layout.
template <typename T>
class Module {
 public:
  virtual ~Module() = default;
  Module() = default;
  Module(const Module&) = delete;
  Module& operator=(const Module&) = delete;

  virtual Var<T> forward(const Var<T>& x) const = 0;
  /// Serializable architecture description; always carries "kind".
  virtual nlohmann::json spec() const = 0;
  virtual int in_channels() const = 0;
  virtual int out_channels() const = 0;
  /// Input height and width must be multiples of this.
  virtual int size_multiple() const { return 1; }

  Var<T> operator()(const Var<T>& x) const { return forward(x); }

  const std::vector<NamedParam<T>>& parameters() const { return params_; }
  std::size_t parameter_count() const;
  std::uint64_t parameter_hash() const;
  void set_trainable(bool on);
  void zero_grad();

 protected:
  Var<T> register_param(std::string name, Tensor<T> init);
  /// Registers `name`.weight (N(0, 0.02)) then `name`.bias (zeros).
  Conv<T> add_conv(const std::string& name, int cin, int cout, int k, int stride, int pad,
                   SplitMix64& rng);

 private:
  std::vector<NamedParam<T>> params_;
};

/// Convolution bound to its registered parameters.
template <typename T>
struct Conv {
  Var<T> weight;
  Var<T> bias;
  int stride = 1;
  int pad = 0;

  Var<T> operator()(const Var<T>& x) const { return conv2d(x, weight, bias, stride, pad); }
};

struct GeneratorSpec {
  int in_channels = 31;
  int out_channels = 31;
  int depth = 4;
  int base_width = 32;
};

struct DiscriminatorSpec {
  int in_channels = 31;
  int layers = 3;
  int base_width = 32;
};

struct ClassifierSpec {
  int in_channels = 31;
  int stages = 3;
  int width = 32;
};

struct CatalystNetSpec {
  int in_channels = 31;
  int out_channels = 3;
  int residual_blocks = 4;
  int width = 64;
};

nlohmann::json to_json(const GeneratorSpec& s);
nlohmann::json to_json(const DiscriminatorSpec& s);
nlohmann::json to_json(const ClassifierSpec& s);
nlohmann::json to_json(const CatalystNetSpec& s);
GeneratorSpec generator_spec_from_json(const nlohmann::json& j);
DiscriminatorSpec discriminator_spec_from_json(const nlohmann::json& j);
ClassifierSpec classifier_spec_from_json(const nlohmann::json& j);
CatalystNetSpec catalyst_spec_from_json(const nlohmann::json& j);

/// U-Net: `depth` stride-2 encoder stages (instance norm, leaky 0.2), a
/// mirrored nearest-upsample decoder (instance norm, ReLU) with skip
/// concatenations down to the input itself, then a 1x1 head and sigmoid.
template <typename T>
class UNet final : public Module<T> {
 public:
  UNet(const GeneratorSpec& spec, SplitMix64& rng);

  Var<T> forward(const Var<T>& x) const override;
  nlohmann::json spec() const override;
  int in_channels() const override { return spec_.in_channels; }
  int out_channels() const override { return spec_.out_channels; }
  int size_multiple() const override { return 1 << spec_.depth; }

 private:
  GeneratorSpec spec_;
  std::vector<Conv<T>> encoder_;
  std::vector<Conv<T>> decoder_;  // decoder_[k] produces stage k's width
  Conv<T> full_res_;
  Conv<T> head_;
};

/// PatchGAN: 4x4 stride-2 stages then a 3x3 conv to a 1-channel logit map
/// of size floor(H / 2^layers) x floor(W / 2^layers).
template <typename T>
class PatchDiscriminator final : public Module<T> {
 public:
  PatchDiscriminator(const DiscriminatorSpec& spec, SplitMix64& rng);

  Var<T> forward(const Var<T>& x) const override;
  nlohmann::json spec() const override;
  int in_channels() const override { return spec_.in_channels; }
  int out_channels() const override { return 1; }

 private:
  DiscriminatorSpec spec_;
  std::vector<Conv<T>> stages_;
  Conv<T> head_;
};

/// Stride-2 conv stages, global average, linear logit (N x 1 x 1 x 1).
template <typename T>
class DomainClassifier final : public Module<T> {
 public:
  DomainClassifier(const ClassifierSpec& spec, SplitMix64& rng);

  Var<T> forward(const Var<T>& x) const override;
  nlohmann::json spec() const override;
  int in_channels() const override { return spec_.in_channels; }
  int out_channels() const override { return 1; }

 private:
  ClassifierSpec spec_;
  std::vector<Conv<T>> stages_;
  Conv<T> linear_;
};

/// Spatial-size-preserving residual network with a sigmoid head.
template <typename T>
class ResNetCatalyst final : public Module<T> {
 public:
  ResNetCatalyst(const CatalystNetSpec& spec, SplitMix64& rng);

  Var<T> forward(const Var<T>& x) const override;
  nlohmann::json spec() const override;
  int in_channels() const override { return spec_.in_channels; }
  int out_channels() const override { return spec_.out_channels; }

  /// Zeroes the output convolution, so every output is sigmoid(0) = 0.5.
  void zero_output_head();

 private:
  CatalystNetSpec spec_;
  Conv<T> stem_;
  std::vector<std::pair<Conv<T>, Conv<T>>> blocks_;
  Conv<T> head_;
};

/// Parameter-free stand-in that picks input channels by index. The (in, out)
/// form takes the first `out` channels; with in == out it is the identity.
template <typename T>
class ChannelSelect final : public Module<T> {
 public:
  ChannelSelect(int in, int out);
  ChannelSelect(int in, std::vector<int> channels);

  Var<T> forward(const Var<T>& x) const override;
  nlohmann::json spec() const override;
  int in_channels() const override { return in_; }
  int out_channels() const override { return static_cast<int>(channels_.size()); }

 private:
  int in_;
  std::vector<int> channels_;
};

/// Builds any of the above from its spec() JSON.
template <typename T>
std::unique_ptr<Module<T>> make_module(const nlohmann::json& spec, SplitMix64& rng);

}  // namespace skygan::nn
