// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skygan/nn/networks.hpp"

namespace skygan::nn {

struct AdamOptions {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction over a fixed parameter list. Parameters with no
/// accumulated gradient are left untouched for that step.
template <typename T>
class Adam {
 public:
  Adam(std::vector<NamedParam<T>> params, AdamOptions options);

  /// Collects every parameter of each module, names prefixed "<prefix>/".
  static std::vector<NamedParam<T>> gather(
      const std::vector<std::pair<std::string, const Module<T>*>>& modules);

  void zero_grad();
  /// Throws NumericError if a gradient or updated parameter is non-finite.
  void step();

  const AdamOptions& options() const { return options_; }
  void set_lr(double lr) { options_.lr = lr; }
  std::int64_t steps_taken() const { return t_; }

  const std::vector<NamedParam<T>>& params() const { return params_; }
  const std::vector<Tensor<T>>& first_moments() const { return m_; }
  const std::vector<Tensor<T>>& second_moments() const { return v_; }

  /// Restores moments and step count; shapes must match.
  void restore(std::int64_t t, std::vector<Tensor<T>> m, std::vector<Tensor<T>> v);

 private:
  std::vector<NamedParam<T>> params_;
  AdamOptions options_;
  std::int64_t t_ = 0;
  std::vector<Tensor<T>> m_;
  std::vector<Tensor<T>> v_;
};

}  // namespace skygan::nn
