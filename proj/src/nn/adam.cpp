// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/nn/adam.hpp"

#include <cmath>

#include "skygan/common/errors.hpp"

namespace skygan::nn {

template <typename T>
Adam<T>::Adam(std::vector<NamedParam<T>> params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  for (const auto& p : params_) {
    m_.emplace_back(p.var.shape());
    v_.emplace_back(p.var.shape());
  }
}

template <typename T>
std::vector<NamedParam<T>> Adam<T>::gather(
    const std::vector<std::pair<std::string, const Module<T>*>>& modules) {
  std::vector<NamedParam<T>> out;
  for (const auto& [prefix, module] : modules) {
    for (const auto& p : module->parameters()) out.push_back({prefix + "/" + p.name, p.var});
  }
  return out;
}

template <typename T>
void Adam<T>::zero_grad() {
  for (auto& p : params_) p.var.zero_grad();
}

template <typename T>
void Adam<T>::step() {
  ++t_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const Tensor<T>& g = params_[i].var.grad();
    if (g.empty()) continue;
    Tensor<T>& w = params_[i].var.mutable_value();
    T* m = m_[i].data();
    T* v = v_[i].data();
    for (std::size_t k = 0; k < w.numel(); ++k) {
      const double gk = g[k];
      if (!std::isfinite(gk)) throw NumericError("non-finite gradient in " + params_[i].name);
      m[k] = static_cast<T>(b1 * m[k] + (1.0 - b1) * gk);
      v[k] = static_cast<T>(b2 * v[k] + (1.0 - b2) * gk * gk);
      const double update = options_.lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + options_.eps);
      w[k] = static_cast<T>(w[k] - update);
    }
    if (!w.all_finite()) throw NumericError("non-finite parameter after update: " + params_[i].name);
  }
}

template <typename T>
void Adam<T>::restore(std::int64_t t, std::vector<Tensor<T>> m, std::vector<Tensor<T>> v) {
  if (m.size() != params_.size() || v.size() != params_.size()) {
    throw CheckpointError("optimizer state has " + std::to_string(m.size()) + " slots, expected " +
                          std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (!(m[i].shape() == params_[i].var.shape()) || !(v[i].shape() == params_[i].var.shape())) {
      throw CheckpointError("optimizer state shape mismatch for " + params_[i].name);
    }
  }
  t_ = t;
  m_ = std::move(m);
  v_ = std::move(v);
}

template class Adam<float>;
template class Adam<double>;

}  // namespace skygan::nn
