// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "skygan/nn/var.hpp"

namespace skygan::nn {

// Layer primitives. All tensors are NCHW.

/// Square-kernel cross-correlation with zero padding. `weight` is
/// Cout x Cin x k x k; `bias` (Cout) may be undefined.
template <typename T>
Var<T> conv2d(const Var<T>& x, const Var<T>& weight, const Var<T>& bias, int stride, int pad);

/// Per-sample, per-channel normalization over H x W (no affine terms).
template <typename T>
Var<T> instance_norm(const Var<T>& x, T eps = T(1e-5));

template <typename T>
Var<T> leaky_relu(const Var<T>& x, T slope);

template <typename T>
Var<T> relu(const Var<T>& x) {
  return leaky_relu(x, T(0));
}

template <typename T>
Var<T> sigmoid(const Var<T>& x);

/// Nearest-neighbour 2x upsampling.
template <typename T>
Var<T> upsample2x(const Var<T>& x);

template <typename T>
Var<T> concat_channels(const Var<T>& a, const Var<T>& b);

template <typename T>
Var<T> slice_channels(const Var<T>& x, int begin, int count);

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b);

/// Fixed per-pixel linear map: out[o] = sum_i mix[o][i] * x[i].
/// `mix` is row-major Cout x Cin.
template <typename T>
Var<T> channel_mix(const Var<T>& x, const std::vector<double>& mix, int out_channels);

/// N x C x H x W -> N x C x 1 x 1.
template <typename T>
Var<T> global_avg_pool(const Var<T>& x);

// Scalar reductions; each returns a 1x1x1x1 Var.

/// mean((a - b)^2)
template <typename T>
Var<T> mse(const Var<T>& a, const Var<T>& b);

/// mean(|a - b|), subgradient 0 at a == b.
template <typename T>
Var<T> l1(const Var<T>& a, const Var<T>& b);

/// mean(log sigmoid(x)), stable for any finite x.
template <typename T>
Var<T> mean_log_sigmoid(const Var<T>& x);

/// mean(log(1 - sigmoid(x))), stable for any finite x.
template <typename T>
Var<T> mean_log1m_sigmoid(const Var<T>& x);

/// mean binary cross-entropy of logits against a constant label.
template <typename T>
Var<T> bce_with_logits(const Var<T>& logits, T label);

/// Weighted sum of scalar Vars: sum_i w_i * terms_i.
template <typename T>
Var<T> weighted_sum(const std::vector<Var<T>>& terms, const std::vector<T>& weights);

template <typename T>
Var<T> operator+(const Var<T>& a, const Var<T>& b) {
  return weighted_sum<T>({a, b}, {T(1), T(1)});
}

template <typename T>
Var<T> scale(const Var<T>& a, T k) {
  return weighted_sum<T>({a}, {k});
}

/// Stable log(sigmoid(x)).
double log_sigmoid(double x);

}  // namespace skygan::nn
