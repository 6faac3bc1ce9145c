// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skygan/imagecore/image.hpp"

namespace skygan::nn {

/// NCHW extent. Scalars are 1x1x1x1.
struct Shape {
  int n = 1;
  int c = 1;
  int h = 1;
  int w = 1;

  std::size_t numel() const { return static_cast<std::size_t>(n) * c * h * w; }
  std::size_t plane() const { return static_cast<std::size_t>(h) * w; }
  std::string str() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Dense NCHW buffer.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T(0)) : shape_(shape), data_(shape.numel(), fill) {}
  Tensor(Shape shape, std::vector<T> data);

  const Shape& shape() const { return shape_; }
  std::size_t numel() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> span() { return data_; }
  std::span<const T> span() const { return data_; }
  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  T& operator[](std::size_t i) { return data_[i]; }
  T operator[](std::size_t i) const { return data_[i]; }

  std::size_t offset(int n, int c, int y, int x) const {
    return ((static_cast<std::size_t>(n) * shape_.c + c) * shape_.h + y) * shape_.w + x;
  }
  T& at(int n, int c, int y, int x) { return data_[offset(n, c, y, x)]; }
  T at(int n, int c, int y, int x) const { return data_[offset(n, c, y, x)]; }

  void fill(T v);
  /// Only valid for single-element tensors.
  T item() const;
  bool all_finite() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_{0, 0, 0, 0};
  std::vector<T> data_;
};

/// Stacks equally-shaped HWC images into an N x C x H x W tensor.
template <typename T>
Tensor<T> to_tensor(std::span<const image::ImageTensor> images);

template <typename T>
Tensor<T> to_tensor(const image::ImageTensor& img) {
  return to_tensor<T>(std::span<const image::ImageTensor>(&img, 1));
}

/// Batch element `n` back to HWC, clamped into [0, 1]. Non-finite values throw.
template <typename T>
image::ImageTensor to_image(const Tensor<T>& t, int n = 0);

/// FNV-1a over the raw bytes; used to prove parameters did or did not change.
template <typename T>
std::uint64_t hash_bytes(const Tensor<T>& t, std::uint64_t seed = 0xCBF29CE484222325ULL);

}  // namespace skygan::nn
