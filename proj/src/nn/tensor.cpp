// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "skygan/common/errors.hpp"

namespace skygan::nn {

std::string Shape::str() const {
  return std::to_string(n) + "x" + std::to_string(c) + "x" + std::to_string(h) + "x" +
         std::to_string(w);
}

template <typename T>
Tensor<T>::Tensor(Shape shape, std::vector<T> data) : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.numel()) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) + " != " + shape_.str());
  }
}

template <typename T>
void Tensor<T>::fill(T v) {
  std::fill(data_.begin(), data_.end(), v);
}

template <typename T>
T Tensor<T>::item() const {
  if (data_.size() != 1) throw ShapeError("item() on tensor of shape " + shape_.str());
  return data_[0];
}

template <typename T>
bool Tensor<T>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
}

template <typename T>
Tensor<T> to_tensor(std::span<const image::ImageTensor> images) {
  if (images.empty()) throw ShapeError("to_tensor: empty batch");
  const auto& first = images.front();
  Tensor<T> out(Shape{static_cast<int>(images.size()), first.channels(), first.height(), first.width()});
  for (int n = 0; n < static_cast<int>(images.size()); ++n) {
    const auto& img = images[n];
    if (!img.same_shape(first)) throw ShapeError("to_tensor: batch images differ in shape");
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        auto px = img.pixel(y, x);
        for (int c = 0; c < img.channels(); ++c) out.at(n, c, y, x) = static_cast<T>(px[c]);
      }
    }
  }
  return out;
}

template <typename T>
image::ImageTensor to_image(const Tensor<T>& t, int n) {
  const Shape& s = t.shape();
  if (n < 0 || n >= s.n) throw ShapeError("to_image: batch index out of range");
  std::vector<double> data(static_cast<std::size_t>(s.h) * s.w * s.c);
  std::size_t i = 0;
  for (int y = 0; y < s.h; ++y) {
    for (int x = 0; x < s.w; ++x) {
      for (int c = 0; c < s.c; ++c) data[i++] = static_cast<double>(t.at(n, c, y, x));
    }
  }
  return image::ImageTensor::clamped(s.h, s.w, s.c, std::move(data));
}

template <typename T>
std::uint64_t hash_bytes(const Tensor<T>& t, std::uint64_t seed) {
  std::uint64_t h = seed;
  const auto* bytes = reinterpret_cast<const unsigned char*>(t.data());
  for (std::size_t i = 0; i < t.numel() * sizeof(T); ++i) {
    h ^= bytes[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

#define SKYGAN_INSTANTIATE(T)                                                        \
  template class Tensor<T>;                                                          \
  template Tensor<T> to_tensor<T>(std::span<const image::ImageTensor>);              \
  template image::ImageTensor to_image<T>(const Tensor<T>&, int);                    \
  template std::uint64_t hash_bytes<T>(const Tensor<T>&, std::uint64_t);
SKYGAN_INSTANTIATE(float)
SKYGAN_INSTANTIATE(double)
#undef SKYGAN_INSTANTIATE

}  // namespace skygan::nn
