// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace skygan::image {

/// H x W x C plane stack, row-major and channel-last, every value finite and
/// in [0, 1]. Values are immutable once constructed; build a vector first and
/// hand it over.
class ImageTensor {
 public:
  ImageTensor() = default;

  /// All-zero image.
  ImageTensor(int height, int width, int channels);

  /// Takes ownership of `data`. Throws ShapeError on a length mismatch and
  /// ArgumentError on any value that is non-finite or outside [0, 1].
  ImageTensor(int height, int width, int channels, std::vector<double> data);

  /// Same as the data constructor but clamps into [0, 1] first. Non-finite
  /// values still throw.
  static ImageTensor clamped(int height, int width, int channels, std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }
  double at(int y, int x, int c) const { return data_[index(y, x, c)]; }
  std::span<const double> pixel(int y, int x) const {
    return {data_.data() + index(y, x, 0), static_cast<std::size_t>(channels_)};
  }
  std::span<const double> data() const { return data_; }

  bool same_dims(const ImageTensor& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool same_shape(const ImageTensor& other) const {
    return same_dims(other) && channels_ == other.channels_;
  }

  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Channels [begin, begin + count).
ImageTensor slice_channels(const ImageTensor& img, int begin, int count);

/// Channel-wise concatenation; spatial dimensions must match.
ImageTensor concat_channels(const ImageTensor& a, const ImageTensor& b);

/// Sub-window [y0, y0 + h) x [x0, x0 + w).
ImageTensor crop(const ImageTensor& img, int y0, int x0, int h, int w);

/// A hazy/clean training or evaluation pair.
struct DatasetPair {
  ImageTensor hazy;
  ImageTensor clean;
  int haze_level = 1;
  std::string source_id;
};

/// Throws unless both images are 3-channel with equal dims and the level is 1..5.
void validate_pair(const DatasetPair& pair);

/// Reads an 8-bit RGB PNG; every value is byte / 255.
ImageTensor load_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG with byte = floor(v * 255 + 0.5), clamped to [0, 255].
void save_image(const ImageTensor& img, const std::filesystem::path& path);

/// Round-half-up quantization used by save_image.
unsigned char quantize(double v);

/// Window origins along one axis: 0, stride, 2*stride, ... plus a final window
/// flush to the far edge when the stride sequence stops short of it.
std::vector<int> tile_offsets(int extent, int tile, int stride);

/// All tile x tile windows, row-major by (y offset, x offset).
std::vector<ImageTensor> crop_tiles(const ImageTensor& img, int tile, int stride);

}  // namespace skygan::image
