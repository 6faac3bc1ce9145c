// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/imagecore/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "skygan/common/errors.hpp"

namespace skygan::image {
namespace {

void check_dims(int height, int width, int channels) {
  if (height < 0 || width < 0 || channels < 0) {
    throw ShapeError("image dimensions must be non-negative");
  }
}

void check_values(const std::vector<double>& data) {
  for (double v : data) {
    if (!std::isfinite(v)) throw NumericError("image contains a non-finite value");
    if (v < 0.0 || v > 1.0) throw ArgumentError("image value outside [0, 1]: " + std::to_string(v));
  }
}

}  // namespace

ImageTensor::ImageTensor(int height, int width, int channels)
    : height_(height), width_(width), channels_(channels) {
  check_dims(height, width, channels);
  data_.assign(static_cast<std::size_t>(height) * width * channels, 0.0);
}

ImageTensor::ImageTensor(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_dims(height, width, channels);
  if (data_.size() != static_cast<std::size_t>(height) * width * channels) {
    throw ShapeError("image data length " + std::to_string(data_.size()) + " != " +
                     std::to_string(height) + "x" + std::to_string(width) + "x" +
                     std::to_string(channels));
  }
  check_values(data_);
}

ImageTensor ImageTensor::clamped(int height, int width, int channels, std::vector<double> data) {
  for (double& v : data) {
    if (!std::isfinite(v)) throw NumericError("image contains a non-finite value");
    v = std::clamp(v, 0.0, 1.0);
  }
  return ImageTensor(height, width, channels, std::move(data));
}

ImageTensor slice_channels(const ImageTensor& img, int begin, int count) {
  if (begin < 0 || count < 0 || begin + count > img.channels()) {
    throw ShapeError("channel slice [" + std::to_string(begin) + ", " +
                     std::to_string(begin + count) + ") out of range for " +
                     std::to_string(img.channels()) + " channels");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(img.height()) * img.width() * count);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      auto px = img.pixel(y, x);
      out.insert(out.end(), px.begin() + begin, px.begin() + begin + count);
    }
  }
  return ImageTensor(img.height(), img.width(), count, std::move(out));
}

ImageTensor concat_channels(const ImageTensor& a, const ImageTensor& b) {
  if (!a.same_dims(b)) {
    throw ShapeError("concat_channels: spatial dimensions differ");
  }
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      auto pa = a.pixel(y, x);
      auto pb = b.pixel(y, x);
      out.insert(out.end(), pa.begin(), pa.end());
      out.insert(out.end(), pb.begin(), pb.end());
    }
  }
  return ImageTensor(a.height(), a.width(), a.channels() + b.channels(), std::move(out));
}

ImageTensor crop(const ImageTensor& img, int y0, int x0, int h, int w) {
  if (y0 < 0 || x0 < 0 || h < 0 || w < 0 || y0 + h > img.height() || x0 + w > img.width()) {
    throw ShapeError("crop window outside image");
  }
  const int c = img.channels();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(h) * w * c);
  for (int y = 0; y < h; ++y) {
    auto row = img.data().subspan(img.index(y0 + y, x0, 0), static_cast<std::size_t>(w) * c);
    out.insert(out.end(), row.begin(), row.end());
  }
  return ImageTensor(h, w, c, std::move(out));
}

void validate_pair(const DatasetPair& pair) {
  if (pair.hazy.channels() != 3 || pair.clean.channels() != 3) {
    throw ShapeError("dataset pair images must be 3-channel");
  }
  if (!pair.hazy.same_dims(pair.clean)) {
    throw ShapeError("dataset pair " + pair.source_id + ": hazy and clean dimensions differ");
  }
  if (pair.haze_level < 1 || pair.haze_level > 5) {
    throw ArgumentError("haze level must be in 1..5, got " + std::to_string(pair.haze_level));
  }
}

unsigned char quantize(double v) {
  const double scaled = std::floor(v * 255.0 + 0.5);
  return static_cast<unsigned char>(std::clamp(scaled, 0.0, 255.0));
}

ImageTensor load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("no such image file: " + path.string());
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    std::string msg = png.message;
    png_image_free(&png);
    throw DecodeError("cannot decode " + path.string() + ": " + msg);
  }
  if ((png.format & ~PNG_FORMAT_FLAG_COLORMAP) != PNG_FORMAT_RGB) {
    png_image_free(&png);
    throw DecodeError("not an 8-bit RGB raster: " + path.string());
  }
  png.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> bytes(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, bytes.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw DecodeError("cannot decode " + path.string() + ": " + msg);
  }
  std::vector<double> data(bytes.size());
  std::transform(bytes.begin(), bytes.end(), data.begin(),
                 [](unsigned char b) { return static_cast<double>(b) / 255.0; });
  return ImageTensor(static_cast<int>(png.height), static_cast<int>(png.width), 3,
                     std::move(data));
}

void save_image(const ImageTensor& img, const std::filesystem::path& path) {
  if (img.channels() != 3) {
    throw ShapeError("save_image expects 3 channels, got " + std::to_string(img.channels()));
  }
  std::vector<unsigned char> bytes(img.size());
  std::transform(img.data().begin(), img.data().end(), bytes.begin(), quantize);

  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width());
  png.height = static_cast<png_uint_32>(img.height());
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, bytes.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw IoError("cannot write " + path.string() + ": " + msg);
  }
}

std::vector<int> tile_offsets(int extent, int tile, int stride) {
  if (tile < 1 || stride < 1) throw ArgumentError("tile and stride must be >= 1");
  if (tile > extent) {
    throw ShapeError("tile " + std::to_string(tile) + " larger than extent " +
                     std::to_string(extent));
  }
  std::vector<int> out;
  int off = 0;
  for (; off + tile <= extent; off += stride) out.push_back(off);
  if (out.back() + tile < extent) out.push_back(extent - tile);
  return out;
}

std::vector<ImageTensor> crop_tiles(const ImageTensor& img, int tile, int stride) {
  if (tile > std::min(img.height(), img.width())) {
    throw ShapeError("tile " + std::to_string(tile) + " larger than image " +
                     std::to_string(img.height()) + "x" + std::to_string(img.width()));
  }
  const auto ys = tile_offsets(img.height(), tile, stride);
  const auto xs = tile_offsets(img.width(), tile, stride);
  std::vector<ImageTensor> tiles;
  tiles.reserve(ys.size() * xs.size());
  for (int y : ys) {
    for (int x : xs) tiles.push_back(crop(img, y, x, tile, tile));
  }
  return tiles;
}

}  // namespace skygan::image
