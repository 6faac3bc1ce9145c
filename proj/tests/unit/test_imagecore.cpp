// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "skygan/common/errors.hpp"
#include "skygan/common/rng.hpp"
#include "skygan/imagecore/image.hpp"
#include "support.hpp"

using namespace skygan;
using image::ImageTensor;

namespace {

ImageTensor random_bytes_image(int h, int w, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> v(static_cast<std::size_t>(h) * w * 3);
  for (double& x : v) x = static_cast<double>(rng.below(256)) / 255.0;
  return ImageTensor(h, w, 3, std::move(v));
}

}  // namespace

TEST_SUITE("imagecore") {

TEST_CASE("construction enforces length and range") {
  CHECK_THROWS_AS(ImageTensor(2, 2, 3, std::vector<double>(11, 0.0)), ShapeError);
  CHECK_THROWS_AS(ImageTensor(1, 1, 1, {1.5}), ArgumentError);
  CHECK_THROWS_AS(ImageTensor(1, 1, 1, {-0.1}), ArgumentError);
  CHECK_THROWS_AS(ImageTensor(1, 1, 1, {std::numeric_limits<double>::quiet_NaN()}), NumericError);
  CHECK_THROWS_AS(ImageTensor::clamped(1, 1, 1, {std::numeric_limits<double>::infinity()}), NumericError);
  const auto c = ImageTensor::clamped(1, 1, 2, {-3.0, 7.0});
  CHECK(c.at(0, 0, 0) == 0.0);
  CHECK(c.at(0, 0, 1) == 1.0);
}

TEST_CASE("quantize rounds half up and clamps") {
  CHECK(image::quantize(1.0) == 255);
  CHECK(image::quantize(0.0) == 0);
  CHECK(image::quantize(0.5) == 128);
  CHECK(image::quantize(127.5 / 255.0) == 128);
  CHECK(image::quantize(2.0) == 255);
}

TEST_CASE("png load gives exact byte / 255") {
  testing::TempDir dir("img");
  const ImageTensor red(1, 1, 3, {1.0, 0.0, 0.0});
  image::save_image(red, dir / "red.png");
  const auto back = image::load_image(dir / "red.png");
  CHECK(back == red);

  image::save_image(ImageTensor(2, 2, 3), dir / "zero.png");
  const auto z = image::load_image(dir / "zero.png");
  CHECK(z.size() == 12);
  for (double v : z.data()) CHECK(v == 0.0);
}

TEST_CASE("save/load round trip is byte exact on 50 random images") {
  testing::TempDir dir("img");
  for (int i = 0; i < 50; ++i) {
    const auto img = random_bytes_image(3 + i % 5, 4 + i % 7, 1000 + i);
    image::save_image(img, dir / "a.png");
    const auto once = image::load_image(dir / "a.png");
    REQUIRE(once == img);
    image::save_image(once, dir / "b.png");
    REQUIRE(testing::read_bytes(dir / "a.png") == testing::read_bytes(dir / "b.png"));
  }
}

TEST_CASE("save then load is idempotent after the first quantization") {
  testing::TempDir dir("img");
  const auto img = testing::random_image(9, 13, 3, 3);
  image::save_image(img, dir / "a.png");
  const auto q1 = image::load_image(dir / "a.png");
  image::save_image(q1, dir / "b.png");
  CHECK(image::load_image(dir / "b.png") == q1);
  for (std::size_t i = 0; i < img.size(); ++i) CHECK(std::abs(q1.data()[i] - img.data()[i]) <= 0.5 / 255 + 1e-12);
}

TEST_CASE("image io errors") {
  testing::TempDir dir("img");
  CHECK_THROWS_AS(image::load_image(dir / "missing.png"), IoError);
  {
    std::ofstream(dir / "junk.png") << "definitely not a png";
  }
  try {
    image::load_image(dir / "junk.png");
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(std::string(e.what()).find("junk.png") != std::string::npos);
  }
  CHECK_THROWS_AS(image::save_image(ImageTensor(2, 2, 1), dir / "g.png"), ShapeError);
  CHECK_THROWS_AS(image::save_image(ImageTensor(2, 2, 3), dir / "no" / "such" / "dir" / "x.png"), IoError);
}

TEST_CASE("tile counts") {
  CHECK(image::crop_tiles(ImageTensor(500, 500, 3), 500, 500).size() == 1);
  CHECK(image::crop_tiles(ImageTensor(1000, 1000, 3), 500, 500).size() == 4);
  CHECK_THROWS_AS(image::crop_tiles(ImageTensor(100, 100, 3), 200, 50), ShapeError);
}

TEST_CASE("tile offsets follow the enumeration oracle") {
  // 0, s, 2s, ... while the window fits, plus a flush window at the edge.
  auto oracle = [](int extent, int tile, int stride) {
    std::vector<int> v;
    int o = 0;
    for (; o + tile <= extent; o += stride) v.push_back(o);
    if (v.back() + tile < extent) v.push_back(extent - tile);
    return v;
  };
  CHECK(image::tile_offsets(5000, 500, 250).size() == 19);
  for (int extent : {500, 501, 777, 1000, 5000})
    for (int tile : {100, 250, 500})
      for (int stride : {1, 37, 100, 250, 500}) {
        if (tile > extent || (extent - tile) / stride > 5000) continue;
        REQUIRE(image::tile_offsets(extent, tile, stride) == oracle(extent, tile, stride));
      }
}

TEST_CASE("tiles cover every pixel and have the tile shape") {
  std::vector<double> v(37 * 29 * 3);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 255) / 255;
  const ImageTensor img(37, 29, 3, v);
  const auto ys = image::tile_offsets(37, 10, 7), xs = image::tile_offsets(29, 10, 7);
  const auto tiles = image::crop_tiles(img, 10, 7);
  REQUIRE(tiles.size() == ys.size() * xs.size());
  std::vector<int> hit(37 * 29, 0);
  std::size_t t = 0;
  for (int oy : ys)
    for (int ox : xs) {
      const auto& tile = tiles[t++];
      REQUIRE(tile.height() == 10);
      REQUIRE(tile.width() == 10);
      CHECK(tile.at(3, 4, 1) == img.at(oy + 3, ox + 4, 1));
      for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) hit[(oy + y) * 29 + ox + x] = 1;
    }
  for (int h : hit) REQUIRE(h == 1);
}

TEST_CASE("channel helpers") {
  const auto a = testing::random_image(4, 5, 3, 1);
  const auto b = testing::random_image(4, 5, 2, 2);
  const auto ab = image::concat_channels(a, b);
  CHECK(ab.channels() == 5);
  CHECK(image::slice_channels(ab, 0, 3) == a);
  CHECK(image::slice_channels(ab, 3, 2) == b);
  CHECK_THROWS_AS(image::slice_channels(ab, 4, 2), ShapeError);
  CHECK_THROWS_AS(image::concat_channels(a, testing::random_image(4, 6, 1, 0)), ShapeError);
  const auto c = image::crop(a, 1, 2, 2, 3);
  CHECK(c.at(1, 2, 0) == a.at(2, 4, 0));
  CHECK_THROWS_AS(image::crop(a, 3, 0, 2, 2), ShapeError);
}

TEST_CASE("dataset pair validation") {
  image::DatasetPair p{ImageTensor(4, 4, 3), ImageTensor(4, 4, 3), 3, "s"};
  CHECK_NOTHROW(image::validate_pair(p));
  p.haze_level = 6;
  CHECK_THROWS_AS(image::validate_pair(p), ArgumentError);
  p.haze_level = 1;
  p.clean = ImageTensor(4, 5, 3);
  CHECK_THROWS_AS(image::validate_pair(p), ShapeError);
}

}
