// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/hazegen/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "skygan/common/errors.hpp"
#include "skygan/common/rng.hpp"

namespace skygan::haze {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json level_to_json(const HazeLevelParams& p) {
  return {{"level", p.level},
          {"grid_exponent", p.grid_exponent},
          {"roughness", p.roughness},
          {"density_scale", p.density_scale},
          {"airlight", {p.airlight[0], p.airlight[1], p.airlight[2]}}};
}

HazeLevelParams level_from_json(const json& j) {
  HazeLevelParams p;
  p.level = j.at("level").get<int>();
  p.grid_exponent = j.at("grid_exponent").get<int>();
  p.roughness = j.at("roughness").get<double>();
  p.density_scale = j.at("density_scale").get<double>();
  const auto& a = j.at("airlight");
  p.airlight = {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
  return p;
}

std::string tile_name(const std::string& stem, int tile_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_t%04d", tile_index);
  return stem + buf;
}

}  // namespace

json to_json(const DatasetManifest& manifest) {
  json levels = json::array();
  for (const auto& p : manifest.levels) levels.push_back(level_to_json(p));
  json pairs = json::array();
  for (const auto& r : manifest.pairs) {
    pairs.push_back({{"clean_path", r.clean_path},
                     {"hazy_path", r.hazy_path},
                     {"level", r.level},
                     {"source_id", r.source_id}});
  }
  return {{"name", manifest.name},
          {"seed", manifest.seed},
          {"tile", manifest.tile},
          {"stride", manifest.stride},
          {"levels", levels},
          {"pairs", pairs}};
}

DatasetManifest manifest_from_json(const json& j, const fs::path& base_dir) {
  DatasetManifest m;
  try {
    m.name = j.at("name").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.tile = j.value("tile", 0);
    m.stride = j.value("stride", 0);
    for (const auto& l : j.at("levels")) m.levels.push_back(level_from_json(l));
    for (const auto& r : j.at("pairs")) {
      m.pairs.push_back({r.at("clean_path").get<std::string>(), r.at("hazy_path").get<std::string>(),
                         r.at("level").get<int>(), r.at("source_id").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw DecodeError(std::string("malformed manifest: ") + e.what());
  }
  m.base_dir = base_dir;
  return m;
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << to_json(manifest).dump(2) << '\n';
  if (!out) throw IoError("cannot write manifest " + path.string());
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DecodeError("cannot parse manifest " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j, path.parent_path());
}

image::DatasetPair load_pair(const DatasetManifest& manifest, const ManifestRecord& record) {
  image::DatasetPair pair{image::load_image(manifest.resolve(record.hazy_path)),
                          image::load_image(manifest.resolve(record.clean_path)), record.level,
                          record.source_id};
  image::validate_pair(pair);
  return pair;
}

std::uint64_t tile_seed(std::uint64_t global_seed, const std::string& source_id, int tile_index,
                        int level) {
  return SeedHasher(global_seed)
      .add(source_id)
      .add(static_cast<std::uint64_t>(tile_index))
      .add(static_cast<std::uint64_t>(level))
      .value();
}

DatasetManifest build_dataset(const fs::path& src_dir, const fs::path& out_dir,
                              const BuildOptions& options) {
  if (options.levels.empty()) throw ArgumentError("build_dataset: no haze levels requested");
  for (int level : options.levels) default_level(level);  // validates range

  std::vector<fs::path> sources;
  if (fs::is_directory(src_dir)) {
    for (const auto& entry : fs::directory_iterator(src_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".png") {
        sources.push_back(entry.path());
      }
    }
  }
  if (sources.empty()) throw IoError("no PNG source images in " + src_dir.string());
  std::sort(sources.begin(), sources.end());

  std::error_code ec;
  fs::create_directories(out_dir / "clean", ec);
  fs::create_directories(out_dir / "hazy", ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  DatasetManifest manifest;
  manifest.name = options.name;
  manifest.seed = options.seed;
  manifest.tile = options.tile;
  manifest.stride = options.stride;
  for (int level : options.levels) manifest.levels.push_back(default_level(level));
  manifest.base_dir = out_dir;

  for (const auto& src : sources) {
    const std::string stem = src.stem().string();
    const auto tiles = image::crop_tiles(image::load_image(src), options.tile, options.stride);
    for (int t = 0; t < static_cast<int>(tiles.size()); ++t) {
      const std::string id = tile_name(stem, t);
      const std::string clean_rel = "clean/" + id + ".png";
      image::save_image(tiles[t], out_dir / clean_rel);
      for (const auto& params : manifest.levels) {
        const std::string hazy_rel = "hazy/" + id + "_L" + std::to_string(params.level) + ".png";
        const auto hazy = synthesize_hazy(tiles[t], params, tile_seed(options.seed, stem, t, params.level));
        image::save_image(hazy, out_dir / hazy_rel);
        manifest.pairs.push_back({clean_rel, hazy_rel, params.level, id});
      }
    }
  }
  save_manifest(manifest, out_dir / kManifestFile);
  return manifest;
}

}  // namespace skygan::haze
