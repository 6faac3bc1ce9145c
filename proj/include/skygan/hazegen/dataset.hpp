// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skygan/hazegen/haze.hpp"
#include "skygan/imagecore/image.hpp"

namespace skygan::haze {

/// One clean/hazy pair on disk. Paths are relative to the manifest directory.
struct ManifestRecord {
  std::string clean_path;
  std::string hazy_path;
  int level = 1;
  std::string source_id;

  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

struct DatasetManifest {
  std::string name;
  std::uint64_t seed = 0;
  int tile = 0;
  int stride = 0;
  std::vector<HazeLevelParams> levels;
  std::vector<ManifestRecord> pairs;
  /// Directory the relative record paths resolve against. Not serialized.
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& rel) const { return base_dir / rel; }
};

nlohmann::json to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Loads both images of every record.
image::DatasetPair load_pair(const DatasetManifest& manifest, const ManifestRecord& record);

inline constexpr const char* kManifestFile = "manifest.json";

struct BuildOptions {
  std::set<int> levels{1, 2, 3, 4, 5};
  int tile = 500;
  int stride = 500;
  std::uint64_t seed = 0;
  std::string name = "hai-synthetic";
};

/// Seed for one (source, tile, level) composite.
std::uint64_t tile_seed(std::uint64_t global_seed, const std::string& source_id, int tile_index,
                        int level);

/// Tiles every PNG in `src_dir` (sorted by filename) and writes
///   out_dir/clean/<stem>_tNNNN.png
///   out_dir/hazy/<stem>_tNNNN_L<level>.png
///   out_dir/manifest.json
/// using the default level table.
DatasetManifest build_dataset(const std::filesystem::path& src_dir,
                              const std::filesystem::path& out_dir, const BuildOptions& options);

}  // namespace skygan::haze
