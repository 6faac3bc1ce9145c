// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skygan/h2h/h2h.hpp"
#include "skygan/i2i/i2i.hpp"
#include "skygan/nn/networks.hpp"

namespace skygan::train {

enum class Stage { kH2H, kHSC, kI2I };

const char* stage_name(Stage s);
Stage stage_from_name(const std::string& name);

struct StageConfig {
  std::int64_t steps = 0;
  int batch = 4;
  double lr = 2e-4;
};

/// Where the unpaired spectral cubes come from: generated fixtures (the
/// default) or a directory of .hsc files.
struct SpectralSource {
  std::uint64_t fixture_seed = 0;
  int fixture_count = 8;
  std::filesystem::path cube_dir;  // non-empty selects the directory
};

struct RunConfig {
  std::filesystem::path dataset;  // manifest.json
  SpectralSource spectral;
  std::vector<Stage> stages{Stage::kH2H, Stage::kHSC, Stage::kI2I};
  StageConfig h2h{500, 4, 2e-4};
  StageConfig hsc{300, 4, 2e-4};
  StageConfig i2i{500, 4, 2e-4};
  h2h::H2HSpec h2h_model;
  nn::CatalystNetSpec hsc_model;
  i2i::I2ISpec i2i_model;
  std::uint64_t seed = 0;
  std::filesystem::path checkpoint_dir;
  /// Periodic checkpoint interval in steps; 0 saves only at stage ends.
  std::int64_t checkpoint_every = 100;

  const StageConfig& stage(Stage s) const;
};

/// Parses and validates. `fallback_seed` applies when the document has no
/// "seed". Throws ConfigError on any invalid field.
RunConfig config_from_json(const nlohmann::json& j, std::uint64_t fallback_seed = 0);
nlohmann::json to_json(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path, std::uint64_t fallback_seed = 0);

/// Referenced paths exist, stage list is an ordered subsequence of
/// [h2h, hsc, i2i], numbers are in range.
void validate(const RunConfig& config);

}  // namespace skygan::train
