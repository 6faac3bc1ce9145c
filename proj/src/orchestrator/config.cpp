// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/orchestrator/config.hpp"

#include <fstream>

#include "skygan/common/errors.hpp"

namespace skygan::train {
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

StageConfig stage_from_json(const json& j, StageConfig s) {
  s.steps = j.value("steps", s.steps);
  s.batch = j.value("batch", s.batch);
  s.lr = j.value("lr", s.lr);
  return s;
}

json stage_json(const StageConfig& s) { return {{"steps", s.steps}, {"batch", s.batch}, {"lr", s.lr}}; }

}  // namespace

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::kH2H: return "h2h";
    case Stage::kHSC: return "hsc";
    case Stage::kI2I: return "i2i";
  }
  return "?";
}

Stage stage_from_name(const std::string& name) {
  if (name == "h2h") return Stage::kH2H;
  if (name == "hsc") return Stage::kHSC;
  if (name == "i2i") return Stage::kI2I;
  throw ConfigError("unknown stage '" + name + "' (expected h2h, hsc or i2i)");
}

const StageConfig& RunConfig::stage(Stage s) const {
  switch (s) {
    case Stage::kH2H: return h2h;
    case Stage::kHSC: return hsc;
    case Stage::kI2I: return i2i;
  }
  return h2h;
}

RunConfig config_from_json(const json& j, std::uint64_t fallback_seed) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  RunConfig c;
  try {
    c.dataset = j.at("dataset").get<std::string>();
    c.checkpoint_dir = j.at("checkpoint_dir").get<std::string>();
    c.seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : fallback_seed;
    c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
    if (j.contains("spectral")) {
      const json& s = j["spectral"];
      c.spectral.fixture_seed = s.value("fixture_seed", c.seed);
      c.spectral.fixture_count = s.value("fixture_count", c.spectral.fixture_count);
      if (s.contains("cube_dir")) c.spectral.cube_dir = s["cube_dir"].get<std::string>();
    } else {
      c.spectral.fixture_seed = c.seed;
    }
    if (j.contains("stages")) {
      c.stages.clear();
      for (const auto& s : j["stages"]) c.stages.push_back(stage_from_name(s.get<std::string>()));
    }
    if (j.contains("h2h")) {
      c.h2h = stage_from_json(j["h2h"], c.h2h);
      if (j["h2h"].contains("model")) c.h2h_model = h2h::h2h_spec_from_json(j["h2h"]["model"]);
    }
    if (j.contains("hsc")) {
      c.hsc = stage_from_json(j["hsc"], c.hsc);
      if (j["hsc"].contains("model")) c.hsc_model = nn::catalyst_spec_from_json(j["hsc"]["model"]);
    }
    if (j.contains("i2i")) {
      c.i2i = stage_from_json(j["i2i"], c.i2i);
      if (j["i2i"].contains("model")) c.i2i_model = i2i::i2i_spec_from_json(j["i2i"]["model"]);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid run config: ") + e.what());
  }
  validate(c);
  return c;
}

json to_json(const RunConfig& c) {
  json stages = json::array();
  for (Stage s : c.stages) stages.push_back(stage_name(s));
  json spectral = {{"fixture_seed", c.spectral.fixture_seed}, {"fixture_count", c.spectral.fixture_count}};
  if (!c.spectral.cube_dir.empty()) spectral["cube_dir"] = c.spectral.cube_dir.string();
  json h2h = stage_json(c.h2h);
  h2h["model"] = h2h::to_json(c.h2h_model);
  json hsc = stage_json(c.hsc);
  hsc["model"] = nn::to_json(c.hsc_model);
  json i2i = stage_json(c.i2i);
  i2i["model"] = i2i::to_json(c.i2i_model);
  return {{"dataset", c.dataset.string()},
          {"checkpoint_dir", c.checkpoint_dir.string()},
          {"seed", c.seed},
          {"checkpoint_every", c.checkpoint_every},
          {"spectral", spectral},
          {"stages", stages},
          {"h2h", h2h},
          {"hsc", hsc},
          {"i2i", i2i}};
}

RunConfig load_config(const fs::path& path, std::uint64_t fallback_seed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open run config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("run config " + path.string() + " is not valid JSON: " + e.what());
  }
  RunConfig c = config_from_json(j, fallback_seed);
  return c;
}

void validate(const RunConfig& c) {
  if (c.stages.empty()) throw ConfigError("stage list is empty");
  for (std::size_t i = 1; i < c.stages.size(); ++i) {
    if (static_cast<int>(c.stages[i]) <= static_cast<int>(c.stages[i - 1])) {
      throw ConfigError("stage list must be an ordered subsequence of [h2h, hsc, i2i]");
    }
  }
  for (Stage s : c.stages) {
    const StageConfig& sc = c.stage(s);
    const std::string n = stage_name(s);
    if (sc.steps < 1) throw ConfigError(n + ".steps must be >= 1");
    if (sc.batch < 1) throw ConfigError(n + ".batch must be >= 1");
    if (!(sc.lr >= 0)) throw ConfigError(n + ".lr must be >= 0");
  }
  if (c.checkpoint_every < 0) throw ConfigError("checkpoint_every must be >= 0");
  if (c.checkpoint_dir.empty()) throw ConfigError("checkpoint_dir is required");
  if (!fs::is_regular_file(c.dataset)) throw ConfigError("dataset manifest not found: " + c.dataset.string());
  if (!c.spectral.cube_dir.empty() && !fs::is_directory(c.spectral.cube_dir)) {
    throw ConfigError("spectral cube directory not found: " + c.spectral.cube_dir.string());
  }
  if (c.spectral.cube_dir.empty() && c.spectral.fixture_count < 1) {
    throw ConfigError("spectral.fixture_count must be >= 1");
  }
}

}  // namespace skygan::train
