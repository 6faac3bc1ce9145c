// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "skygan/h2h/h2h.hpp"
#include "skygan/i2i/i2i.hpp"
#include "skygan/orchestrator/config.hpp"

namespace skygan::train {

inline constexpr const char* kLossLog = "loss_log.jsonl";
inline constexpr const char* kConfigCopy = "run_config.json";

/// <dir>/<stage>.ckpt
std::filesystem::path checkpoint_path(const std::filesystem::path& dir, Stage stage);

struct TrainOptions {
  /// Continue from whatever checkpoints the directory holds.
  bool resume = false;
  /// Simulated interruption: save and return right after this step.
  std::optional<std::pair<Stage, std::int64_t>> halt_after;
  /// Progress lines every `log_every` steps; nullptr is silent.
  std::ostream* progress = nullptr;
  int log_every = 50;
};

/// Loss history of the steps executed by this call.
struct TrainSummary {
  std::vector<h2h::LossReport> h2h;
  std::vector<double> hsc;
  std::vector<i2i::I2IReport> i2i;
  bool halted = false;
};

/// Runs the configured stages in order. Every stage checkpoint holds the
/// networks, optimizer moments, step and loss-log offset, so a resumed run
/// is bit-identical to an uninterrupted one. A non-finite loss aborts with
/// NumericError; the last good checkpoint stays on disk.
TrainSummary run(const RunConfig& config, const TrainOptions& options = {});

/// Resumes from the config copy stored in `checkpoint_dir`.
TrainSummary resume(const std::filesystem::path& checkpoint_dir, const TrainOptions& options = {});

/// Loads h2h.ckpt, hsc.ckpt and i2i.ckpt from a checkpoint directory.
i2i::Pipeline<float> load_model_dir(const std::filesystem::path& dir);

/// Least common multiple of the configured networks' size requirements.
int size_multiple(const RunConfig& config);

}  // namespace skygan::train
