// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skygan/evalkit/metrics.hpp"
#include "skygan/hazegen/dataset.hpp"
#include "skygan/imagecore/image.hpp"

namespace skygan::eval {

/// Hazy RGB in, dehazed RGB of the same size out.
using Dehazer = std::function<image::ImageTensor(const image::ImageTensor&)>;

struct EvalRow {
  std::string source_id;
  int level = 0;
  MetricPair dehazed;
  MetricPair original;  // hazy input scored against the clean target
};

struct Aggregate {
  int count = 0;
  MetricPair dehazed;
  MetricPair original;
};

struct EvalReport {
  std::string model;
  std::string dataset;
  std::vector<EvalRow> rows;
  std::map<int, Aggregate> per_level;
  Aggregate overall;
  std::vector<std::string> missing;  // pairs skipped because a file failed to load
};

/// Means of the rows, per level and overall.
void aggregate(EvalReport& report);

/// Scores every manifest pair. Pairs whose files are missing or unreadable
/// are listed in `missing`, a warning goes to stderr, and evaluation
/// continues with the rest.
EvalReport evaluate(const haze::DatasetManifest& manifest, const Dehazer& dehazer, const std::string& model_name);

nlohmann::json to_json(const EvalReport& report);
/// Aligned table: one line per row, then per-level means, then overall, each
/// with SSIM | PSNR for the dehazed output and the "Original" hazy input.
std::string to_text(const EvalReport& report);

/// Writes <stem>.json and <stem>.txt (a trailing .json/.txt on `stem` is dropped).
void write_report(const EvalReport& report, const std::filesystem::path& stem);

}  // namespace skygan::eval
