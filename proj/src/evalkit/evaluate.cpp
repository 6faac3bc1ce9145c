// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/evalkit/evaluate.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "skygan/common/errors.hpp"

namespace skygan::eval {
using nlohmann::json;

namespace {

json metric_json(const MetricPair& m) { return {{"psnr", m.psnr}, {"ssim", m.ssim}}; }

json aggregate_json(const Aggregate& a) {
  return {{"count", a.count}, {"dehazed", metric_json(a.dehazed)}, {"original", metric_json(a.original)}};
}

void accumulate(Aggregate& a, const EvalRow& r) {
  ++a.count;
  a.dehazed.psnr += r.dehazed.psnr;
  a.dehazed.ssim += r.dehazed.ssim;
  a.original.psnr += r.original.psnr;
  a.original.ssim += r.original.ssim;
}

void finish(Aggregate& a) {
  if (a.count == 0) return;
  const double n = a.count;
  a.dehazed.psnr /= n;
  a.dehazed.ssim /= n;
  a.original.psnr /= n;
  a.original.ssim /= n;
}

std::string line(const char* group, const std::string& level, int n, const MetricPair& d, const MetricPair& o) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-28s %5s %4d | %7.4f %8.3f | %7.4f %8.3f\n", group, level.c_str(), n, d.ssim,
                d.psnr, o.ssim, o.psnr);
  return buf;
}

}  // namespace

void aggregate(EvalReport& report) {
  report.per_level.clear();
  report.overall = Aggregate{};
  for (const auto& r : report.rows) {
    accumulate(report.per_level[r.level], r);
    accumulate(report.overall, r);
  }
  for (auto& [level, a] : report.per_level) finish(a);
  finish(report.overall);
}

EvalReport evaluate(const haze::DatasetManifest& manifest, const Dehazer& dehazer, const std::string& model_name) {
  EvalReport report;
  report.model = model_name;
  report.dataset = manifest.name;
  for (const auto& rec : manifest.pairs) {
    image::DatasetPair pair;
    try {
      pair = haze::load_pair(manifest, rec);
    } catch (const IoError&) {
      report.missing.push_back(rec.hazy_path);
      continue;
    } catch (const DecodeError&) {
      report.missing.push_back(rec.hazy_path);
      continue;
    }
    const image::ImageTensor out = dehazer(pair.hazy);
    if (!out.same_shape(pair.clean)) throw ShapeError("dehazer changed the shape of " + rec.hazy_path);
    report.rows.push_back({rec.source_id, rec.level, score(out, pair.clean), score(pair.hazy, pair.clean)});
  }
  if (!report.missing.empty()) {
    std::cerr << "warning: " << report.missing.size() << " pair(s) skipped (missing or unreadable):\n";
    for (const auto& m : report.missing) std::cerr << "  " << m << "\n";
  }
  aggregate(report);
  return report;
}

json to_json(const EvalReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"source_id", r.source_id},
                    {"level", r.level},
                    {"dehazed", metric_json(r.dehazed)},
                    {"original", metric_json(r.original)}});
  }
  json levels = json::object();
  for (const auto& [level, a] : report.per_level) levels[std::to_string(level)] = aggregate_json(a);
  return {{"model", report.model},     {"dataset", report.dataset},
          {"rows", rows},              {"per_level", levels},
          {"overall", aggregate_json(report.overall)}, {"missing", report.missing},
          {"warnings", report.missing.size()}};
}

std::string to_text(const EvalReport& report) {
  std::string s = "model: " + report.model + "\ndataset: " + report.dataset + "\n\n";
  char head[160];
  std::snprintf(head, sizeof head, "%-28s %5s %4s | %7s %8s | %7s %8s\n", "pair", "level", "n", "SSIM", "PSNR",
                "SSIM", "PSNR");
  s += std::string(41, ' ') + "dehazed          | Original\n";
  s += head;
  s += std::string(80, '-') + "\n";
  for (const auto& r : report.rows) {
    s += line(r.source_id.c_str(), std::to_string(r.level), 1, r.dehazed, r.original);
  }
  s += std::string(80, '-') + "\n";
  for (const auto& [level, a] : report.per_level) {
    s += line("mean", std::to_string(level), a.count, a.dehazed, a.original);
  }
  s += line("mean", "all", report.overall.count, report.overall.dehazed, report.overall.original);
  if (!report.missing.empty()) s += "\nskipped pairs: " + std::to_string(report.missing.size()) + "\n";
  return s;
}

void write_report(const EvalReport& report, const std::filesystem::path& stem) {
  std::filesystem::path base = stem;
  if (base.extension() == ".json" || base.extension() == ".txt") base.replace_extension();
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::trunc);
    if (!out) throw IoError("cannot write report " + p.string());
    out << text;
    if (!out) throw IoError("cannot write report " + p.string());
  };
  std::filesystem::path json_path = base, text_path = base;
  json_path += ".json";
  text_path += ".txt";
  write(json_path, to_json(report).dump(2) + "\n");
  write(text_path, to_text(report));
}

}  // namespace skygan::eval
