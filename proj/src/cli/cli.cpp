// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/cli/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <ostream>
#include <set>

#include "skygan/common/errors.hpp"
#include "skygan/evalkit/fixtures.hpp"
#include "skygan/hazegen/dataset.hpp"
#include "skygan/hazegen/haze.hpp"
#include "skygan/i2i/i2i.hpp"
#include "skygan/imagecore/image.hpp"
#include "skygan/orchestrator/train.hpp"

namespace skygan::cli {
namespace fs = std::filesystem;

namespace {

// "1..5", "2,4" or "1..3,5".
std::set<int> parse_levels(const std::string& text) {
  std::set<int> out;
  std::size_t pos = 0;
  auto number = [&](const std::string& s) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ArgumentError("bad level list '" + text + "'");
    return v;
  };
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t dots = item.find("..");
    const int lo = number(dots == std::string::npos ? item : item.substr(0, dots));
    const int hi = dots == std::string::npos ? lo : number(item.substr(dots + 2));
    if (lo > hi) throw ArgumentError("bad level range '" + item + "'");
    for (int l = lo; l <= hi; ++l) {
      if (l < 1 || l > 5) throw ArgumentError("haze levels must be within 1..5");
      out.insert(l);
    }
    pos = comma + 1;
  }
  return out;
}

void write_png(const image::ImageTensor& img, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  image::save_image(img, path);
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  const char* env = std::getenv("SKYGAN_SEED");
  if (!env || !*env) return 0;
  std::uint64_t v = 0;
  const std::string s(env);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ArgumentError("SKYGAN_SEED is not an unsigned integer");
  return v;
}

eval::Dehazer load_dehazer(const std::string& model) {
  if (model == kIdentityModel) {
    return [](const image::ImageTensor& x) { return x; };
  }
  auto pipeline = std::make_shared<i2i::Pipeline<float>>(train::load_model_dir(model));
  return [pipeline](const image::ImageTensor& x) { return i2i::dehaze(*pipeline, x).dehazed; };
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aerial image dehazing with hyperspectral catalysts", "skygan"};
  app.require_subcommand(1);

  // synthesize
  std::string syn_in, syn_out;
  int syn_level = 1;
  std::optional<std::uint64_t> syn_seed;
  auto* syn = app.add_subcommand("synthesize", "Composite fractal haze over one clean image");
  syn->add_option("--in", syn_in, "Clean RGB PNG")->required();
  syn->add_option("--out", syn_out, "Hazy PNG to write")->required();
  syn->add_option("--level", syn_level, "Haze level 1..5")->check(CLI::Range(1, 5));
  syn->add_option("--seed", syn_seed, "Seed (default SKYGAN_SEED or 0)");

  // build-dataset
  std::string bd_src, bd_out, bd_levels = "1..5", bd_name = "hai-synthetic";
  int bd_tile = 500, bd_stride = 500;
  std::optional<std::uint64_t> bd_seed;
  auto* bd = app.add_subcommand("build-dataset", "Tile clean images and composite every haze level");
  bd->add_option("--src", bd_src, "Directory of clean RGB PNGs")->required();
  bd->add_option("--out", bd_out, "Output dataset directory")->required();
  bd->add_option("--levels", bd_levels, "Levels, e.g. 1..5 or 2,4");
  bd->add_option("--tile", bd_tile, "Tile side in pixels")->check(CLI::PositiveNumber);
  bd->add_option("--stride", bd_stride, "Tile stride in pixels")->check(CLI::PositiveNumber);
  bd->add_option("--seed", bd_seed, "Seed (default SKYGAN_SEED or 0)");
  bd->add_option("--name", bd_name, "Dataset name recorded in the manifest");

  // train
  std::string tr_config;
  bool tr_resume = false, tr_quiet = false;
  auto* tr = app.add_subcommand("train", "Run the staged training schedule");
  tr->add_option("--config", tr_config, "Run config JSON")->required();
  tr->add_flag("--resume", tr_resume, "Continue from checkpoints in the config's checkpoint_dir");
  tr->add_flag("--quiet", tr_quiet, "No progress output");

  // dehaze
  std::string dh_model, dh_in, dh_out, dh_dump;
  auto* dh = app.add_subcommand("dehaze", "Dehaze one image");
  dh->add_option("--model", dh_model, "Checkpoint directory or builtin:identity")->required();
  dh->add_option("--in", dh_in, "Hazy RGB PNG")->required();
  dh->add_option("--out", dh_out, "Dehazed PNG to write")->required();
  dh->add_option("--dump-intermediates", dh_dump, "Directory for spanned/cube (.hsc) and catalyst (.png)");

  // evaluate
  std::string ev_model, ev_manifest, ev_out;
  auto* ev = app.add_subcommand("evaluate", "Score a model on a dataset manifest");
  ev->add_option("--model", ev_model, "Checkpoint directory or builtin:identity")->required();
  ev->add_option("--manifest", ev_manifest, "Dataset manifest.json")->required();
  ev->add_option("--out", ev_out, "Report stem; writes <stem>.json and <stem>.txt")->required();

  // fixtures
  std::string fx_out;
  int fx_count = 1, fx_h = 64, fx_w = 64;
  std::optional<std::uint64_t> fx_seed;
  auto* fx = app.add_subcommand("fixtures", "Generate synthetic spectral cubes");
  fx->add_option("--count", fx_count, "Number of cubes")->check(CLI::PositiveNumber);
  fx->add_option("--seed", fx_seed, "Seed (default SKYGAN_SEED or 0)");
  fx->add_option("--out", fx_out, "Output directory")->required();
  fx->add_option("--height", fx_h, "Cube height")->check(CLI::PositiveNumber);
  fx->add_option("--width", fx_w, "Cube width")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (*syn) {
      const auto clean = image::load_image(syn_in);
      const auto hazy = haze::synthesize_hazy(clean, haze::default_level(syn_level), resolve_seed(syn_seed));
      write_png(hazy, syn_out);
      out << "wrote " << syn_out << "\n";
    } else if (*bd) {
      haze::BuildOptions o;
      o.levels = parse_levels(bd_levels);
      o.tile = bd_tile;
      o.stride = bd_stride;
      o.seed = resolve_seed(bd_seed);
      o.name = bd_name;
      const auto m = haze::build_dataset(bd_src, bd_out, o);
      out << "wrote " << m.pairs.size() << " pairs to " << bd_out << "\n";
    } else if (*tr) {
      const train::RunConfig config = train::load_config(tr_config, resolve_seed(std::nullopt));
      train::TrainOptions o;
      o.resume = tr_resume;
      o.progress = tr_quiet ? nullptr : &out;
      train::run(config, o);
      out << "checkpoints in " << config.checkpoint_dir.string() << "\n";
    } else if (*dh) {
      const auto x = image::load_image(dh_in);
      i2i::DehazeResult r;
      if (dh_model == kIdentityModel) {
        r = i2i::dehaze(i2i::identity_pipeline<float>(), x, !dh_dump.empty());
      } else {
        r = i2i::dehaze(train::load_model_dir(dh_model), x, !dh_dump.empty());
      }
      write_png(r.dehazed, dh_out);
      if (!dh_dump.empty()) {
        fs::create_directories(dh_dump);
        eval::save_cube(*r.spanned, fs::path(dh_dump) / "spanned.hsc");
        eval::save_cube(*r.cube, fs::path(dh_dump) / "cube.hsc");
        write_png(*r.catalyst, fs::path(dh_dump) / "catalyst.png");
      }
      out << "wrote " << dh_out << "\n";
    } else if (*ev) {
      const auto manifest = haze::load_manifest(ev_manifest);
      const auto report = eval::evaluate(manifest, load_dehazer(ev_model), ev_model);
      eval::write_report(report, ev_out);
      out << eval::to_text(report);
    } else if (*fx) {
      fs::create_directories(fx_out);
      const auto fixtures = eval::make_spectral_fixtures(fx_count, fx_h, fx_w, resolve_seed(fx_seed));
      for (std::size_t i = 0; i < fixtures.size(); ++i) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "fixture_%04zu", i);
        eval::save_cube(fixtures[i].cube, fs::path(fx_out) / (std::string(stem) + ".hsc"));
        write_png(fixtures[i].rgb, fs::path(fx_out) / (std::string(stem) + ".png"));
      }
      out << "wrote " << fixtures.size() << " cubes to " << fx_out << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorCategory::kIo);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace skygan::cli
