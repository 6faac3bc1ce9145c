// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/orchestrator/train.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>

#include "skygan/colorcue/color.hpp"
#include "skygan/common/errors.hpp"
#include "skygan/common/rng.hpp"
#include "skygan/evalkit/fixtures.hpp"
#include "skygan/hazegen/dataset.hpp"
#include "skygan/hsc/hsc.hpp"
#include "skygan/nn/checkpoint.hpp"

namespace skygan::train {
namespace fs = std::filesystem;
using nlohmann::json;
using F = float;
using Tens = nn::Tensor<F>;

namespace {

// --- data ---------------------------------------------------------------------

struct Data {
  std::vector<image::ImageTensor> hazy;  // padded to the size multiple
  std::vector<Tens> x_spanned;
  std::vector<Tens> y;
  int height = 0;  // padded
  int width = 0;
  int pad_h = 0;
  int pad_w = 0;
};

Data load_data(const RunConfig& config, int multiple) {
  const haze::DatasetManifest manifest = haze::load_manifest(config.dataset);
  if (manifest.pairs.empty()) throw ConfigError("dataset " + config.dataset.string() + " has no pairs");
  Data d;
  for (const auto& rec : manifest.pairs) {
    image::DatasetPair pair = haze::load_pair(manifest, rec);
    if (d.hazy.empty()) {
      d.pad_h = (multiple - pair.hazy.height() % multiple) % multiple;
      d.pad_w = (multiple - pair.hazy.width() % multiple) % multiple;
      d.height = pair.hazy.height() + d.pad_h;
      d.width = pair.hazy.width() + d.pad_w;
    }
    image::ImageTensor hazy = i2i::reflect_pad(pair.hazy, d.pad_h, d.pad_w);
    image::ImageTensor clean = i2i::reflect_pad(pair.clean, d.pad_h, d.pad_w);
    if (hazy.height() != d.height || hazy.width() != d.width) {
      throw ShapeError("training pairs must share one size; " + rec.source_id + " differs");
    }
    d.x_spanned.push_back(nn::to_tensor<F>(color::span_channels(hazy)));
    d.y.push_back(nn::to_tensor<F>(clean));
    d.hazy.push_back(std::move(hazy));
  }
  return d;
}

std::vector<Tens> load_cubes(const RunConfig& config, const Data& d) {
  std::vector<Tens> out;
  if (!config.spectral.cube_dir.empty()) {
    for (const auto& cube : eval::load_cube_dir(config.spectral.cube_dir)) {
      const int ph = d.height - cube.height(), pw = d.width - cube.width();
      if (ph < 0 || pw < 0) {
        throw ShapeError("spectral cube is larger than the training images (" + std::to_string(cube.height()) + "x" +
                         std::to_string(cube.width()) + ")");
      }
      out.push_back(nn::to_tensor<F>(i2i::reflect_pad(cube, ph, pw)));
    }
  } else {
    for (const auto& f : eval::make_spectral_fixtures(config.spectral.fixture_count, d.height, d.width,
                                                      config.spectral.fixture_seed)) {
      out.push_back(nn::to_tensor<F>(f.cube));
    }
  }
  return out;
}

Tens stack(const std::vector<Tens>& items, const std::vector<std::size_t>& idx) {
  const nn::Shape s = items[idx.front()].shape();
  Tens out(nn::Shape{static_cast<int>(idx.size()), s.c, s.h, s.w});
  F* dst = out.data();
  for (std::size_t i : idx) {
    if (!(items[i].shape() == s)) throw ShapeError("batch items differ in shape");
    dst = std::copy(items[i].data(), items[i].data() + items[i].numel(), dst);
  }
  return out;
}

// Sample positions step*batch .. step*batch+batch-1 of an endless sequence of
// seeded permutations. Stateless, so resuming needs nothing but the step.
std::vector<std::size_t> batch_indices(std::uint64_t seed, const char* tag, std::int64_t step, int batch,
                                       std::size_t n) {
  std::vector<std::size_t> out;
  std::vector<std::size_t> perm;
  std::uint64_t cached = ~0ULL;
  for (int i = 0; i < batch; ++i) {
    const std::uint64_t pos = static_cast<std::uint64_t>(step) * batch + i;
    const std::uint64_t epoch = pos / n;
    if (epoch != cached) {
      perm.resize(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      SplitMix64 rng(SeedHasher(seed).add(tag).add(epoch).value());
      for (std::size_t k = n - 1; k > 0; --k) std::swap(perm[k], perm[rng.below(k + 1)]);
      cached = epoch;
    }
    out.push_back(perm[pos % n]);
  }
  return out;
}

// --- loss log -----------------------------------------------------------------

class LossLog {
 public:
  explicit LossLog(fs::path path) : path_(std::move(path)) {}

  std::uint64_t size() const { return fs::exists(path_) ? fs::file_size(path_) : 0; }

  void truncate(std::uint64_t offset) {
    if (!fs::exists(path_)) {
      if (offset != 0) throw CheckpointError("loss log " + path_.string() + " is missing");
      std::ofstream(path_, std::ios::trunc);
      return;
    }
    if (fs::file_size(path_) < offset) {
      throw CheckpointError("loss log " + path_.string() + " is shorter than the checkpoint expects");
    }
    fs::resize_file(path_, offset);
  }

  std::uint64_t append(const json& row) {
    std::ofstream out(path_, std::ios::app);
    out << row.dump() << '\n';
    if (!out) throw IoError("cannot append to " + path_.string());
    out.close();
    return size();
  }

 private:
  fs::path path_;
};

// --- checkpoints --------------------------------------------------------------

nn::Checkpoint stage_checkpoint(const RunConfig& config, Stage s, std::int64_t step, bool complete,
                                std::uint64_t log_offset) {
  nn::Checkpoint c;
  c.meta["stage"] = stage_name(s);
  c.meta["step"] = step;
  c.meta["steps"] = config.stage(s).steps;
  c.meta["complete"] = complete;
  c.meta["log_offset"] = log_offset;
  c.meta["seed"] = config.seed;
  return c;
}

template <typename Bundle>
std::vector<std::pair<std::string, nn::Module<F>*>> modules_of(Bundle& b);

template <>
std::vector<std::pair<std::string, nn::Module<F>*>> modules_of(h2h::H2HBundle<F>& b) {
  return {{"h2h.gx", b.gx.get()}, {"h2h.gh", b.gh.get()}, {"h2h.dx", b.dx.get()},
          {"h2h.dh", b.dh.get()}, {"h2h.cls", b.cls.get()}};
}

template <>
std::vector<std::pair<std::string, nn::Module<F>*>> modules_of(hsc::HscBundle<F>& b) {
  return {{"hsc.net", b.net.get()}};
}

template <>
std::vector<std::pair<std::string, nn::Module<F>*>> modules_of(i2i::I2IBundle<F>& b) {
  return {{"i2i.gz", b.gz.get()}, {"i2i.dz", b.dz.get()}};
}

// Loads parameters into a bundle freshly built from the config; any
// architecture difference raises SpecMismatchError.
template <typename Bundle>
void restore(const nn::Checkpoint& c, Bundle& b) {
  for (auto& [name, m] : modules_of(b)) nn::load_module_into(c, name, *m);
}

bool is_complete(const nn::Checkpoint& c) { return c.meta.value("complete", false); }

void create_bundle(i2i::Pipeline<F>& p, const RunConfig& config, Stage s) {
  switch (s) {
    case Stage::kH2H: p.h2h = h2h::H2HBundle<F>::create(config.h2h_model, config.seed); break;
    case Stage::kHSC: p.hsc = hsc::HscBundle<F>::create(config.hsc_model, config.seed); break;
    case Stage::kI2I: p.i2i = i2i::I2IBundle<F>::create(config.i2i_model, config.seed); break;
  }
}

void restore_stage(const nn::Checkpoint& c, i2i::Pipeline<F>& p, Stage s) {
  switch (s) {
    case Stage::kH2H: restore(c, p.h2h); break;
    case Stage::kHSC: restore(c, p.hsc); break;
    case Stage::kI2I: restore(c, p.i2i); break;
  }
}

// Frozen upstream stages not trained in this run come from the directory.
void ensure_upstream(i2i::Pipeline<F>& p, const RunConfig& config, Stage s) {
  auto load = [&](Stage up) {
    const fs::path path = checkpoint_path(config.checkpoint_dir, up);
    if (!fs::exists(path)) {
      throw CheckpointError(std::string("stage ") + stage_name(s) + " needs a finished " + stage_name(up) +
                            " checkpoint at " + path.string());
    }
    const nn::Checkpoint c = nn::Checkpoint::load(path);
    if (!is_complete(c)) throw CheckpointError("upstream checkpoint " + path.string() + " is not complete");
    create_bundle(p, config, up);
    restore_stage(c, p, up);
  };
  if (s != Stage::kH2H && !p.h2h.gx) load(Stage::kH2H);
  if (s == Stage::kI2I && !p.hsc.net) load(Stage::kHSC);
}

// --- stage loops --------------------------------------------------------------

struct StageRun {
  const RunConfig& config;
  const TrainOptions& options;
  Stage stage;
  LossLog& log;
  TrainSummary& summary;

  bool halt_at(std::int64_t done) const {
    return options.halt_after && options.halt_after->first == stage && options.halt_after->second == done;
  }

  bool save_due(std::int64_t done) const {
    const std::int64_t every = config.checkpoint_every;
    return done == config.stage(stage).steps || halt_at(done) || (every > 0 && done % every == 0);
  }

  void progress(std::int64_t done, const std::string& text) const {
    if (!options.progress) return;
    const std::int64_t steps = config.stage(stage).steps;
    if (done == 1 || done == steps || (options.log_every > 0 && done % options.log_every == 0)) {
      *options.progress << "[" << stage_name(stage) << "] step " << done << "/" << steps << " " << text << "\n";
    }
  }

  // Runs steps [start, steps); `step_fn(step)` trains one step and returns
  // its log row; `fill` writes bundle and optimizer state into a checkpoint.
  template <typename StepFn, typename Fill>
  bool loop(std::int64_t start, StepFn&& step_fn, Fill&& fill) {
    const std::int64_t steps = config.stage(stage).steps;
    for (std::int64_t step = start; step < steps; ++step) {
      json row;
      try {
        row = step_fn(step);
      } catch (const NumericError& e) {
        throw NumericError(std::string(stage_name(stage)) + " step " + std::to_string(step + 1) + ": " + e.what() +
                           " (last good checkpoint kept)");
      }
      const std::int64_t done = step + 1;
      json line = {{"stage", stage_name(stage)}};
      line.update(row);
      const std::uint64_t offset = log.append(line);
      if (save_due(done)) {
        nn::Checkpoint c = stage_checkpoint(config, stage, done, done == steps, offset);
        fill(c);
        c.save(checkpoint_path(config.checkpoint_dir, stage));
      }
      progress(done, row.dump());
      if (halt_at(done)) {
        summary.halted = true;
        return false;
      }
    }
    return true;
  }
};

}  // namespace

fs::path checkpoint_path(const fs::path& dir, Stage stage) { return dir / (std::string(stage_name(stage)) + ".ckpt"); }

int size_multiple(const RunConfig& c) {
  int m = 1;
  for (int depth : {c.h2h_model.gx.depth, c.h2h_model.gh.depth, c.i2i_model.gz.depth}) m = std::lcm(m, 1 << depth);
  return m;
}

TrainSummary run(const RunConfig& config, const TrainOptions& options) {
  validate(config);
  const fs::path dir = config.checkpoint_dir;
  fs::create_directories(dir);
  {
    std::ofstream out(dir / kConfigCopy, std::ios::trunc);
    out << to_json(config).dump(2) << '\n';
    if (!out) throw IoError("cannot write " + (dir / kConfigCopy).string());
  }
  if (!options.resume) {
    for (Stage s : config.stages) fs::remove(checkpoint_path(dir, s));
  }

  LossLog log(dir / kLossLog);
  TrainSummary summary;
  const Data data = load_data(config, size_multiple(config));
  i2i::Pipeline<F> p;
  bool log_ready = false;
  std::optional<std::uint64_t> last_offset;

  for (Stage s : config.stages) {
    const StageConfig& sc = config.stage(s);
    const fs::path path = checkpoint_path(dir, s);
    std::optional<nn::Checkpoint> ck;
    if (options.resume && fs::exists(path)) ck = nn::Checkpoint::load(path);

    ensure_upstream(p, config, s);
    create_bundle(p, config, s);
    if (ck) restore_stage(*ck, p, s);
    if (ck && is_complete(*ck)) {
      last_offset = ck->meta.at("log_offset").get<std::uint64_t>();
      continue;
    }
    if (!log_ready) {
      if (ck) {
        log.truncate(ck->meta.at("log_offset").get<std::uint64_t>());
      } else if (last_offset) {
        log.truncate(*last_offset);
      } else if (config.stages.front() == Stage::kH2H) {
        log.truncate(0);
      }
      log_ready = true;
    }
    const std::int64_t start = ck ? ck->meta.at("step").get<std::int64_t>() : 0;
    const nn::AdamOptions adam{sc.lr};
    StageRun runner{config, options, s, log, summary};
    bool finished = true;

    if (s == Stage::kH2H) {
      auto opt = h2h::make_optimizers(p.h2h, adam);
      if (ck) {
        nn::load_optimizer_into(*ck, "opt.h2h.gen", opt.generators);
        nn::load_optimizer_into(*ck, "opt.h2h.critics", opt.critics);
      }
      const std::vector<Tens> cubes = load_cubes(config, data);
      finished = runner.loop(
          start,
          [&](std::int64_t step) {
            const auto idx = batch_indices(config.seed, "h2h.pairs", step, sc.batch, data.y.size());
            const auto hidx = batch_indices(config.seed, "h2h.cubes", step, sc.batch, cubes.size());
            const h2h::H2HBatch<F> batch{stack(data.x_spanned, idx), stack(data.y, idx), stack(cubes, hidx)};
            const h2h::LossReport r = h2h::train_h2h_step(p.h2h, batch, opt);
            summary.h2h.push_back(r);
            return h2h::to_json(r);
          },
          [&](nn::Checkpoint& c) {
            h2h::put_bundle(c, p.h2h);
            nn::put_optimizer(c, "opt.h2h.gen", opt.generators);
            nn::put_optimizer(c, "opt.h2h.critics", opt.critics);
          });
    } else if (s == Stage::kHSC) {
      nn::Adam<F> opt(nn::Adam<F>::gather({{"net", p.hsc.net.get()}}), adam);
      if (ck) nn::load_optimizer_into(*ck, "opt.hsc", opt);
      std::vector<Tens> cubes;
      for (const auto& x : data.x_spanned) cubes.push_back(hsc::reconstruct_batch(p.h2h, x));
      finished = runner.loop(
          start,
          [&](std::int64_t step) {
            const auto idx = batch_indices(config.seed, "hsc.pairs", step, sc.batch, data.y.size());
            const double loss = hsc::train_hsc_step(p.hsc, hsc::HscBatch<F>{stack(cubes, idx), stack(data.y, idx)}, opt);
            summary.hsc.push_back(loss);
            return json{{"step", opt.steps_taken()}, {"l_r", loss}};
          },
          [&](nn::Checkpoint& c) {
            hsc::put_bundle(c, p.hsc);
            nn::put_optimizer(c, "opt.hsc", opt);
          });
    } else {
      auto opt = i2i::make_optimizers(p.i2i, adam);
      if (ck) {
        nn::load_optimizer_into(*ck, "opt.i2i.gen", opt.generator);
        nn::load_optimizer_into(*ck, "opt.i2i.disc", opt.discriminator);
      }
      std::vector<Tens> conds;
      for (const auto& x : data.hazy) conds.push_back(nn::to_tensor<F>(i2i::i2i_condition(p, x)));
      finished = runner.loop(
          start,
          [&](std::int64_t step) {
            const auto idx = batch_indices(config.seed, "i2i.pairs", step, sc.batch, data.y.size());
            const i2i::I2IReport r = i2i::train_i2i_step(p.i2i, i2i::I2IBatch<F>{stack(conds, idx), stack(data.y, idx)}, opt);
            summary.i2i.push_back(r);
            return i2i::to_json(r);
          },
          [&](nn::Checkpoint& c) {
            i2i::put_bundle(c, p.i2i);
            nn::put_optimizer(c, "opt.i2i.gen", opt.generator);
            nn::put_optimizer(c, "opt.i2i.disc", opt.discriminator);
          });
    }
    if (!finished) return summary;
    last_offset = log.size();
  }
  return summary;
}

TrainSummary resume(const fs::path& checkpoint_dir, const TrainOptions& options) {
  const fs::path copy = checkpoint_dir / kConfigCopy;
  if (!fs::exists(copy)) throw CheckpointError("no run config in checkpoint directory " + checkpoint_dir.string());
  RunConfig config = load_config(copy);
  config.checkpoint_dir = checkpoint_dir;
  TrainOptions o = options;
  o.resume = true;
  return run(config, o);
}

i2i::Pipeline<F> load_model_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw CheckpointError("model directory not found: " + dir.string());
  i2i::Pipeline<F> p;
  p.h2h = h2h::load_bundle<F>(nn::Checkpoint::load(checkpoint_path(dir, Stage::kH2H)));
  p.hsc = hsc::load_bundle<F>(nn::Checkpoint::load(checkpoint_path(dir, Stage::kHSC)));
  p.i2i = i2i::load_bundle<F>(nn::Checkpoint::load(checkpoint_path(dir, Stage::kI2I)));
  return p;
}

}  // namespace skygan::train
