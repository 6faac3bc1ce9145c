// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/h2h/h2h.hpp"

#include <cmath>

#include "skygan/colorcue/color.hpp"
#include "skygan/common/errors.hpp"
#include "skygan/common/rng.hpp"

namespace skygan::h2h {
using nlohmann::json;
using nn::Module;
using nn::Var;

namespace {

const std::vector<double>& span_matrix() {
  static const std::vector<double> m = [] {
    std::vector<double> out;
    for (const auto& row : color::band_weights()) out.insert(out.end(), row.begin(), row.end());
    return out;
  }();
  return m;
}

const std::vector<double>& anchor_matrix() {
  static const std::vector<double> m = [] {
    std::vector<double> out(3 * color::kSpectralBands, 0.0);
    const int bands[3] = {color::kRedAnchorBand, color::kGreenAnchorBand, color::kBlueAnchorBand};
    for (int o = 0; o < 3; ++o) out[static_cast<std::size_t>(o) * color::kSpectralBands + bands[o]] = 1.0;
    return out;
  }();
  return m;
}

template <typename T>
void check_finite(const Var<T>& v, const char* term) {
  if (!std::isfinite(static_cast<double>(v.item()))) {
    throw NumericError(std::string("non-finite loss term '") + term + "'");
  }
}

template <typename T>
void require_same(const Var<T>& a, const Var<T>& b, const char* what) {
  if (!(a.shape() == b.shape())) {
    throw ShapeError(std::string(what) + ": " + a.shape().str() + " vs " + b.shape().str());
  }
}

json weights_json(const LossWeights& w) {
  return {{"gan", w.gan}, {"cyc", w.cyc}, {"idt", w.idt}, {"cls", w.cls}};
}

LossWeights weights_from_json(const json& j) {
  LossWeights w;
  w.gan = j.value("gan", w.gan);
  w.cyc = j.value("cyc", w.cyc);
  w.idt = j.value("idt", w.idt);
  w.cls = j.value("cls", w.cls);
  return w;
}

}  // namespace

json to_json(const H2HSpec& s) {
  return {{"gx", nn::to_json(s.gx)},
          {"gh", nn::to_json(s.gh)},
          {"dx", nn::to_json(s.dx)},
          {"dh", nn::to_json(s.dh)},
          {"cls", nn::to_json(s.cls)},
          {"weights", weights_json(s.weights)},
          {"domain_classifier", s.domain_classifier},
          {"task_supervision", s.task_supervision}};
}

H2HSpec h2h_spec_from_json(const json& j) {
  H2HSpec s;
  if (j.contains("gx")) s.gx = nn::generator_spec_from_json(j["gx"]);
  if (j.contains("gh")) s.gh = nn::generator_spec_from_json(j["gh"]);
  if (j.contains("dx")) s.dx = nn::discriminator_spec_from_json(j["dx"]);
  if (j.contains("dh")) s.dh = nn::discriminator_spec_from_json(j["dh"]);
  if (j.contains("cls")) s.cls = nn::classifier_spec_from_json(j["cls"]);
  if (j.contains("weights")) s.weights = weights_from_json(j["weights"]);
  s.domain_classifier = j.value("domain_classifier", s.domain_classifier);
  s.task_supervision = j.value("task_supervision", s.task_supervision);
  if (s.gx.in_channels != color::kSpectralBands || s.gx.out_channels != color::kSpectralBands) {
    throw ConfigError("G_x must map 31 -> 31 channels");
  }
  if (s.gh.in_channels != color::kSpectralBands || s.gh.out_channels != 3) {
    throw ConfigError("G_h must map 31 -> 3 channels");
  }
  if (s.dx.in_channels != color::kSpectralBands || s.dh.in_channels != 3 ||
      s.cls.in_channels != color::kSpectralBands) {
    throw ConfigError("critic input channels must be D_x 31, D_h 3, classifier 31");
  }
  return s;
}

json to_json(const LossReport& r) {
  return {{"step", r.step}, {"l_x", r.l_x},   {"l_h", r.l_h},   {"l_gan", r.l_gan},
          {"l_cyc", r.l_cyc}, {"l_idt", r.l_idt}, {"l_cls", r.l_cls}, {"total", r.total}};
}

// --- bundle -------------------------------------------------------------------

template <typename T>
H2HBundle<T> H2HBundle<T>::create(const H2HSpec& spec, std::uint64_t seed) {
  SplitMix64 rng(SeedHasher(seed).add("h2h").value());
  H2HBundle b;
  b.gx = std::make_unique<nn::UNet<T>>(spec.gx, rng);
  b.gh = std::make_unique<nn::UNet<T>>(spec.gh, rng);
  b.dx = std::make_unique<nn::PatchDiscriminator<T>>(spec.dx, rng);
  b.dh = std::make_unique<nn::PatchDiscriminator<T>>(spec.dh, rng);
  b.cls = std::make_unique<nn::DomainClassifier<T>>(spec.cls, rng);
  b.weights = spec.weights;
  b.domain_classifier = spec.domain_classifier;
  b.task_supervision = spec.task_supervision;
  return b;
}

template <typename T>
std::vector<std::pair<std::string, const Module<T>*>> H2HBundle<T>::generators() const {
  return {{"gx", gx.get()}, {"gh", gh.get()}};
}

template <typename T>
std::vector<std::pair<std::string, const Module<T>*>> H2HBundle<T>::critics() const {
  std::vector<std::pair<std::string, const Module<T>*>> out;
  if (dx) out.emplace_back("dx", dx.get());
  if (dh) out.emplace_back("dh", dh.get());
  if (cls) out.emplace_back("cls", cls.get());
  return out;
}

template <typename T>
std::uint64_t H2HBundle<T>::generator_hash() const {
  return gx->parameter_hash() ^ mix64(gh->parameter_hash());
}

template <typename T>
std::uint64_t H2HBundle<T>::critic_hash() const {
  std::uint64_t h = 0;
  for (const auto& [name, m] : critics()) h = mix64(h ^ m->parameter_hash());
  return h;
}

template <typename T>
void H2HBundle<T>::set_trainable(bool on) {
  for (Module<T>* m : {gx.get(), gh.get(), dx.get(), dh.get(), cls.get()}) {
    if (m) m->set_trainable(on);
  }
}

template <typename T>
void put_bundle(nn::Checkpoint& ckpt, const H2HBundle<T>& b) {
  ckpt.meta["h2h"] = {{"weights", weights_json(b.weights)},
                      {"domain_classifier", b.domain_classifier},
                      {"task_supervision", b.task_supervision}};
  for (const auto& [name, m] : b.generators()) nn::put_module(ckpt, "h2h." + name, *m);
  for (const auto& [name, m] : b.critics()) nn::put_module(ckpt, "h2h." + name, *m);
}

template <typename T>
H2HBundle<T> load_bundle(const nn::Checkpoint& ckpt) {
  if (!ckpt.meta.contains("h2h")) throw CheckpointError("checkpoint holds no H2H bundle");
  const json& meta = ckpt.meta["h2h"];
  H2HBundle<T> b;
  b.weights = weights_from_json(meta.value("weights", json::object()));
  b.domain_classifier = meta.value("domain_classifier", true);
  b.task_supervision = meta.value("task_supervision", true);
  b.gx = nn::get_module<T>(ckpt, "h2h.gx");
  b.gh = nn::get_module<T>(ckpt, "h2h.gh");
  const json& nets = ckpt.meta["networks"];
  if (nets.contains("h2h.dx")) b.dx = nn::get_module<T>(ckpt, "h2h.dx");
  if (nets.contains("h2h.dh")) b.dh = nn::get_module<T>(ckpt, "h2h.dh");
  if (nets.contains("h2h.cls")) b.cls = nn::get_module<T>(ckpt, "h2h.cls");
  if (b.gx->in_channels() != color::kSpectralBands || b.gx->out_channels() != color::kSpectralBands ||
      b.gh->in_channels() != color::kSpectralBands || b.gh->out_channels() != 3) {
    throw nn::SpecMismatchError("H2H generators in checkpoint have the wrong channel counts");
  }
  return b;
}

template <typename T>
H2HBundle<T> identity_bundle() {
  H2HBundle<T> b;
  b.gx = std::make_unique<nn::ChannelSelect<T>>(color::kSpectralBands, color::kSpectralBands);
  b.gh = std::make_unique<nn::ChannelSelect<T>>(
      color::kSpectralBands,
      std::vector<int>{color::kRedAnchorBand, color::kGreenAnchorBand, color::kBlueAnchorBand});
  return b;
}

// --- losses -------------------------------------------------------------------

template <typename T>
Var<T> span(const Var<T>& rgb) {
  if (rgb.shape().c != 3) throw ShapeError("span expects 3 channels, got " + std::to_string(rgb.shape().c));
  return nn::channel_mix(rgb, span_matrix(), color::kSpectralBands);
}

template <typename T>
Var<T> anchor(const Var<T>& cube) {
  if (cube.shape().c != color::kSpectralBands) {
    throw ShapeError("anchor expects 31 channels, got " + std::to_string(cube.shape().c));
  }
  return nn::channel_mix(cube, anchor_matrix(), 3);
}

template <typename T>
Var<T> loss_adversarial_x(const Var<T>& fake_logits, const Var<T>& real_logits) {
  return nn::mean_log1m_sigmoid(fake_logits) + nn::mean_log_sigmoid(real_logits);
}

template <typename T>
Var<T> loss_adversarial_h(const Var<T>& fake_logits, const Var<T>& real_logits) {
  return loss_adversarial_x(fake_logits, real_logits);
}

template <typename T>
Var<T> generator_adversarial(const Var<T>& fake_logits) {
  return nn::scale(nn::mean_log_sigmoid(fake_logits), T(-1));
}

template <typename T>
Var<T> loss_cycle(const Var<T>& x_spanned, const Var<T>& y, const Var<T>& h, const Module<T>& gx,
                  const Module<T>& gh) {
  const Var<T> y_rec = gh(gx(x_spanned));
  require_same(y, y_rec, "cycle target vs G_h output");
  const Var<T> h_rec = gx(span(gh(h)));
  require_same(h, h_rec, "cube vs cycled cube");
  return nn::mse(y, y_rec) + nn::mse(h, h_rec);
}

template <typename T>
Var<T> loss_identity(const Var<T>& h, const Module<T>& gx, const Var<T>& x_spanned, const Module<T>& gh) {
  return nn::mse(h, gx(h)) + nn::mse(anchor(x_spanned), gh(x_spanned));
}

template <typename T>
ClassifierLoss<T> loss_domain_classifier(const Module<T>& cls, const Var<T>& from_hazy,
                                         const Var<T>& from_clear) {
  const double nh = from_hazy.shape().n;
  const double nc = from_clear.shape().n;
  if (nh < 1 || nc < 1) throw ArgumentError("domain classifier needs nonempty hazy and clear batches");
  const Var<T> hazy = nn::bce_with_logits(cls(from_hazy), T(1));
  const Var<T> clear = nn::bce_with_logits(cls(from_clear), T(0));
  ClassifierLoss<T> out;
  out.classifier_loss = nn::weighted_sum<T>({hazy, clear}, {T(nh / (nh + nc)), T(nc / (nh + nc))});
  out.generator_penalty = nn::scale(out.classifier_loss, T(-1));
  return out;
}

// --- training -----------------------------------------------------------------

template <typename T>
H2HOptimizers<T> make_optimizers(const H2HBundle<T>& bundle, const nn::AdamOptions& options) {
  return H2HOptimizers<T>{nn::Adam<T>(nn::Adam<T>::gather(bundle.generators()), options),
                          nn::Adam<T>(nn::Adam<T>::gather(bundle.critics()), options)};
}

template <typename T>
LossReport train_h2h_step(H2HBundle<T>& b, const H2HBatch<T>& batch, H2HOptimizers<T>& opt) {
  if (!b.dx || !b.dh || (b.domain_classifier && !b.cls)) {
    throw ConfigError("H2H bundle has no critics to train against");
  }
  const Module<T>& gx = *b.gx;
  const Module<T>& gh = *b.gh;
  const Var<T> x_sp(batch.x_spanned);
  const Var<T> y(batch.y);
  const Var<T> h(batch.h);
  const Var<T> x_rgb = anchor(x_sp);
  const Var<T>& cyc_target = b.task_supervision ? y : x_rgb;

  b.set_trainable(true);

  // One generator forward serves both phases.
  const Var<T> hh = gx(x_sp);
  const Var<T> y_rec = gh(hh);
  require_same(cyc_target, y_rec, "cycle target vs G_h output");
  const Var<T> gh_h = gh(h);
  const Var<T> h_rec = gx(span(gh_h));
  const Var<T> idt_h = gx(h);
  const Var<T> idt_rgb = gh(x_sp);
  Var<T> hh_clear;
  if (b.domain_classifier) hh_clear = gx(span(y));

  LossReport report;

  // Critics: maximize the adversarial objectives, minimize classifier BCE.
  opt.critics.zero_grad();
  const Var<T> l_x = loss_adversarial_x((*b.dx)(hh.detach()), (*b.dx)(h));
  const Var<T> l_h = loss_adversarial_h((*b.dh)(gh_h.detach()), (*b.dh)(x_rgb));
  check_finite(l_x, "l_x");
  check_finite(l_h, "l_h");
  std::vector<Var<T>> critic_terms{l_x, l_h};
  std::vector<T> critic_weights{T(-1), T(-1)};
  if (b.domain_classifier) {
    const auto cl = loss_domain_classifier(*b.cls, hh.detach(), hh_clear.detach());
    check_finite(cl.classifier_loss, "l_cls");
    report.l_cls = cl.classifier_loss.item();
    critic_terms.push_back(cl.classifier_loss);
    critic_weights.push_back(T(1));
  }
  nn::weighted_sum(critic_terms, critic_weights).backward();
  opt.critics.step();
  report.l_x = l_x.item();
  report.l_h = l_h.item();
  report.l_gan = report.l_x + report.l_h;

  // Generators against the updated, frozen critics.
  for (Module<T>* m : {b.dx.get(), b.dh.get(), b.cls.get()}) {
    if (m) m->set_trainable(false);
  }
  opt.generators.zero_grad();
  const Var<T> adv = generator_adversarial((*b.dx)(hh)) + generator_adversarial((*b.dh)(gh_h));
  const Var<T> cyc = nn::mse(cyc_target, y_rec) + nn::mse(h, h_rec);
  const Var<T> idt = nn::mse(h, idt_h) + nn::mse(x_rgb, idt_rgb);
  check_finite(adv, "generator adversarial");
  check_finite(cyc, "l_cyc");
  check_finite(idt, "l_idt");
  std::vector<Var<T>> terms{adv, cyc, idt};
  std::vector<T> weights{T(b.weights.gan), T(b.weights.cyc), T(b.weights.idt)};
  if (b.domain_classifier) {
    const auto cl = loss_domain_classifier(*b.cls, hh, hh_clear);
    check_finite(cl.generator_penalty, "classifier penalty");
    terms.push_back(cl.generator_penalty);
    weights.push_back(T(b.weights.cls));
  }
  const Var<T> total = nn::weighted_sum(terms, weights);
  check_finite(total, "total");
  total.backward();
  opt.generators.step();
  b.set_trainable(true);

  report.l_cyc = cyc.item();
  report.l_idt = idt.item();
  report.total = total.item();
  report.step = opt.generators.steps_taken();
  return report;
}

template <typename T>
image::ImageTensor reconstruct_hsi(const H2HBundle<T>& b, const image::ImageTensor& x_rgb) {
  if (x_rgb.channels() != 3) {
    throw ShapeError("reconstruct_hsi expects 3 channels, got " + std::to_string(x_rgb.channels()));
  }
  nn::NoGradGuard no_grad;
  const Var<T> x(nn::to_tensor<T>(color::span_channels(x_rgb)));
  return nn::to_image((*b.gx)(x).value());
}

#define SKYGAN_INSTANTIATE(T)                                                                       \
  template struct H2HBundle<T>;                                                                     \
  template void put_bundle<T>(nn::Checkpoint&, const H2HBundle<T>&);                                \
  template H2HBundle<T> load_bundle<T>(const nn::Checkpoint&);                                      \
  template H2HBundle<T> identity_bundle<T>();                                                       \
  template Var<T> span<T>(const Var<T>&);                                                           \
  template Var<T> anchor<T>(const Var<T>&);                                                         \
  template Var<T> loss_adversarial_x<T>(const Var<T>&, const Var<T>&);                              \
  template Var<T> loss_adversarial_h<T>(const Var<T>&, const Var<T>&);                              \
  template Var<T> generator_adversarial<T>(const Var<T>&);                                          \
  template Var<T> loss_cycle<T>(const Var<T>&, const Var<T>&, const Var<T>&, const Module<T>&,      \
                                const Module<T>&);                                                  \
  template Var<T> loss_identity<T>(const Var<T>&, const Module<T>&, const Var<T>&, const Module<T>&); \
  template ClassifierLoss<T> loss_domain_classifier<T>(const Module<T>&, const Var<T>&, const Var<T>&); \
  template H2HOptimizers<T> make_optimizers<T>(const H2HBundle<T>&, const nn::AdamOptions&);        \
  template LossReport train_h2h_step<T>(H2HBundle<T>&, const H2HBatch<T>&, H2HOptimizers<T>&);      \
  template image::ImageTensor reconstruct_hsi<T>(const H2HBundle<T>&, const image::ImageTensor&);
SKYGAN_INSTANTIATE(float)
SKYGAN_INSTANTIATE(double)
#undef SKYGAN_INSTANTIATE

}  // namespace skygan::h2h
