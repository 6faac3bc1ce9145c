// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include "skygan/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace skygan::nn {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'S', 'K', 'Y', 'G', 'A', 'N', 'C', 'K'};

std::uint64_t fnv1a(const unsigned char* p, std::size_t n) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

template <typename U>
void put_le(std::vector<unsigned char>& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

class Reader {
 public:
  Reader(const std::vector<unsigned char>& buf, std::size_t end, std::string path)
      : buf_(buf), end_(end), path_(std::move(path)) {}

  template <typename U>
  U le() {
    need(sizeof(U));
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf_[pos_ + i]) << (8 * i);
    pos_ += sizeof(U);
    return v;
  }

  std::string str(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(buf_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::vector<unsigned char> bytes(std::size_t n) {
    need(n);
    std::vector<unsigned char> v(buf_.begin() + pos_, buf_.begin() + pos_ + n);
    pos_ += n;
    return v;
  }

  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (n > end_ - pos_) throw CheckpointError("truncated checkpoint " + path_);
  }

  const std::vector<unsigned char>& buf_;
  std::size_t end_;
  std::string path_;
  std::size_t pos_ = 0;
};

template <typename T>
constexpr DType dtype_of() {
  return sizeof(T) == 4 ? DType::kF32 : DType::kF64;
}

// Element-wise little-endian encode of float/double.
template <typename F>
void encode(const F* src, std::size_t n, std::vector<unsigned char>& out) {
  using U = std::conditional_t<sizeof(F) == 4, std::uint32_t, std::uint64_t>;
  out.reserve(out.size() + n * sizeof(F));
  for (std::size_t i = 0; i < n; ++i) put_le(out, std::bit_cast<U>(src[i]));
}

template <typename F>
std::vector<F> decode(const std::vector<unsigned char>& bytes) {
  using U = std::conditional_t<sizeof(F) == 4, std::uint32_t, std::uint64_t>;
  std::vector<F> out(bytes.size() / sizeof(F));
  for (std::size_t i = 0; i < out.size(); ++i) {
    U v = 0;
    for (std::size_t b = 0; b < sizeof(F); ++b) v |= static_cast<U>(bytes[i * sizeof(F) + b]) << (8 * b);
    out[i] = std::bit_cast<F>(v);
  }
  return out;
}

Shape shape_from_dims(const std::vector<std::uint32_t>& dims) {
  Shape s;
  if (dims.size() != 4) throw CheckpointError("expected rank-4 tensor");
  s.n = static_cast<int>(dims[0]);
  s.c = static_cast<int>(dims[1]);
  s.h = static_cast<int>(dims[2]);
  s.w = static_cast<int>(dims[3]);
  return s;
}

}  // namespace

template <typename T>
void Checkpoint::put(const std::string& name, const Tensor<T>& t) {
  Record r;
  r.dtype = dtype_of<T>();
  const Shape& s = t.shape();
  r.dims = {static_cast<std::uint32_t>(s.n), static_cast<std::uint32_t>(s.c),
            static_cast<std::uint32_t>(s.h), static_cast<std::uint32_t>(s.w)};
  encode(t.data(), t.numel(), r.bytes);
  tensors_[name] = std::move(r);
}

template <typename T>
Tensor<T> Checkpoint::get(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw CheckpointError("checkpoint has no tensor '" + name + "'");
  const Record& r = it->second;
  const Shape s = shape_from_dims(r.dims);
  std::vector<T> data;
  if (r.dtype == DType::kF32) {
    auto v = decode<float>(r.bytes);
    data.assign(v.begin(), v.end());
  } else {
    auto v = decode<double>(r.bytes);
    data.assign(v.begin(), v.end());
  }
  if (data.size() != s.numel()) throw CheckpointError("tensor '" + name + "' size disagrees with its shape");
  return Tensor<T>(s, std::move(data));
}

std::vector<std::string> Checkpoint::names() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : tensors_) out.push_back(k);
  return out;
}

void Checkpoint::save(const fs::path& path) const {
  std::vector<unsigned char> buf(std::begin(kMagic), std::end(kMagic));
  put_le<std::uint32_t>(buf, kVersion);
  const std::string m = meta.dump();
  put_le<std::uint64_t>(buf, m.size());
  buf.insert(buf.end(), m.begin(), m.end());
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(tensors_.size()));
  for (const auto& [name, r] : tensors_) {
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(name.size()));
    buf.insert(buf.end(), name.begin(), name.end());
    buf.push_back(static_cast<unsigned char>(r.dtype));
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(r.dims.size()));
    for (auto d : r.dims) put_le<std::uint32_t>(buf, d);
    put_le<std::uint64_t>(buf, r.bytes.size());
    buf.insert(buf.end(), r.bytes.begin(), r.bytes.end());
  }
  put_le<std::uint64_t>(buf, fnv1a(buf.data(), buf.size()));

  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint " + tmp.string());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("cannot write checkpoint " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

Checkpoint Checkpoint::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("missing checkpoint " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof(kMagic) + 8 || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a checkpoint file: " + path.string());
  }
  const std::size_t body = buf.size() - 8;
  std::uint64_t stored = 0;
  for (int i = 0; i < 8; ++i) stored |= static_cast<std::uint64_t>(buf[body + i]) << (8 * i);
  if (stored != fnv1a(buf.data(), body)) throw CheckpointError("corrupt checkpoint (checksum) " + path.string());

  Reader rd(buf, body, path.string());
  rd.str(sizeof(kMagic));
  const auto version = rd.le<std::uint32_t>();
  if (version != kVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version) + " in " + path.string());
  }
  Checkpoint ckpt;
  try {
    ckpt.meta = json::parse(rd.str(rd.le<std::uint64_t>()));
  } catch (const json::exception& e) {
    throw CheckpointError("corrupt checkpoint metadata in " + path.string() + ": " + e.what());
  }
  const auto count = rd.le<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string name = rd.str(rd.le<std::uint32_t>());
    Record r;
    const auto dt = rd.le<std::uint8_t>();
    if (dt != 1 && dt != 2) throw CheckpointError("bad dtype for '" + name + "' in " + path.string());
    r.dtype = static_cast<DType>(dt);
    const auto rank = rd.le<std::uint32_t>();
    if (rank > 8) throw CheckpointError("bad rank for '" + name + "' in " + path.string());
    for (std::uint32_t d = 0; d < rank; ++d) r.dims.push_back(rd.le<std::uint32_t>());
    r.bytes = rd.bytes(rd.le<std::uint64_t>());
    ckpt.tensors_[name] = std::move(r);
  }
  if (rd.pos() != body) throw CheckpointError("trailing bytes in checkpoint " + path.string());
  return ckpt;
}

template <typename T>
void put_module(Checkpoint& ckpt, const std::string& prefix, const Module<T>& module) {
  ckpt.meta["networks"][prefix] = module.spec();
  for (const auto& p : module.parameters()) ckpt.put(prefix + "/" + p.name, p.var.value());
}

template <typename T>
void load_module_into(const Checkpoint& ckpt, const std::string& prefix, Module<T>& module) {
  if (!ckpt.meta.contains("networks") || !ckpt.meta["networks"].contains(prefix)) {
    throw CheckpointError("checkpoint has no network '" + prefix + "'");
  }
  const json& stored = ckpt.meta["networks"][prefix];
  if (stored != module.spec()) {
    throw SpecMismatchError("network '" + prefix + "' spec mismatch: checkpoint has " + stored.dump() +
                            ", expected " + module.spec().dump());
  }
  for (const auto& p : module.parameters()) {
    Tensor<T> t = ckpt.get<T>(prefix + "/" + p.name);
    if (!(t.shape() == p.var.shape())) {
      throw SpecMismatchError("parameter " + prefix + "/" + p.name + " has shape " + t.shape().str() +
                              ", expected " + p.var.shape().str());
    }
    Var<T> v = p.var;
    v.mutable_value() = std::move(t);
  }
}

template <typename T>
std::unique_ptr<Module<T>> get_module(const Checkpoint& ckpt, const std::string& prefix) {
  if (!ckpt.meta.contains("networks") || !ckpt.meta["networks"].contains(prefix)) {
    throw CheckpointError("checkpoint has no network '" + prefix + "'");
  }
  SplitMix64 rng(0);
  auto module = make_module<T>(ckpt.meta["networks"][prefix], rng);
  load_module_into(ckpt, prefix, *module);
  return module;
}

template <typename T>
void put_optimizer(Checkpoint& ckpt, const std::string& prefix, const Adam<T>& opt) {
  json names = json::array();
  for (const auto& p : opt.params()) names.push_back(p.name);
  ckpt.meta["optimizers"][prefix] = {{"steps", opt.steps_taken()},
                                     {"lr", opt.options().lr},
                                     {"beta1", opt.options().beta1},
                                     {"beta2", opt.options().beta2},
                                     {"params", names}};
  for (std::size_t i = 0; i < opt.params().size(); ++i) {
    ckpt.put(prefix + "/m/" + std::to_string(i), opt.first_moments()[i]);
    ckpt.put(prefix + "/v/" + std::to_string(i), opt.second_moments()[i]);
  }
}

template <typename T>
void load_optimizer_into(const Checkpoint& ckpt, const std::string& prefix, Adam<T>& opt) {
  if (!ckpt.meta.contains("optimizers") || !ckpt.meta["optimizers"].contains(prefix)) {
    throw CheckpointError("checkpoint has no optimizer '" + prefix + "'");
  }
  const json& meta = ckpt.meta["optimizers"][prefix];
  const auto& names = meta.at("params");
  if (names.size() != opt.params().size()) {
    throw SpecMismatchError("optimizer '" + prefix + "' parameter count mismatch");
  }
  std::vector<Tensor<T>> m, v;
  for (std::size_t i = 0; i < opt.params().size(); ++i) {
    if (names[i].get<std::string>() != opt.params()[i].name) {
      throw SpecMismatchError("optimizer '" + prefix + "' parameter order mismatch at " + opt.params()[i].name);
    }
    m.push_back(ckpt.get<T>(prefix + "/m/" + std::to_string(i)));
    v.push_back(ckpt.get<T>(prefix + "/v/" + std::to_string(i)));
  }
  opt.restore(meta.at("steps").get<std::int64_t>(), std::move(m), std::move(v));
}

#define SKYGAN_INSTANTIATE(T)                                                                   \
  template void Checkpoint::put<T>(const std::string&, const Tensor<T>&);                       \
  template Tensor<T> Checkpoint::get<T>(const std::string&) const;                              \
  template void put_module<T>(Checkpoint&, const std::string&, const Module<T>&);               \
  template void load_module_into<T>(const Checkpoint&, const std::string&, Module<T>&);         \
  template std::unique_ptr<Module<T>> get_module<T>(const Checkpoint&, const std::string&);     \
  template void put_optimizer<T>(Checkpoint&, const std::string&, const Adam<T>&);              \
  template void load_optimizer_into<T>(const Checkpoint&, const std::string&, Adam<T>&);
SKYGAN_INSTANTIATE(float)
SKYGAN_INSTANTIATE(double)
#undef SKYGAN_INSTANTIATE

}  // namespace skygan::nn
