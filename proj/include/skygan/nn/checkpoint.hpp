// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skygan/common/errors.hpp"
#include "skygan/nn/adam.hpp"
#include "skygan/nn/networks.hpp"

namespace skygan::nn {

/// Thrown when a checkpoint's architecture disagrees with the expected one.
class SpecMismatchError : public CheckpointError {
 public:
  explicit SpecMismatchError(const std::string& what) : CheckpointError(what) {}
};

enum class DType : std::uint8_t { kF32 = 1, kF64 = 2 };

/// Versioned binary container of named tensors plus a JSON metadata block.
///
/// Layout (all integers little-endian):
///   "SKYGANCK"                     8-byte magic
///   u32 version                    currently 1
///   u64 n, n bytes                 UTF-8 JSON metadata
///   u32 tensor count, then per tensor in name order:
///     u32 n, n bytes name; u8 dtype (1 = f32, 2 = f64)
///     u32 rank, rank x u32 dims; u64 byte count; raw little-endian data
///   u64 FNV-1a checksum of every preceding byte
class Checkpoint {
 public:
  static constexpr std::uint32_t kVersion = 1;

  nlohmann::json meta = nlohmann::json::object();

  template <typename T>
  void put(const std::string& name, const Tensor<T>& t);

  /// Converts between f32 and f64 when the stored dtype differs from T.
  template <typename T>
  Tensor<T> get(const std::string& name) const;

  bool has(const std::string& name) const { return tensors_.count(name) != 0; }
  std::vector<std::string> names() const;

  /// Writes to a sibling temp file, then renames over `path`.
  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

 private:
  struct Record {
    DType dtype = DType::kF32;
    std::vector<std::uint32_t> dims;
    std::vector<unsigned char> bytes;  // little-endian
  };
  std::map<std::string, Record> tensors_;
};

/// Stores every parameter as "<prefix>/<param>" and the spec under
/// meta["networks"][prefix].
template <typename T>
void put_module(Checkpoint& ckpt, const std::string& prefix, const Module<T>& module);

/// Rebuilds a module from meta["networks"][prefix] and loads its parameters.
template <typename T>
std::unique_ptr<Module<T>> get_module(const Checkpoint& ckpt, const std::string& prefix);

/// Loads parameters into an existing module after checking that the stored
/// spec equals module.spec(); throws SpecMismatchError otherwise.
template <typename T>
void load_module_into(const Checkpoint& ckpt, const std::string& prefix, Module<T>& module);

/// "<prefix>/m/<i>", "<prefix>/v/<i>" plus meta["optimizers"][prefix].
template <typename T>
void put_optimizer(Checkpoint& ckpt, const std::string& prefix, const Adam<T>& opt);

template <typename T>
void load_optimizer_into(const Checkpoint& ckpt, const std::string& prefix, Adam<T>& opt);

}  // namespace skygan::nn
