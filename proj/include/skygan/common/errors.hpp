// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace skygan {

/// Broad failure classes. The CLI maps each to its own exit code.
enum class ErrorCategory {
  kIo = 3,
  kDecode = 4,
  kShape = 5,
  kNumeric = 6,
  kCheckpoint = 7,
  kConfig = 8,
  kArgument = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// File missing, unreadable, or unwritable.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::kIo, what) {}
};

/// Raster or cube bytes that do not decode.
class DecodeError : public Error {
 public:
  explicit DecodeError(const std::string& what) : Error(ErrorCategory::kDecode, what) {}
};

/// Dimension or channel-count violation.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorCategory::kShape, what) {}
};

/// A loss or parameter went non-finite.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorCategory::kNumeric, what) {}
};

/// Corrupt, missing, or mismatched checkpoint.
class CheckpointError : public Error {
 public:
  explicit CheckpointError(const std::string& what) : Error(ErrorCategory::kCheckpoint, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::kConfig, what) {}
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(ErrorCategory::kArgument, what) {}
};

}  // namespace skygan
