// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "skygan/evalkit/evaluate.hpp"

namespace skygan::cli {

/// Exit codes besides the per-category ones in ErrorCategory (3..9).
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Model keyword for the parameter-free stub pipeline.
inline constexpr const char* kIdentityModel = "builtin:identity";

/// Seed flag if given, else SKYGAN_SEED, else 0. A malformed SKYGAN_SEED is
/// an ArgumentError.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

/// Dehazer for a model directory or kIdentityModel. The identity model
/// returns its input unchanged.
eval::Dehazer load_dehazer(const std::string& model);

/// Parses argv, runs one subcommand, and maps failures to exit codes.
/// Messages go to `err`; progress and summaries to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skygan::cli
