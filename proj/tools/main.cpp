// Copyright 2026 The SkyGAN Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "skygan/cli/cli.hpp"

int main(int argc, char** argv) { return skygan::cli::run_cli(argc, argv, std::cout, std::cerr); }
