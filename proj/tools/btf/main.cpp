// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "btf/commands.hpp"

int main(int argc, char** argv) { return btf::cli::run_cli(argc, argv, std::cout, std::cerr); }
