// Copyright 2026 The gwgen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gwgen/cli.hpp"

int main(int argc, char** argv) { return gwgen::cli::run(argc, argv); }
