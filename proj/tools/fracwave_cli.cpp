// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#include "fracwave/runner.hpp"

int main(int argc, char** argv) { return fracwave::cli_main(argc, argv); }
