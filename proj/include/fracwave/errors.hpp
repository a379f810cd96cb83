// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace fracwave {

// Invalid parameters or malformed configuration. CLI exit code 2.
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// NaN/overflow or a symbol evaluated outside its numeric domain. CLI exit code 3.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resolvent requested at a point of the discrete spectrum.
struct pole_error : numeric_error {
  pole_error(const std::string& what, double offending_mode)
      : numeric_error(what), mode(offending_mode) {}
  double mode;  // frequency magnitude of the singular lattice mode
};

// Iterative eigensolver could not certify the requested residual. CLI exit code 4.
struct convergence_error : std::runtime_error {
  convergence_error(const std::string& what, double achieved_residual)
      : std::runtime_error(what), residual(achieved_residual) {}
  double residual;
};

}  // namespace fracwave
