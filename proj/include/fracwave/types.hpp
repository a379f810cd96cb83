// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

namespace fracwave {

using cd = std::complex<double>;
using cvec = std::vector<cd>;

}  // namespace fracwave
