// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace sefdm {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Frequency-domain vector of constellation symbols; guard positions are zero.
using SymbolVector = CVec;

}  // namespace sefdm
