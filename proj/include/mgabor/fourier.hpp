#pragma once

#include "mgabor/grid.hpp"

namespace mgabor {

/// Centered Fourier transform with continuous normalization,
/// (F f)(xi) = ∫ f(x) e^{-2 pi i x·xi} dx, computed per axis as h times the
/// (-1)^k / (-1)^j twiddled DFT. The result lives on the dual grid.
DiscreteSignal fourier(const DiscreteSignal& f);

/// Inverse of fourier: exact round trip up to rounding.
DiscreteSignal inverse_fourier(const DiscreteSignal& f);

/// Band-limited refinement to the grid with the same half-width and twice the
/// points per axis (centered zero padding in frequency). Original samples are
/// reproduced at the even fine-grid indices.
DiscreteSignal refine2(const DiscreteSignal& f);

}  // namespace mgabor
