#pragma once

#include "ritv/grid.hpp"

namespace ritv {

/// Unitary 2-D DFT, (F w)(k, l) = (1/n) Σ w(p, q) exp(-2πi(kp + lq)/n) with
/// 0-based frequency indices. Backed by FFTW; plans are cached per size.
ComplexImage fft2(const ComplexImage& w);
ComplexImage ifft2(const ComplexImage& w);

}  // namespace ritv
