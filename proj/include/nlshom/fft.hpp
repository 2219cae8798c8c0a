#pragma once

#include <vector>

#include "nlshom/common.hpp"

namespace nlshom {

// Complex FFT on power-of-two grids, wrapping FFTW with per-thread plan reuse.
// Forward maps grid values to coefficients hat(k) = (1/n) sum_m q(x_m) e^{-ik x_m}
// in FFT index order (index j holds k = j for j < n/2 and k = j - n otherwise).
// Backward is the exact inverse. Non power-of-two sizes are rejected.
void fft_forward(std::vector<cd>& a);
void fft_backward(std::vector<cd>& a);

std::vector<cd> modes_of(std::vector<cd> values);
std::vector<cd> values_of(std::vector<cd> modes);

// Band-limited resampling of periodic data onto a finer grid (factor must make
// the target size a power of two as well). Used for ODE stepping between nodes.
std::vector<cd> upsample(const std::vector<cd>& values, std::size_t factor);

inline int fft_wavenumber(std::size_t index, std::size_t n) {
  return index < n / 2 ? static_cast<int>(index)
                       : static_cast<int>(index) - static_cast<int>(n);
}

inline std::size_t fft_index(int k, std::size_t n) {
  return static_cast<std::size_t>((k % static_cast<int>(n) + static_cast<int>(n)) %
                                  static_cast<int>(n));
}

}  // namespace nlshom
