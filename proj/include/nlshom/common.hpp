#pragma once

#include <complex>
#include <cstddef>
#include <numbers>

namespace nlshom {

using cd = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cd iu{0.0, 1.0};

inline bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace nlshom
