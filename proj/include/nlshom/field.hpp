#pragma once

#include <cstddef>
#include <vector>

#include "nlshom/common.hpp"

namespace nlshom {

// Periodic complex field on [0, 2pi), sampled at x_m = 2 pi m / n with n a
// power of two. Grid values are the source of truth; spectral views are
// computed on demand. Plain value semantics throughout.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(std::size_t n) : v_(n, cd(0.0, 0.0)) {}

  static SpectralField from_values(std::vector<cd> v);
  static SpectralField from_modes(const std::vector<cd>& modes);

  std::size_t size() const { return v_.size(); }
  double x(std::size_t m) const {
    return 2.0 * pi * static_cast<double>(m) / static_cast<double>(v_.size());
  }

  const std::vector<cd>& values() const { return v_; }
  cd& operator[](std::size_t m) { return v_[m]; }
  const cd& operator[](std::size_t m) const { return v_[m]; }

  std::vector<cd> modes() const;
  cd mode(int k) const;
  cd mean() const;

  SpectralField derivative(int order = 1) const;
  double sobolev_norm(int order) const;
  double l2_norm() const { return sobolev_norm(0); }
  double sup_norm() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(cd s);

 private:
  std::vector<cd> v_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cd s, SpectralField a);
SpectralField pointwise(const SpectralField& a, const SpectralField& b);
SpectralField conj(const SpectralField& a);

double sup_difference(const SpectralField& a, const SpectralField& b);

}  // namespace nlshom
