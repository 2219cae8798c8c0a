#include "nlshom/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlshom/fft.hpp"

namespace nlshom {

SpectralField SpectralField::from_values(std::vector<cd> v) {
  if (!is_pow2(v.size())) {
    throw std::invalid_argument("field: grid size must be a power of two");
  }
  SpectralField f;
  f.v_ = std::move(v);
  return f;
}

SpectralField SpectralField::from_modes(const std::vector<cd>& modes) {
  return from_values(values_of(modes));
}

std::vector<cd> SpectralField::modes() const { return modes_of(v_); }

cd SpectralField::mode(int k) const {
  const std::vector<cd> hat = modes();
  const int n = static_cast<int>(v_.size());
  if (k < -n / 2 || k > n / 2 - 1) return cd(0.0, 0.0);
  return hat[fft_index(k, v_.size())];
}

cd SpectralField::mean() const {
  cd s(0.0, 0.0);
  for (const cd& z : v_) s += z;
  return s / static_cast<double>(v_.size());
}

SpectralField SpectralField::derivative(int order) const {
  std::vector<cd> hat = modes();
  const std::size_t n = v_.size();
  for (std::size_t j = 0; j < n; ++j) {
    const int k = fft_wavenumber(j, n);
    if (order % 2 == 1 && static_cast<std::size_t>(2 * std::abs(k)) == n) {
      // odd derivative of the unpaired highest mode has no consistent sign
      hat[j] = cd(0.0, 0.0);
      continue;
    }
    cd f(1.0, 0.0);
    for (int r = 0; r < order; ++r) f *= iu * static_cast<double>(k);
    hat[j] *= f;
  }
  return from_modes(hat);
}

double SpectralField::sobolev_norm(int order) const {
  const std::vector<cd> hat = modes();
  const std::size_t n = v_.size();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double k = static_cast<double>(fft_wavenumber(j, n));
    s += std::pow(1.0 + k * k, order) * std::norm(hat[j]);
  }
  return std::sqrt(2.0 * pi * s);
}

double SpectralField::sup_norm() const {
  double m = 0.0;
  for (const cd& z : v_) m = std::max(m, std::abs(z));
  return m;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (o.size() != size()) throw std::invalid_argument("field: size mismatch");
  for (std::size_t m = 0; m < v_.size(); ++m) v_[m] += o.v_[m];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (o.size() != size()) throw std::invalid_argument("field: size mismatch");
  for (std::size_t m = 0; m < v_.size(); ++m) v_[m] -= o.v_[m];
  return *this;
}

SpectralField& SpectralField::operator*=(cd s) {
  for (cd& z : v_) z *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
  a += b;
  return a;
}

SpectralField operator-(SpectralField a, const SpectralField& b) {
  a -= b;
  return a;
}

SpectralField operator*(cd s, SpectralField a) {
  a *= s;
  return a;
}

SpectralField pointwise(const SpectralField& a, const SpectralField& b) {
  if (a.size() != b.size()) throw std::invalid_argument("field: size mismatch");
  std::vector<cd> v(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) v[m] = a[m] * b[m];
  return SpectralField::from_values(std::move(v));
}

SpectralField conj(const SpectralField& a) {
  std::vector<cd> v(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) v[m] = std::conj(a[m]);
  return SpectralField::from_values(std::move(v));
}

double sup_difference(const SpectralField& a, const SpectralField& b) {
  if (a.size() != b.size()) throw std::invalid_argument("field: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace nlshom
