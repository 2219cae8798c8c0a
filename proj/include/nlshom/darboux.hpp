#pragma once

#include <array>
#include <cstddef>

#include "nlshom/field.hpp"
#include "nlshom/zs.hpp"

namespace nlshom {

// Spatially uniform solution q_c(t) = a exp(i theta(t)) of the focusing
// equation i q_t = q_xx + 2(|q|^2 - omega^2) q.
struct PlaneWave {
  double a = 0.8;
  double omega = 0.8;
  double gamma = 0.0;

  double theta(double t) const { return -(2.0 * (a * a - omega * omega) * t + gamma); }
  cd value(double t) const;
};

// Imaginary double points of the plane-wave Floquet spectrum. The first pair
// nu = i sigma exists for a > 1/2 (half-integer wavenumber k = 1/2), the
// second pair nu_hat = i sigma_hat for a > 1 (k = 1).
struct DoublePointData {
  double a = 0.0;
  double sigma = 0.0;      // sqrt(a^2 - 1/4)
  double theta0 = 0.0;     // 1/2 + nu = a e^{i theta0}
  bool has_second = false;
  double sigma_hat = 0.0;  // sqrt(a^2 - 1)
  double theta0_hat = 0.0; // 1 + nu_hat = a e^{i theta0_hat}

  cd nu() const { return {0.0, sigma}; }
  cd nu_hat() const { return {0.0, sigma_hat}; }
};

DoublePointData double_points(double a);

// Bloch eigenfunction of the spatial spectral problem linearized at the plane
// wave; sign = +1 or -1 selects the branch.
std::array<cd, 2> bloch(const PlaneWave& pw, cd lambda, int sign, double t,
                        double x);

// Gauge matrix G(lambda; nu, phi) built from a solution phi at lambda = nu.
Mat2 darboux_gauge(cd lambda, cd nu, const std::array<cd, 2>& phi);

// New potential Q = q + 2 (nu - conj nu) phi_1 conj(phi_2) / |phi|^2.
cd darboux_potential(cd q, cd nu, const std::array<cd, 2>& phi);

// Homoclinic orbit from one pair of double points, q = a e^{i theta} dressed
// at nu = i sigma with Backlund parameters rho, vartheta.
class OnePairOrbit {
 public:
  OnePairOrbit(const PlaneWave& pw, double rho, double vartheta);

  // vartheta = theta0 - pi/2, which makes the orbit even in x.
  static OnePairOrbit even(const PlaneWave& pw, double rho);

  double tau(double t) const { return 2.0 * data_.sigma * t - rho_; }
  double y(double x) const { return x + vartheta_ - data_.theta0 + 0.5 * pi; }

  cd envelope(double t, double x) const;  // Q / q_c
  cd value(double t, double x) const;
  cd u1(double t, double x) const;
  cd u2(double t, double x) const;

  // phi = c^+ psi^+ + c^- psi^-, the dressing solution at nu.
  std::array<cd, 2> phi(double t, double x) const;

  SpectralField snapshot(double t, std::size_t n) const;

  // Asymptotic phase factor e^{-+ 2 i theta0} of Q/q_c as t -> +-infinity.
  cd asymptotic_phase(int time_sign) const;

  // Closed-form gradient of the Floquet invariant at nu along the orbit.
  GradientField melnikov_vector(double t, std::size_t n) const;

  const PlaneWave& wave() const { return pw_; }
  const DoublePointData& points() const { return data_; }
  double rho() const { return rho_; }
  double vartheta() const { return vartheta_; }

 private:
  PlaneWave pw_;
  DoublePointData data_;
  double rho_;
  double vartheta_;
};

// Homoclinic orbit from two pairs of double points (requires a in (1, 3/2)),
// obtained by iterating the dressing at nu and nu_hat.
class TwoPairOrbit {
 public:
  TwoPairOrbit(const PlaneWave& pw, double rho, double vartheta,
               double rho_hat, double vartheta_hat);

  static TwoPairOrbit even(const PlaneWave& pw, double rho, double rho_hat);

  double tau(double t) const { return base_.tau(t); }
  double tau_hat(double t) const {
    return 4.0 * data_.sigma_hat * t - rho_hat_;
  }
  double y(double x) const { return base_.y(x); }
  double y_hat(double x) const {
    return 2.0 * x + vartheta_hat_ - data_.theta0_hat + 0.5 * pi;
  }

  // Closed-form value Q + q_c W2 sin(theta0_hat) / W1; raises
  // std::domain_error if the denominator W1 vanishes.
  cd value(double t, double x) const;
  cd envelope(double t, double x) const;

  // Same orbit assembled by composing the two gauge transformations applied
  // to Bloch eigenfunctions; used as an independent check of value().
  cd value_iterated(double t, double x) const;

  cd v1(double t, double x) const;
  cd v2(double t, double x) const;
  std::array<cd, 2> big_v(double t, double x) const;

  // S and S-hat combinations entering the two Melnikov vectors.
  std::array<cd, 2> s_fields(double t, double x) const;
  std::array<cd, 2> s_hat_fields(double t, double x) const;

  std::array<cd, 2> phi_hat(double t, double x) const;

  SpectralField snapshot(double t, std::size_t n) const;

  cd asymptotic_phase(int time_sign) const;

  // Closed-form gradients of the two Floquet invariants along the orbit.
  GradientField melnikov_vector_first(double t, std::size_t n) const;
  GradientField melnikov_vector_second(double t, std::size_t n) const;

  const OnePairOrbit& base() const { return base_; }
  const PlaneWave& wave() const { return pw_; }
  const DoublePointData& points() const { return data_; }
  double rho_hat() const { return rho_hat_; }
  double vartheta_hat() const { return vartheta_hat_; }

 private:
  PlaneWave pw_;
  DoublePointData data_;
  OnePairOrbit base_;
  double rho_hat_;
  double vartheta_hat_;
};

// Gauge-transformed eigenfunction grids feeding the degenerate gradient
// evaluator, together with the Wronskian of the underlying Bloch pair and the
// residual determinant factor of the gauges.
struct EigenPairGrids {
  std::vector<std::array<cd, 2>> plus;
  std::vector<std::array<cd, 2>> minus;
  cd wronskian_base;
  cd extra_det;
};

EigenPairGrids one_pair_gauge_grids(const OnePairOrbit& orbit, double t,
                                    std::size_t n);
EigenPairGrids two_pair_gauge_grids_first(const TwoPairOrbit& orbit, double t,
                                          std::size_t n);
EigenPairGrids two_pair_gauge_grids_second(const TwoPairOrbit& orbit, double t,
                                           std::size_t n);

}  // namespace nlshom
