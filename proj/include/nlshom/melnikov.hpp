#pragma once

#include <cstddef>
#include <vector>

#include "nlshom/common.hpp"
#include "nlshom/params.hpp"

namespace nlshom {

// Asymptotic phase shifts picked up by the homoclinic orbits, in the phase of
// the carrier wave: -4 theta0 for one pair of double points, -4 (theta0 +
// theta0_hat) for two pairs.
double phase_shift_one_pair(double omega);
double phase_shift_two_pair(double omega);

// Space-time integrals of the Floquet gradient against the orbit envelope for
// one pair of double points, with the common real prefactor dropped. The
// time quadrature is composite Gauss-Legendre with unit panels in the decay
// variable tau = 2 sigma t, symmetric about tau = 0.
struct OnePairIntegrals {
  double omega = 0.0;
  double m1 = 0.0, m2 = 0.0, m3 = 0.0;
  // Coefficient that beta sin(gamma) would pick up; vanishes for even data
  // and is carried as a diagnostic.
  double m4_diagnostic = 0.0;
  double imag_residue = 0.0;
  double cert_domain = 0.0;  // relative change when tau_max grows by 8
  double cert_nodes = 0.0;   // relative change when the node count doubles
};

OnePairIntegrals melnikov_one_pair(double omega, const QuadratureSpec& quad,
                                   bool certificates = true);

// kappa(omega) and the damping alpha = 1/kappa on the codimension-one
// existence surface, plus the closure residual of the zero condition.
struct KappaPoint {
  OnePairIntegrals integrals;
  double delta_gamma = 0.0;
  double kappa = 0.0;
  double alpha = 0.0;
  bool singular = false;
  double closure_residual = 0.0;
};

KappaPoint kappa_point(double omega, const QuadratureSpec& quad,
                       bool certificates = true);
std::vector<KappaPoint> kappa_curve(double omega_lo, double omega_hi,
                                    std::size_t count,
                                    const QuadratureSpec& quad,
                                    bool certificates = true);

// Two pairs of double points: eight integrals M_j^(l), j = 1,2, l = 1..4,
// evaluated along the even two-pair orbit in the time gauge rho = 0,
// rho_hat = -delta_rho.
struct TwoPairIntegrals {
  double omega = 0.0;
  double delta_rho = 0.0;
  double m[2][4] = {{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}};
  double imag_residue = 0.0;
  double cert_domain = 0.0;
  double cert_nodes = 0.0;
};

TwoPairIntegrals melnikov_two_pairs(double omega, double delta_rho,
                                    const QuadratureSpec& quad,
                                    bool certificates = true);

// Point of the existence surface in (alpha, beta, gamma) for the two-pair
// measurement, from the joint zero of both integrals and the return-phase
// pinning relation.
struct SurfacePoint {
  TwoPairIntegrals integrals;
  double delta_gamma = 0.0;
  double chi = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double beta_cos_gamma = 0.0;
  double beta_sin_gamma = 0.0;
  bool singular = false;
  double closure_residual_1 = 0.0;
  double closure_residual_2 = 0.0;
  double closure_residual_d = 0.0;
};

SurfacePoint surface_point(double omega, double delta_rho,
                           const QuadratureSpec& quad,
                           bool certificates = true);

// Signed distance at the second measurement: the difference of the reduced
// Hamiltonian between the return phase and the shifted phase,
//   2 omega [alpha omega shift + beta (sin theta - sin(theta + shift))].
double second_distance(double theta_initial, double theta_shift, double alpha,
                       double beta, double omega);

// The raw measurement integral < grad F_1, q_xx - alpha q + beta > along the
// one-pair orbit with carrier phase gamma, keeping the constant prefactor
// that the decomposed integrals drop.
cd melnikov_raw_one_pair(double omega, double alpha, double beta, double gamma,
                         const QuadratureSpec& quad);

// That dropped prefactor: -4 pi sigma^2 / omega^2.
double one_pair_drop_constant(double omega);

struct ExistenceResult {
  double omega = 0.0;
  double delta_rho = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double residual_melnikov = 0.0;
  double residual_distance = 0.0;
  double condition = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton on (alpha, gamma) at fixed (omega, beta) for the joint zero
// of the one-pair measurement and the second distance.
ExistenceResult existence_one_pair(double omega, double beta,
                                   const QuadratureSpec& quad);

// Forcing level sqrt(2) |alpha omega Delta gamma / (2 sin(Delta gamma / 2))|
// that places gamma at pi/4 on the one-pair surface.
double default_forcing_one_pair(double omega, const QuadratureSpec& quad);

ExistenceResult existence_two_pair(double omega, double delta_rho,
                                   const QuadratureSpec& quad);

}  // namespace nlshom
