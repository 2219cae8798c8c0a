#pragma once

#include <array>
#include <vector>

#include "nlshom/field.hpp"
#include "nlshom/params.hpp"

namespace nlshom {

// Coordinates adapted to the resonance circle: q = (rho + f) e^{i theta} with
// <f> = 0, theta = arg<q>, rho = |<q>|, and the action offset
// J = rho^2 + <|f|^2> - omega^2 (so rho = sqrt(J + omega^2 - <|f|^2>)).
struct ResonanceCoords {
  double J = 0.0;
  double theta = 0.0;
  SpectralField f;
};

ResonanceCoords to_resonance_coords(const SpectralField& q, double omega);
SpectralField from_resonance_coords(const ResonanceCoords& c, double omega);

// Quadratic remainders of the (J, theta) equations and the quadratic/cubic
// nonlinear terms of the zero-mean tail equation.
double r2_J(const ResonanceCoords& c, const Params& p);
double r2_theta(const ResonanceCoords& c, const Params& p);
SpectralField n2_term(const ResonanceCoords& c, double omega);
SpectralField n3_term(const ResonanceCoords& c, const Params& p);

// Constant-coefficient part of the tail linearization at the circle:
// L_eps f = -i f_xx + eps (f_xx - alpha f) - 2 i omega^2 (f + conj f).
SpectralField l_epsilon_apply(const SpectralField& f, const Params& p);

// (J, theta)-dependent linear correction:
// V_eps f = -2 i J (f + conj f) + i eps beta sin(theta) (J + omega^2)^{-1/2} f.
SpectralField v_epsilon_apply(const SpectralField& f, double J, double theta,
                              const Params& p);

struct ModePair {
  int k;
  cd mu_plus;   // -eps (alpha + k^2) + k sqrt(4 omega^2 - k^2)
  cd mu_minus;  // -eps (alpha + k^2) - k sqrt(4 omega^2 - k^2)
};

// Eigenvalue pairs of L_eps on the cos(kx) blocks, k = 1..k_max. Real pairs
// exactly for k < 2 omega, complex-conjugate ones beyond.
std::vector<ModePair> spectrum_l_epsilon(const Params& p, int k_max);

int unstable_mode_count(double omega);

// Unit-modulus phase of the k-th eigenvectors e_k^{+-} = e^{+- i vartheta_k} cos kx,
// e^{i vartheta_k} = (k - i sqrt(4 omega^2 - k^2)) / (2 omega).
cd eigenvector_phase(int k, double omega);

struct EigenSplit {
  std::vector<double> xi_plus;   // indexed k-1, k = 1..unstable_mode_count
  std::vector<double> xi_minus;
  SpectralField h;               // remainder, orthogonal to the retained cos kx
};

// Decompose a zero-mean field over the unstable eigen-directions plus
// remainder. omega at a mode boundary (4 omega^2 = k^2) raises
// std::domain_error since the eigenvectors degenerate there.
EigenSplit eigen_split(const SpectralField& g, const Params& p);
SpectralField eigen_unsplit(const EigenSplit& s, const Params& p);

// Action of V_eps on the eigen-coordinates of block k:
// returns (contribution to xi_plus', contribution to xi_minus').
std::array<double, 2> v_coupling(int k, double xi_p, double xi_m, double J,
                                 double theta, const Params& p);

}  // namespace nlshom
