#pragma once

#include <array>
#include <vector>

#include "nlshom/field.hpp"
#include "nlshom/params.hpp"

namespace nlshom {

// Quadratic normal-form coefficients for the interaction of modes (k, l).
// With b = -2 omega^2, sigma = eps (2 k l - alpha) and the combination
// frequencies
//   sigma_1 = 2 (k l + omega^2),        sigma_2 = 2 (l^2 + k l - omega^2),
//   sigma_3 = 2 (k^2 + k l - omega^2),  sigma_4 = 2 (k^2 + l^2 + k l - 3 omega^2),
// the coefficients solve the linear system
//   (sigma_1 + i sigma) K1 + b K2kl + b K2lk + b conj(K3) = -2 omega
//   -b K1 + (sigma_2 + i sigma) K2kl + b conj(K2lk) + b K3 = -2 omega
//   -b K1 + b conj(K2kl) + (sigma_3 + i sigma) K2lk + b K3 = -2 omega
//   b conj(K1) - b K2kl - b K2lk + (sigma_4 + i sigma) K3 = 0.
struct NormalFormCoeffs {
  cd K1, K2_kl, K2_lk, K3;
  cd K;             // combination 2 omega + (sigma_4 + i sigma) K3 + b conj(K3)
  double residual;  // sup residual of the four equations
};

// Ground truth: the system solved as an 8x8 real linear system (LU).
NormalFormCoeffs solve_coeffs(int k, int l, const Params& p);

// Closed-form solution of the same system (used on the hot paths; agrees with
// solve_coeffs to machine precision).
NormalFormCoeffs closed_form_coeffs(int k, int l, const Params& p);

// K to first order in eps:
// K = 2 omega [1 + i b sigma (sum_j 1/(sigma_j^2 - b^2)) / D] + O(eps^2), with
// D = 1 + b [1/(sigma_1 - b) - 1/(sigma_2 + b) - 1/(sigma_3 + b) + 1/(sigma_4 - b)].
cd leading_K(int k, int l, const Params& p);
double denominator_D(int k, int l, const Params& p);

// The real scalar U and complex V of the reduced equation U K + V conj(K) = W.
struct ReducedCoeffs {
  double U;
  cd V;
  cd W;
};
ReducedCoeffs reduced_coeffs(int k, int l, const Params& p);

struct DenominatorScan {
  double omega;
  double min_abs_D;
  double min_abs_UV;  // min over pairs of |U^2 - |V|^2|
  std::vector<std::array<int, 2>> flagged;
};

// Scan |k|, |l| <= kl_max (valid pairs) for small denominators at the given
// omega; pairs where any denominator is within 1e-6 of zero are flagged.
DenominatorScan denominator_scan(double omega, int kl_max, const Params& base);

// Quadratic form K(f, f) truncated to |k|, |l| <= k_max.
SpectralField apply_transform(const SpectralField& f, const Params& p, int k_max);

// Solves f + K(f, f) = g by fixed-point iteration started at g. Throws a
// ConvergenceError carrying the iterate history when the map fails to contract
// within the ball ||g|| <= r0.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& msg, std::vector<double> hist)
      : std::runtime_error(msg), history(std::move(hist)) {}
  std::vector<double> history;
};

SpectralField invert_transform(const SpectralField& g, const Params& p, int k_max,
                               double r0 = 0.1);

}  // namespace nlshom
