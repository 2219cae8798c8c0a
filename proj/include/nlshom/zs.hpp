#pragma once

#include <array>
#include <vector>

#include "nlshom/field.hpp"

namespace nlshom {

// 2x2 complex matrix, row major: [[a, b], [c, d]].
struct Mat2 {
  cd a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

  cd trace() const { return a + d; }
  cd det() const { return a * d - b * c; }
};

Mat2 operator*(const Mat2& x, const Mat2& y);
std::array<cd, 2> apply(const Mat2& m, const std::array<cd, 2>& v);

// Transfer matrix of the spatial spectral problem
//   psi_x = i [[lambda, q], [conj q, -lambda]] psi
// across one period, integrated by RK4 on a band-limited oversampling of q.
// Each call integrates at two step sizes; a discriminant disagreement above
// 1e-8 raises std::runtime_error (accuracy failure), and the finer result is
// returned.
struct TransferResult {
  Mat2 monodromy;
  cd discriminant;
  double det_defect;       // |det M - 1|
  double step_disagreement;
};

TransferResult zs_transfer(const SpectralField& q, cd lambda);

// Transfer matrices M(x_m) at the coarse grid nodes, m = 0..n (x_n = 2 pi).
std::vector<Mat2> zs_transfer_path(const SpectralField& q, cd lambda);

// Second-order midpoint-exponential (Magnus) integrator, used as an
// independent cross-check of the RK4 path.
Mat2 zs_transfer_magnus(const SpectralField& q, cd lambda, int steps_per_node);

cd floquet_discriminant(const SpectralField& q, cd lambda);

// Plane wave q = a e^{i theta}: Delta = 2 cos(2 pi sqrt(a^2 + lambda^2)).
cd plane_wave_discriminant(double a, cd lambda);

struct CriticalPoint {
  cd lambda;
  cd delta;        // discriminant value there
  double residual; // |d Delta / d lambda| at the refined point
};

// Newton refinement of d Delta / d lambda = 0 from a seed, with the derivative
// taken by 5-point centered differences (h = 1e-3).
CriticalPoint refine_critical_point(const SpectralField& q, cd seed);

// 5-point second derivative in lambda (h = 1e-4 Richardson stencil).
cd discriminant_second_derivative(const SpectralField& q, cd lambda,
                                  double h = 1e-4);

// Gradient of the discriminant Delta(lambda, .) with respect to (q, conj q),
// sampled on the grid of q.
struct GradientField {
  std::vector<cd> dq;
  std::vector<cd> dqbar;
};

// Non-degenerate case: Floquet eigenvectors of the monodromy transported
// along the period. Raises std::domain_error when the eigenbasis degenerates
// (double point); use the degenerate evaluator there.
GradientField floquet_gradient(const SpectralField& q, cd lambda);

// Degenerate (double point) case, with the directional data supplied by the
// caller: Phi± are the gauge-transformed eigenfunctions at the double point nu
// on the grid of q, wronskian_base is W of the underlying pre-gauge pair, and
// extra_det the product of gauge determinant factors left after cancelling the
// vanishing one against sqrt(Delta^2 - 4).
GradientField floquet_gradient_degenerate(
    const SpectralField& q, cd nu, const std::vector<std::array<cd, 2>>& phi_p,
    const std::vector<std::array<cd, 2>>& phi_m, cd wronskian_base, cd extra_det);

// Directional pairing <grad, dq> with the trapezoid inner product
// integral(dq grad_dq + conj(dq) grad_dqbar) dx.
cd pair_gradient(const GradientField& g, const std::vector<cd>& dq,
                 std::size_t n);

}  // namespace nlshom
