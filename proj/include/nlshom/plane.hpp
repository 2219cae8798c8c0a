#pragma once

#include <array>
#include <vector>

#include "nlshom/common.hpp"
#include "nlshom/params.hpp"

namespace nlshom {

// Dynamics of spatially constant states q(t) = sqrt(I) e^{i theta}:
//   dI/dt     = epsilon (-2 alpha I + 2 beta sqrt(I) cos theta)
//   dtheta/dt = -2 (I - omega^2) - epsilon beta sin(theta) / sqrt(I)
// and its blow-up I = omega^2 + sqrt(epsilon) j in slow time tau = sqrt(eps) t:
//   j'     = 2 [-alpha (omega^2 + sqrt(eps) j) + beta sqrt(omega^2 + sqrt(eps) j) cos theta]
//   theta' = -2 j - sqrt(eps) beta sin(theta) / sqrt(omega^2 + sqrt(eps) j)
// whose epsilon -> 0 limit ("leading") is conservative with energy
//   H(j, theta) = j^2 + 2 omega (-alpha omega theta + beta sin theta).

struct PlaneState {
  double I = 0.0;      // action (or j in the rescaled charts)
  double theta = 0.0;  // phase
};

std::array<double, 2> plane_rhs(const PlaneState& s, const Params& p);
// Same flow in q = u + iv (no 1/sqrt(I) singularity at the origin)
std::array<double, 2> plane_rhs_cartesian(double u, double v, const Params& p);

enum class PlaneModel { full, rescaled, leading };

enum class FixedPointKind { focus, center, saddle };

struct PlaneFixedPoint {
  FixedPointKind kind;
  double I = 0.0;
  double theta = 0.0;
  std::array<cd, 2> mu_closed{};   // closed-form eigenvalues
  std::array<cd, 2> mu_numeric{};  // eigenvalues of the FD Jacobian
  double residual = 0.0;           // scaled stationarity residual
};

// The three stationary points of the full flow near the resonance circle:
// the small-amplitude focus, the outer center and the inner saddle.
// Newton-refined to machine precision; residual is max(|dI/dt|/eps, |dtheta/dt|).
std::vector<PlaneFixedPoint> fixed_points(const Params& p);

double fish_hamiltonian(double j, double theta, const Params& p);

// Saddle angle of the leading-order flow, theta_* = acos(alpha omega / beta).
double theta_star(const Params& p);

// Leading-order stationary points (j = 0, +-theta_*) with exact eigenvalues.
std::vector<PlaneFixedPoint> leading_fixed_points(const Params& p);

struct FishFrame {
  double theta_star;  // saddle angle, right end of the resonance band
  double theta_hat;   // head angle: left closure of the saddle level set
  double level;       // H(0, theta_*)
};

// Geometry of the saddle level set ("fish"): solves
// alpha omega (theta - theta_*) = beta (sin theta - sin theta_*)
// for the unique head angle in (-3 pi / 2, theta_*).
FishFrame fish_frame(const Params& p);

struct SeparatrixSample {
  double theta;
  double phi_unstable;
  double phi_stable;
};

// Unstable/stable branches of the saddle level set,
// phi^u(theta) = -sign(theta - theta_*) sqrt(2 omega [alpha omega (theta - theta_*)
//                - beta (sin theta - sin theta_*)]), phi^s = -phi^u,
// sampled on [theta_hat + delta_hat, theta_* + 2 pi]. Angles outside the level
// set's projection raise std::domain_error.
std::vector<SeparatrixSample> separatrix_curves(const Params& p,
                                                double delta_hat = 1e-3,
                                                std::size_t samples = 400);
double separatrix_unstable(double theta, const Params& p);

struct PlaneTrajectory {
  std::vector<double> t;  // t for the full model, tau for the rescaled ones
  std::vector<PlaneState> states;
  bool halted = false;  // stopped because the chart degenerated (I <= 0)
};

// Fixed-step RK4. For the full model states carry (I, theta); for the
// rescaled/leading models they carry (j, theta) and time is tau = sqrt(eps) t.
PlaneTrajectory integrate_plane(const PlaneState& s0, double t_end, double dt,
                                const Params& p, PlaneModel model);

}  // namespace nlshom
