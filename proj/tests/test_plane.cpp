// Tests for the spatially constant ("resonance plane") dynamics: stationary
// points and their spectra, the leading-order fish geometry, separatrix
// branches, and the fixed-step integrator against conserved quantities.
//
// Closed-form eigenvalues are cross-checked with eigenvalues of a finite
// difference Jacobian computed inside the library, and here against a few
// hand-evaluated numbers for a standard parameter point.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "nlshom/common.hpp"
#include "nlshom/params.hpp"
#include "nlshom/plane.hpp"

using nlshom::cd;
using nlshom::pi;

namespace {

// omega = 1 is rejected by parameter validation (a linearized-mode boundary),
// so Newton-refined fixed points are exercised at a nearby frequency.
nlshom::Params refined_params() {
    nlshom::Params p;
    p.omega = 0.9;
    p.alpha = 1.0;
    p.beta = 2.0;
    p.epsilon = 1e-3;
    return p;
}

// The leading-order (conservative) flow has clean closed forms at omega = 1,
// and none of its entry points touch the PDE-level validation.
nlshom::Params standard_params() {
    nlshom::Params p;
    p.omega = 1.0;
    p.alpha = 1.0;
    p.beta = 2.0;
    p.epsilon = 1e-3;
    return p;
}

} // namespace

TEST_CASE("stationary points sit where the vector field vanishes") {
    auto p = refined_params();
    auto pts = nlshom::fixed_points(p);
    REQUIRE(pts.size() == 3);
    for (const auto& fp : pts) {
        CHECK(fp.residual < 1e-10);
        // The refined point must actually annihilate the right-hand side.
        auto rhs = nlshom::plane_rhs({fp.I, fp.theta}, p);
        CHECK(std::abs(rhs[0]) / p.epsilon < 1e-9);
        CHECK(std::abs(rhs[1]) < 1e-9);
    }
}

TEST_CASE("outer center action matches its expansion in epsilon") {
    auto p = refined_params();
    auto pts = nlshom::fixed_points(p);

    // The outer pair of stationary points sits at
    // I = omega^2 +- (eps / 2 omega) sqrt(beta^2 - alpha^2 omega^2) + O(eps^2).
    const double shift = 0.5 * p.epsilon / p.omega * std::sqrt(p.beta * p.beta - p.alpha * p.alpha * p.omega * p.omega);
    bool found_center = false;
    bool found_saddle = false;
    for (const auto& fp : pts) {
        if (fp.kind == nlshom::FixedPointKind::center) {
            CHECK(fp.I == doctest::Approx(p.omega * p.omega + shift).epsilon(1e-4));
            found_center = true;
        }
        if (fp.kind == nlshom::FixedPointKind::saddle) {
            CHECK(fp.I == doctest::Approx(p.omega * p.omega - shift).epsilon(1e-4));
            found_saddle = true;
        }
    }
    CHECK(found_center);
    CHECK(found_saddle);
}

TEST_CASE("closed-form eigenvalues agree with the finite difference Jacobian") {
    auto p = refined_params();
    for (const auto& fp : nlshom::fixed_points(p)) {
        for (int j = 0; j < 2; ++j) {
            const double scale = std::max(1.0, std::abs(fp.mu_closed[j]));
            CHECK(std::abs(fp.mu_closed[j] - fp.mu_numeric[j]) / scale < 1e-5);
        }
    }
}

TEST_CASE("focus eigenvalues have the dissipative real part") {
    auto p = refined_params();
    for (const auto& fp : nlshom::fixed_points(p)) {
        if (fp.kind != nlshom::FixedPointKind::focus) continue;
        // The small-amplitude focus attracts at rate eps alpha and rotates at
        // the detuning frequency 2 omega^2 to leading order.
        CHECK(fp.mu_closed[0].real() == doctest::Approx(-p.epsilon * p.alpha).epsilon(1e-2));
        CHECK(std::abs(fp.mu_closed[0].imag()) == doctest::Approx(2.0 * p.omega * p.omega).epsilon(1e-2));
    }
}

TEST_CASE("saddle growth rate scales like sqrt(epsilon)") {
    auto p = refined_params();
    for (const auto& fp : nlshom::fixed_points(p)) {
        if (fp.kind != nlshom::FixedPointKind::saddle) continue;
        // mu ~ +- sqrt(eps) * 2 sqrt(omega) (beta^2 - alpha^2 omega^2)^{1/4}
        const double predicted = std::sqrt(p.epsilon) * 2.0 * std::sqrt(p.omega) *
                                 std::pow(p.beta * p.beta - p.alpha * p.alpha * p.omega * p.omega, 0.25);
        double growth = 0.0;
        for (const auto& mu : fp.mu_closed) growth = std::max(growth, mu.real());
        CHECK(growth == doctest::Approx(predicted).epsilon(5e-2));
    }
}

TEST_CASE("leading-order saddle data has closed forms at the standard point") {
    auto p = standard_params();
    // alpha omega / beta = 1/2, so theta_* = pi/3.
    CHECK(nlshom::theta_star(p) == doctest::Approx(pi / 3.0).epsilon(1e-14));

    auto lead = nlshom::leading_fixed_points(p);
    REQUIRE(lead.size() == 2);
    bool saw_saddle = false;
    bool saw_center = false;
    for (const auto& fp : lead) {
        CHECK(fp.residual < 1e-12);
        if (fp.kind == nlshom::FixedPointKind::saddle) {
            saw_saddle = true;
            CHECK(fp.theta == doctest::Approx(pi / 3.0).epsilon(1e-12));
            // mu = +- 2 [omega beta |sin theta_*|]^{1/2} = +- 2 * 3^{1/4}
            const double mu = 2.0 * std::pow(3.0, 0.25);
            const double lo = std::min(fp.mu_closed[0].real(), fp.mu_closed[1].real());
            const double hi = std::max(fp.mu_closed[0].real(), fp.mu_closed[1].real());
            CHECK(lo == doctest::Approx(-mu).epsilon(1e-12));
            CHECK(hi == doctest::Approx(mu).epsilon(1e-12));
        }
        if (fp.kind == nlshom::FixedPointKind::center) {
            saw_center = true;
            CHECK(fp.theta == doctest::Approx(-pi / 3.0).epsilon(1e-12));
            CHECK(fp.mu_closed[0].real() == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(std::abs(fp.mu_closed[0].imag()) == doctest::Approx(2.0 * std::pow(3.0, 0.25)).epsilon(1e-12));
        }
    }
    CHECK(saw_saddle);
    CHECK(saw_center);
}

TEST_CASE("fish frame closes the saddle level set") {
    auto p = standard_params();
    auto frame = nlshom::fish_frame(p);

    CHECK(frame.theta_star == doctest::Approx(pi / 3.0).epsilon(1e-13));
    // H(0, theta_*) = 2 omega (beta sin theta_* - alpha omega theta_*) = 2(sqrt(3) - pi/3).
    const double level = 2.0 * (std::sqrt(3.0) - pi / 3.0);
    CHECK(frame.level == doctest::Approx(level).epsilon(1e-13));
    CHECK(nlshom::fish_hamiltonian(0.0, frame.theta_star, p) == doctest::Approx(frame.level).epsilon(1e-13));

    // The head angle lies strictly left of the saddle and on the same level set.
    CHECK(frame.theta_hat < frame.theta_star);
    CHECK(nlshom::fish_hamiltonian(0.0, frame.theta_hat, p) == doctest::Approx(frame.level).epsilon(1e-10));
}

TEST_CASE("separatrix branches stay on the saddle energy level") {
    auto p = standard_params();
    auto frame = nlshom::fish_frame(p);
    auto samples = nlshom::separatrix_curves(p);
    REQUIRE(samples.size() >= 100);

    double worst = 0.0;
    for (const auto& s : samples) {
        worst = std::max(worst, std::abs(nlshom::fish_hamiltonian(s.phi_unstable, s.theta, p) - frame.level));
        worst = std::max(worst, std::abs(nlshom::fish_hamiltonian(s.phi_stable, s.theta, p) - frame.level));
        CHECK(s.phi_stable == doctest::Approx(-s.phi_unstable).epsilon(1e-14));
    }
    CHECK(worst < 1e-10);

    // Left of the head angle the level set has no real j branch.
    CHECK_THROWS_AS(nlshom::separatrix_unstable(frame.theta_hat - 2.0 * pi, p), std::domain_error);
}

TEST_CASE("leading model conserves the fish energy along orbits") {
    auto p = standard_params();
    // Start inside the fish, below the saddle level.
    nlshom::PlaneState s0{0.4, -0.5};
    auto traj = nlshom::integrate_plane(s0, 8.0, 1e-4, p, nlshom::PlaneModel::leading);
    REQUIRE(!traj.halted);
    REQUIRE(traj.states.size() > 100);

    const double h0 = nlshom::fish_hamiltonian(s0.I, s0.theta, p);
    double worst = 0.0;
    for (const auto& s : traj.states)
        worst = std::max(worst, std::abs(nlshom::fish_hamiltonian(s.I, s.theta, p) - h0));
    CHECK(worst < 1e-10);
}

TEST_CASE("full and rescaled charts describe the same motion") {
    auto p = standard_params();
    p.epsilon = 1e-2;

    // Full chart initial state (I, theta); rescaled chart uses j with
    // I = omega^2 + sqrt(eps) j and tau = sqrt(eps) t.
    const double j0 = 0.3;
    const double theta0 = 0.2;
    nlshom::PlaneState full0{p.omega * p.omega + std::sqrt(p.epsilon) * j0, theta0};
    nlshom::PlaneState resc0{j0, theta0};

    const double tau_end = 1.0;
    const double t_end = tau_end / std::sqrt(p.epsilon);
    auto full = nlshom::integrate_plane(full0, t_end, 1e-4, p, nlshom::PlaneModel::full);
    auto resc = nlshom::integrate_plane(resc0, tau_end, 1e-5, p, nlshom::PlaneModel::rescaled);
    REQUIRE(!full.halted);
    REQUIRE(!resc.halted);

    const auto& fe = full.states.back();
    const auto& re = resc.states.back();
    CHECK(fe.I == doctest::Approx(p.omega * p.omega + std::sqrt(p.epsilon) * re.I).epsilon(1e-8));
    CHECK(fe.theta == doctest::Approx(re.theta).epsilon(1e-7));
}

TEST_CASE("cartesian form of the flow matches the polar form") {
    auto p = standard_params();
    const double I = 0.7;
    const double theta = 0.9;
    const double u = std::sqrt(I) * std::cos(theta);
    const double v = std::sqrt(I) * std::sin(theta);

    auto polar = nlshom::plane_rhs({I, theta}, p);
    auto cart = nlshom::plane_rhs_cartesian(u, v, p);

    // dI/dt = 2(u du + v dv), dtheta/dt = (u dv - v du)/I.
    const double dI = 2.0 * (u * cart[0] + v * cart[1]);
    const double dtheta = (u * cart[1] - v * cart[0]) / I;
    CHECK(dI == doctest::Approx(polar[0]).epsilon(1e-12));
    CHECK(dtheta == doctest::Approx(polar[1]).epsilon(1e-12));
}

TEST_CASE("integrator halts when a step would leave the polar chart") {
    // Near I = 0 the polar chart degenerates. A step that would carry a stage
    // value across I = 0 must stop the trajectory instead of producing NaNs.
    nlshom::Params p;
    p.omega = 0.9;
    p.alpha = 0.0;
    p.beta = 1.0;
    p.epsilon = 1.0;
    nlshom::PlaneState s0{0.01, 2.9};
    auto traj = nlshom::integrate_plane(s0, 5.0, 0.5, p, nlshom::PlaneModel::full);
    CHECK(traj.halted);
    CHECK(traj.t.back() < 5.0);
    for (const auto& s : traj.states) {
        CHECK(std::isfinite(s.I));
        CHECK(s.I > 0.0);
    }
}
