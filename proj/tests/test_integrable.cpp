// Tests for the spatial spectral problem (transfer matrices, the Floquet
// discriminant and its critical points) and for the dressed homoclinic
// orbits. Oracles: the plane-wave discriminant in closed form, hand-computed
// double-point data, unimodularity and conjugation symmetries of the transfer
// flow, and the unperturbed equation itself via Richardson-extrapolated time
// differences of the closed-form orbits.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nlshom/common.hpp"
#include "nlshom/darboux.hpp"
#include "nlshom/field.hpp"
#include "nlshom/zs.hpp"

using nlshom::cd;
using nlshom::iu;
using nlshom::pi;

namespace {

nlshom::SpectralField smooth_random_field(std::size_t n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cd> coeff(7);
    for (auto& c : coeff) c = cd(dist(gen), dist(gen));

    std::vector<cd> v(n, cd(0.0, 0.0));
    for (std::size_t m = 0; m < n; ++m) {
        const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
        v[m] = cd(0.7, 0.1);
        for (int k = 1; k <= 3; ++k) {
            v[m] += 0.2 / k * coeff[k] * std::exp(cd(0.0, k * x)) +
                    0.2 / k * coeff[3 + k] * std::exp(cd(0.0, -k * x));
        }
    }
    return nlshom::SpectralField::from_values(std::move(v));
}

nlshom::SpectralField constant_field(std::size_t n, cd value) {
    return nlshom::SpectralField::from_values(std::vector<cd>(n, value));
}

// sup_x |i dQ/dt - Q_xx - 2(|Q|^2 - omega^2) Q| with the time derivative from
// Richardson-extrapolated central differences of the closed-form orbit.
template <typename Orbit>
double unperturbed_residual(const Orbit& orbit, double omega, double t, std::size_t n) {
    const double h = 1e-4;
    auto at = [&](double s) { return orbit.snapshot(s, n); };

    auto d_h = (0.5 / h) * (at(t + h) + (-1.0) * at(t - h));
    auto d_h2 = (1.0 / h) * (at(t + 0.5 * h) + (-1.0) * at(t - 0.5 * h));
    auto dq = (1.0 / 3.0) * (4.0 * d_h2 + (-1.0) * d_h);

    auto q = at(t);
    auto qxx = q.derivative(2);
    double worst = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const cd residual =
            iu * dq[m] - qxx[m] - 2.0 * (std::norm(q[m]) - omega * omega) * q[m];
        worst = std::max(worst, std::abs(residual));
    }
    return worst;
}

} // namespace

TEST_CASE("transfer matrices are unimodular and internally consistent") {
    auto q = smooth_random_field(512, 5u);
    for (cd lambda : {cd(0.0, 0.0), cd(0.4, 0.0), cd(0.2, 0.5), cd(-0.3, -0.7)}) {
        auto res = nlshom::zs_transfer(q, lambda);
        CHECK(std::abs(res.monodromy.det() - cd(1.0, 0.0)) < 1e-10);
        CHECK(res.det_defect < 1e-10);
        CHECK(res.step_disagreement < 1e-8);
        CHECK(std::abs(res.discriminant - res.monodromy.trace()) < 1e-14);
    }
}

TEST_CASE("vanishing potential gives the free discriminant") {
    auto zero = constant_field(64, cd(0.0, 0.0));
    for (cd lambda : {cd(0.3, 0.0), cd(0.1, 0.4)}) {
        const cd expected = 2.0 * std::cos(2.0 * pi * lambda);
        CHECK(std::abs(nlshom::floquet_discriminant(zero, lambda) - expected) < 1e-10);
    }
}

TEST_CASE("plane wave discriminant matches the closed form") {
    const double a = 0.8;
    auto q = constant_field(128, cd(a, 0.0));
    for (cd lambda : {cd(0.0, 0.0), cd(0.35, 0.0), cd(0.2, 0.45), cd(0.0, 0.55)}) {
        const cd closed = nlshom::plane_wave_discriminant(a, lambda);
        const cd numeric = nlshom::floquet_discriminant(q, lambda);
        CHECK(std::abs(closed - numeric) < 1e-9);
    }
    // Hand value at the origin: Delta = 2 cos(2 pi a).
    CHECK(std::abs(nlshom::plane_wave_discriminant(a, cd(0.0, 0.0)) -
                   2.0 * std::cos(2.0 * pi * a)) < 1e-14);
}

TEST_CASE("discriminant respects the conjugation symmetry") {
    auto q = smooth_random_field(512, 11u);
    for (cd lambda : {cd(0.3, 0.2), cd(-0.1, 0.6)}) {
        const cd d = nlshom::floquet_discriminant(q, lambda);
        const cd d_conj = nlshom::floquet_discriminant(q, std::conj(lambda));
        CHECK(std::abs(d_conj - std::conj(d)) < 1e-10);
    }
}

TEST_CASE("Magnus and Runge-Kutta transfer flows agree") {
    auto q = smooth_random_field(512, 23u);
    const cd lambda(0.25, 0.35);
    auto rk = nlshom::zs_transfer(q, lambda).monodromy;
    auto mg = nlshom::zs_transfer_magnus(q, lambda, 32);
    CHECK(std::abs(rk.a - mg.a) < 1e-8);
    CHECK(std::abs(rk.b - mg.b) < 1e-8);
    CHECK(std::abs(rk.c - mg.c) < 1e-8);
    CHECK(std::abs(rk.d - mg.d) < 1e-8);
}

TEST_CASE("critical point refinement lands on the imaginary double point") {
    const double a = 0.8;
    const double sigma = std::sqrt(a * a - 0.25);
    auto q = constant_field(256, cd(a, 0.0));

    auto cp = nlshom::refine_critical_point(q, cd(0.02, 0.9 * sigma));
    CHECK(std::abs(cp.lambda - cd(0.0, sigma)) < 1e-8);
    CHECK(std::abs(cp.delta - cd(-2.0, 0.0)) < 1e-8);
    CHECK(cp.residual < 1e-9);
}

TEST_CASE("second derivative of the discriminant has closed forms at the double points") {
    {
        const double a = 0.8;
        const double sigma = std::sqrt(a * a - 0.25);
        auto q = constant_field(256, cd(a, 0.0));
        const cd d2 = nlshom::discriminant_second_derivative(q, cd(0.0, sigma));
        const double expected = -32.0 * pi * pi * sigma * sigma;
        CHECK(std::abs(d2 - cd(expected, 0.0)) / std::abs(expected) < 1e-4);
    }
    {
        const double a = 1.2;
        const double sigma_hat = std::sqrt(a * a - 1.0);
        auto q = constant_field(256, cd(a, 0.0));
        const cd d2 = nlshom::discriminant_second_derivative(q, cd(0.0, sigma_hat));
        const double expected = 8.0 * pi * pi * sigma_hat * sigma_hat;
        CHECK(std::abs(d2 - cd(expected, 0.0)) / std::abs(expected) < 1e-4);
    }
}

TEST_CASE("Bloch eigenfunctions follow the transfer flow") {
    nlshom::PlaneWave pw;
    pw.a = 0.8;
    pw.omega = 0.8;
    const cd lambda(0.2, 0.3);
    const double t = 0.7;
    const std::size_t n = 128;

    auto q = constant_field(n, pw.value(t));
    auto path = nlshom::zs_transfer_path(q, lambda);
    REQUIRE(path.size() == n + 1);

    for (int sign : {+1, -1}) {
        auto psi0 = nlshom::bloch(pw, lambda, sign, t, 0.0);
        double worst = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const double x = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
            auto prop = nlshom::apply(path[j], psi0);
            auto exact = nlshom::bloch(pw, lambda, sign, t, x);
            worst = std::max(worst, std::abs(prop[0] - exact[0]) + std::abs(prop[1] - exact[1]));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("Bloch pair has the constant Wronskian -2ak") {
    nlshom::PlaneWave pw;
    pw.a = 0.8;
    pw.omega = 0.75;
    const cd lambda(0.15, 0.45);
    const cd k = std::sqrt(pw.a * pw.a + lambda * lambda);

    for (double t : {0.0, 1.3}) {
        for (double x : {0.0, 1.1, 4.9}) {
            auto p = nlshom::bloch(pw, lambda, +1, t, x);
            auto m = nlshom::bloch(pw, lambda, -1, t, x);
            const cd w = p[0] * m[1] - p[1] * m[0];
            CHECK(std::abs(w - (-2.0 * pw.a * k)) < 1e-12);
        }
    }
}

TEST_CASE("double point data matches the radicals") {
    auto d = nlshom::double_points(0.8);
    CHECK(d.sigma == doctest::Approx(std::sqrt(0.8 * 0.8 - 0.25)).epsilon(1e-14));
    CHECK(!d.has_second);
    // 1/2 + i sigma = a e^{i theta0}
    CHECK(std::cos(d.theta0) == doctest::Approx(0.5 / 0.8).epsilon(1e-14));
    CHECK(std::sin(d.theta0) == doctest::Approx(d.sigma / 0.8).epsilon(1e-14));

    auto d2 = nlshom::double_points(1.2);
    CHECK(d2.has_second);
    CHECK(d2.sigma_hat == doctest::Approx(std::sqrt(1.2 * 1.2 - 1.0)).epsilon(1e-14));
    CHECK(std::cos(d2.theta0_hat) == doctest::Approx(1.0 / 1.2).epsilon(1e-14));

    CHECK_THROWS_AS(nlshom::double_points(0.4), std::domain_error);
    CHECK_THROWS_AS(nlshom::double_points(1.6), std::domain_error);
}

TEST_CASE("gauge matrix determinant factors through the dressing pair") {
    std::mt19937 gen(3u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const cd nu(0.2, 0.8);
    for (int trial = 0; trial < 5; ++trial) {
        const std::array<cd, 2> phi{cd(dist(gen), dist(gen)), cd(dist(gen), dist(gen))};
        const cd lambda(dist(gen), dist(gen));
        auto g = nlshom::darboux_gauge(lambda, nu, phi);
        const cd expected = (lambda - nu) * (lambda - std::conj(nu));
        CHECK(std::abs(g.det() - expected) < 1e-12);
    }
}

TEST_CASE("real dressing parameter leaves the potential unchanged") {
    const cd q(0.7, -0.2);
    const std::array<cd, 2> phi{cd(0.3, 0.9), cd(-0.5, 0.1)};
    CHECK(std::abs(nlshom::darboux_potential(q, cd(0.6, 0.0), phi) - q) < 1e-15);
}

TEST_CASE("one-pair orbit agrees with the raw dressing formula") {
    nlshom::PlaneWave pw;
    pw.a = 0.8;
    pw.omega = 0.8;
    pw.gamma = 0.4;
    auto orbit = nlshom::OnePairOrbit::even(pw, 0.3);
    const cd nu = orbit.points().nu();
    const std::size_t n = 64;

    double worst = 0.0;
    for (double t : {-2.0, 0.0, 1.7}) {
        const cd qc = pw.value(t);
        for (std::size_t m = 0; m < n; ++m) {
            const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
            const cd direct = nlshom::darboux_potential(qc, nu, orbit.phi(t, x));
            worst = std::max(worst, std::abs(direct - orbit.value(t, x)));
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("dressing solution norm has a closed form for the even orbit") {
    nlshom::PlaneWave pw;
    pw.a = 0.8;
    pw.omega = 0.8;
    auto orbit = nlshom::OnePairOrbit::even(pw, -0.5);
    const double s0 = std::sin(orbit.points().theta0);

    for (double t : {-1.2, 0.0, 0.9}) {
        const double tau = orbit.tau(t);
        for (double x : {0.0, 0.7, 2.9}) {
            const double lhs = std::norm(orbit.u1(t, x)) + std::norm(orbit.u2(t, x));
            const double rhs = std::cosh(tau) + s0 * std::cos(x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("even orbit is symmetric in x") {
    nlshom::PlaneWave pw;
    pw.a = 0.8;
    pw.omega = 0.8;
    auto orbit = nlshom::OnePairOrbit::even(pw, 0.2);
    auto snap = orbit.snapshot(0.35, 128);
    double worst = 0.0;
    for (std::size_t m = 1; m < 128; ++m)
        worst = std::max(worst, std::abs(snap[m] - snap[128 - m]));
    CHECK(worst < 1e-12);
}

TEST_CASE("one-pair orbit approaches phase-shifted plane waves") {
    nlshom::PlaneWave pw;
    pw.a = 0.8;
    pw.omega = 0.8;
    auto orbit = nlshom::OnePairOrbit::even(pw, 0.0);
    const double theta0 = orbit.points().theta0;

    CHECK(std::abs(orbit.asymptotic_phase(+1) - std::exp(-2.0 * iu * theta0)) < 1e-14);
    CHECK(std::abs(orbit.asymptotic_phase(-1) - std::exp(2.0 * iu * theta0)) < 1e-14);

    for (int sign : {+1, -1}) {
        const double t = 40.0 * sign;
        const cd target = orbit.asymptotic_phase(sign);
        for (double x : {0.0, 1.9}) {
            CHECK(std::abs(orbit.envelope(t, x) - target) < 1e-12);
        }
    }
}

TEST_CASE("one-pair orbit solves the unperturbed equation") {
    {
        nlshom::PlaneWave pw;
        pw.a = 0.8;
        pw.omega = 0.8;
        auto orbit = nlshom::OnePairOrbit::even(pw, 0.3);
        CHECK(unperturbed_residual(orbit, pw.omega, 0.4, 128) < 1e-6);
    }
    {
        // Background amplitude off the resonance circle: the plane-wave phase
        // rotates, the orbit must still satisfy the same equation.
        nlshom::PlaneWave pw;
        pw.a = 0.8;
        pw.omega = 0.75;
        pw.gamma = 1.1;
        nlshom::OnePairOrbit orbit(pw, -0.2, 0.9);
        CHECK(unperturbed_residual(orbit, pw.omega, -0.6, 128) < 1e-6);
    }
}

TEST_CASE("two-pair closed form equals the iterated dressing") {
    nlshom::PlaneWave pw;
    pw.a = 1.2;
    pw.omega = 1.2;
    auto orbit = nlshom::TwoPairOrbit::even(pw, 0.2, -0.35);

    double worst = 0.0;
    for (double t : {-1.3, 0.0, 0.8}) {
        for (std::size_t m = 0; m < 64; ++m) {
            const double x = 2.0 * pi * static_cast<double>(m) / 64.0;
            worst = std::max(worst, std::abs(orbit.value(t, x) - orbit.value_iterated(t, x)));
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("two-pair orbit approaches doubly shifted plane waves") {
    nlshom::PlaneWave pw;
    pw.a = 1.2;
    pw.omega = 1.2;
    auto orbit = nlshom::TwoPairOrbit::even(pw, 0.0, 0.0);
    const double total = orbit.points().theta0 + orbit.points().theta0_hat;

    CHECK(std::abs(orbit.asymptotic_phase(+1) - std::exp(-2.0 * iu * total)) < 1e-14);
    CHECK(std::abs(orbit.asymptotic_phase(-1) - std::exp(2.0 * iu * total)) < 1e-14);

    for (int sign : {+1, -1}) {
        const double t = 30.0 * sign;
        for (double x : {0.3, 2.2}) {
            CHECK(std::abs(orbit.envelope(t, x) - orbit.asymptotic_phase(sign)) < 1e-10);
        }
    }
}

TEST_CASE("two-pair orbit solves the unperturbed equation") {
    nlshom::PlaneWave pw;
    pw.a = 1.2;
    pw.omega = 1.2;
    auto orbit = nlshom::TwoPairOrbit::even(pw, 0.15, 0.4);
    CHECK(unperturbed_residual(orbit, pw.omega, 0.25, 128) < 1e-6);
}

TEST_CASE("normalized S-hat fields invert the dressed eigenfunction norm") {
    nlshom::PlaneWave pw;
    pw.a = 1.2;
    pw.omega = 1.2;
    auto orbit = nlshom::TwoPairOrbit::even(pw, 0.1, -0.2);

    for (double t : {-0.7, 0.2}) {
        for (double x : {0.4, 1.8, 3.3}) {
            auto v = orbit.big_v(t, x);
            auto sh = orbit.s_hat_fields(t, x);
            const double vnorm = std::norm(v[0]) + std::norm(v[1]);
            const double snorm = std::norm(sh[0]) + std::norm(sh[1]);
            CHECK(snorm * vnorm == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("gauge grids carry the dressing bookkeeping") {
    nlshom::PlaneWave pw;
    pw.a = 0.8;
    pw.omega = 0.8;
    auto orbit = nlshom::OnePairOrbit::even(pw, 0.3);
    const std::size_t n = 64;
    auto grids = nlshom::one_pair_gauge_grids(orbit, 0.5, n);
    REQUIRE(grids.plus.size() == n);
    REQUIRE(grids.minus.size() == n);

    // The residual determinant factor for a single dressing is nu - conj(nu).
    const cd nu = orbit.points().nu();
    CHECK(std::abs(grids.extra_det - (nu - std::conj(nu))) < 1e-12);
    CHECK(std::abs(grids.wronskian_base) > 1e-10);
}
