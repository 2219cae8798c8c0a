// Tests for the split-step evolution: exactness on constant fields, agreement
// with the resonance-plane ODE, conservation and isospectrality on homoclinic
// data, linear growth rates, and the resolution/certificate guards.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nlshom/common.hpp"
#include "nlshom/darboux.hpp"
#include "nlshom/evolution.hpp"
#include "nlshom/field.hpp"
#include "nlshom/params.hpp"
#include "nlshom/plane.hpp"
#include "nlshom/zs.hpp"

using nlshom::cd;
using nlshom::iu;
using nlshom::pi;

namespace {

nlshom::SpectralField constant_field(cd value, std::size_t n) {
    return nlshom::SpectralField::from_values(std::vector<cd>(n, value));
}

} // namespace

TEST_CASE("plane waves evolve exactly under the splitting") {
    nlshom::Params p;
    p.omega = 0.8;
    const double a = 1.1;
    const double gamma = 0.3;

    nlshom::EvolutionSpec spec;
    spec.dt = 1e-4;
    spec.t_end = 1.0;
    spec.record_stride = 2000;

    auto q0 = constant_field(a * std::exp(-iu * gamma), 64);
    auto res = nlshom::evolve(q0, nlshom::Equation::nls, p, spec);

    const double theta = -(2.0 * (a * a - p.omega * p.omega) * spec.t_end + gamma);
    auto expected = constant_field(a * std::exp(iu * theta), 64);
    CHECK(sup_difference(res.final_state, expected) < 1e-12);
}

TEST_CASE("constant fields reproduce the resonance-plane ODE under forcing") {
    nlshom::Params p;
    p.omega = 0.8;
    p.alpha = 1.0;
    p.beta = 2.0;
    p.epsilon = 1e-2;

    const double r0 = 0.9;
    const double th0 = 0.2;
    const double t_end = 1.0;

    nlshom::EvolutionSpec spec;
    spec.dt = 1e-4;
    spec.t_end = t_end;
    spec.record_stride = 2000;
    auto res = nlshom::evolve(constant_field(r0 * std::exp(iu * th0), 64),
                              nlshom::Equation::pnls, p, spec);

    auto traj = nlshom::integrate_plane({r0 * r0, th0}, t_end, 1e-5, p,
                                        nlshom::PlaneModel::full);
    REQUIRE(!traj.halted);
    const auto& s = traj.states.back();
    const cd q_ref = std::sqrt(s.I) * std::exp(iu * s.theta);
    CHECK(sup_difference(res.final_state, constant_field(q_ref, 64)) < 1e-7);
}

TEST_CASE("mass is conserved exactly and energy to splitting order") {
    nlshom::PlaneWave pw;
    pw.a = 0.8;
    pw.omega = 0.8;
    auto orbit = nlshom::OnePairOrbit::even(pw, 0.0);
    auto q0 = orbit.snapshot(-1.0, 256);

    nlshom::Params p;
    p.omega = 0.8;
    nlshom::EvolutionSpec spec;
    spec.dt = 1e-4;
    spec.t_end = 2.0;
    spec.record_stride = 1000;

    auto res = nlshom::evolve(q0, nlshom::Equation::nls, p, spec);
    REQUIRE(res.records.size() > 5);

    const double mass0 = nlshom::field_mass(q0);
    const double energy0 = nlshom::nls_energy(q0, p.omega);
    for (const auto& rec : res.records) {
        CHECK(std::abs(rec.mass - mass0) / mass0 < 1e-11);
        CHECK(std::abs(rec.energy - energy0) < 1e-6);
    }
}

TEST_CASE("the evolution tracks the homoclinic orbit through its waist") {
    nlshom::PlaneWave pw;
    pw.a = 0.8;
    pw.omega = 0.8;
    auto orbit = nlshom::OnePairOrbit::even(pw, 0.0);
    const double t0 = -4.0;
    const std::size_t n = 256;

    nlshom::Params p;
    p.omega = 0.8;
    nlshom::EvolutionSpec spec;
    spec.dt = 1e-4;
    spec.t_end = 6.0;
    spec.record_stride = 20000;  // records every 2 time units

    nlshom::EvolveOptions opt;
    opt.record_snapshots = true;
    auto res = nlshom::evolve(orbit.snapshot(t0, n), nlshom::Equation::nls, p,
                              spec, opt);
    REQUIRE(res.snapshots.size() == res.records.size());
    REQUIRE(!res.snapshots.empty());

    double worst = 0.0;
    for (std::size_t j = 0; j < res.snapshots.size(); ++j) {
        const double t = res.records[j].t;
        worst = std::max(worst,
                         sup_difference(res.snapshots[j], orbit.snapshot(t0 + t, n)));
    }
    worst = std::max(worst,
                     sup_difference(res.final_state, orbit.snapshot(t0 + spec.t_end, n)));
    CHECK(worst < 1e-5);

    // The dt/2 certificate ran over the first time unit and must be tight.
    CHECK(res.cert_time == doctest::Approx(1.0));
    CHECK(res.cert_halving < 1e-8);
}

TEST_CASE("the discriminant is invariant along the evolution") {
    nlshom::PlaneWave pw;
    pw.a = 0.8;
    pw.omega = 0.8;
    auto orbit = nlshom::OnePairOrbit::even(pw, 0.0);
    const std::size_t n = 256;
    auto q0 = orbit.snapshot(-1.0, n);

    nlshom::Params p;
    p.omega = 0.8;
    nlshom::EvolutionSpec spec;
    spec.dt = 1e-4;
    spec.t_end = 2.0;
    spec.record_stride = 20000;
    auto res = nlshom::evolve(q0, nlshom::Equation::nls, p, spec);

    const cd lambda0(0.15, 0.3);
    CHECK(std::abs(nlshom::floquet_discriminant(res.final_state, lambda0) -
                   nlshom::floquet_discriminant(q0, lambda0)) < 1e-6);

    const cd nu = orbit.points().nu();
    auto cp = nlshom::refine_critical_point(res.final_state, nu);
    CHECK(std::abs(cp.lambda - nu) < 1e-5);
    CHECK(std::abs(cp.delta + 2.0) < 1e-6);
}

TEST_CASE("the unperturbed equation is the zero-forcing limit, bitwise") {
    nlshom::PlaneWave pw;
    pw.a = 0.8;
    pw.omega = 0.8;
    auto q0 = nlshom::OnePairOrbit::even(pw, 0.0).snapshot(0.2, 128);

    nlshom::Params p;
    p.omega = 0.8;
    p.alpha = 1.3;
    p.beta = 1.9;
    p.epsilon = 0.0;

    nlshom::EvolutionSpec spec;
    spec.dt = 1e-4;
    spec.t_end = 0.5;
    spec.record_stride = 5000;

    auto a = nlshom::evolve(q0, nlshom::Equation::nls, p, spec);
    auto b = nlshom::evolve(q0, nlshom::Equation::pnls, p, spec);
    CHECK(sup_difference(a.final_state, b.final_state) == 0.0);
}

TEST_CASE("seeded side bands grow at the linearized rate") {
    const double omega = 0.8;
    nlshom::Params p;
    p.omega = omega;

    const std::size_t n = 64;
    std::vector<cd> vals(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
        vals[m] = omega + 1e-8 * std::cos(x);
    }

    nlshom::EvolutionSpec spec;
    spec.dt = 1e-3;
    spec.t_end = 3.0;
    spec.record_stride = 100;
    nlshom::EvolveOptions opt;
    opt.record_snapshots = true;
    opt.halving_certificate = false;
    auto res = nlshom::evolve(nlshom::SpectralField::from_values(std::move(vals)),
                              nlshom::Equation::nls, p, spec, opt);

    // Least-squares slope of log side-band amplitude after the transient.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double count = 0;
    for (std::size_t j = 0; j < res.snapshots.size(); ++j) {
        const double t = res.records[j].t;
        if (t < 1.0) continue;
        const double amp = std::abs(res.snapshots[j].mode(1)) +
                           std::abs(res.snapshots[j].mode(-1));
        sx += t;
        sy += std::log(amp);
        sxx += t * t;
        sxy += t * std::log(amp);
        count += 1.0;
    }
    REQUIRE(count > 5);
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double mu = std::sqrt(4.0 * omega * omega - 1.0);
    CHECK(std::abs(slope - mu) / mu < 0.1);
}

TEST_CASE("the approach rate switches branch above the second band") {
    CHECK(nlshom::approach_rate(0.8) ==
          doctest::Approx(std::sqrt(4.0 * 0.64 - 1.0)).epsilon(1e-14));
    const double direct = std::sqrt(4.0 * 1.44 - 1.0);
    const double second = 4.0 * std::sqrt(1.44 - 1.0);
    CHECK(nlshom::approach_rate(1.2) ==
          doctest::Approx(std::min(direct, second)).epsilon(1e-14));
}

TEST_CASE("under-resolved data aborts with a tail diagnosis") {
    const std::size_t n = 64;
    std::vector<cd> vals(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
        vals[m] = 0.8 + 0.3 * std::cos(30.0 * x);
    }
    nlshom::Params p;
    p.omega = 0.8;
    nlshom::EvolutionSpec spec;
    spec.dt = 1e-3;
    spec.t_end = 0.1;
    spec.record_stride = 10;
    CHECK_THROWS_AS(nlshom::evolve(nlshom::SpectralField::from_values(std::move(vals)),
                                   nlshom::Equation::nls, p, spec),
                    std::runtime_error);
}

TEST_CASE("a small shadowing experiment produces consistent rows") {
    nlshom::Params p;
    p.omega = 0.8;
    p.alpha = 1.0;
    p.beta = 2.0;

    nlshom::EvolutionSpec spec;
    spec.dt = 5e-4;
    spec.t_end = 0.0;  // the experiment sets its own window
    spec.record_stride = 200;

    auto result = nlshom::tracking_experiment({1e-3}, p, 128, spec, 1.0);
    CHECK(result.mu == doctest::Approx(nlshom::approach_rate(p.omega)).epsilon(1e-14));
    CHECK(result.reference_check == 0.0);
    REQUIRE(result.rows.size() == 1);
    const auto& row = result.rows[0];
    CHECK(row.epsilon == 1e-3);
    CHECK(row.window_end > row.window_start);
    CHECK(row.sup_distance > 0.0);
    CHECK(std::isfinite(row.bound_ratio));
    CHECK(row.bound_ratio > 0.0);
    // The center-stable correction is an O(epsilon) adjustment.
    CHECK(std::abs(row.correction_scale) < 50.0);
}

TEST_CASE("tracking experiment rejects the two-mode regime") {
    nlshom::Params p;
    p.omega = 1.2;
    nlshom::EvolutionSpec spec;
    spec.dt = 1e-3;
    CHECK_THROWS_AS(nlshom::tracking_experiment({1e-3}, p, 64, spec, 0.5),
                    std::domain_error);
}
