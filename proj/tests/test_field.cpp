// Tests for the spectral field layer: FFT conventions, derivatives, norms,
// band-limited upsampling, serialization round trips, and Gauss quadrature.
//
// The FFT is checked against a direct O(N^2) discrete Fourier sum so that any
// normalization or sign slip in the fast path is caught by an independent
// implementation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "nlshom/common.hpp"
#include "nlshom/fft.hpp"
#include "nlshom/field.hpp"
#include "nlshom/io.hpp"
#include "nlshom/quadrature.hpp"

using nlshom::cd;
using nlshom::pi;

namespace {

std::vector<cd> random_values(std::size_t n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cd> v(n);
    for (auto& z : v) z = cd(dist(gen), dist(gen));
    return v;
}

// Direct discrete Fourier sum with the convention hat(k) = (1/n) sum_m q_m e^{-i k x_m}.
std::vector<cd> dft_reference(const std::vector<cd>& values) {
    const std::size_t n = values.size();
    std::vector<cd> hat(n, cd(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        const int k = nlshom::fft_wavenumber(j, n);
        cd acc(0.0, 0.0);
        for (std::size_t m = 0; m < n; ++m) {
            const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
            acc += values[m] * std::exp(cd(0.0, -k * x));
        }
        hat[j] = acc / static_cast<double>(n);
    }
    return hat;
}

} // namespace

TEST_CASE("fft matches the direct discrete Fourier sum") {
    const std::size_t n = 64;
    auto values = random_values(n, 2026u);
    auto reference = dft_reference(values);

    auto fast = values;
    nlshom::fft_forward(fast);

    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(fast[j] - reference[j]));
    CHECK(worst < 1e-13);
}

TEST_CASE("fft forward then backward is the identity") {
    const std::size_t n = 128;
    auto values = random_values(n, 7u);
    auto round = values;
    nlshom::fft_forward(round);
    nlshom::fft_backward(round);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(round[j] - values[j]));
    CHECK(worst < 1e-13);
}

TEST_CASE("Parseval identity connects grid and mode sums") {
    const std::size_t n = 64;
    auto field = nlshom::SpectralField::from_values(random_values(n, 41u));

    double grid_sum = 0.0;
    for (std::size_t m = 0; m < n; ++m) grid_sum += std::norm(field[m]);
    grid_sum *= 2.0 * pi / static_cast<double>(n);

    double mode_sum = 0.0;
    for (const auto& hat : field.modes()) mode_sum += std::norm(hat);
    mode_sum *= 2.0 * pi;

    CHECK(grid_sum == doctest::Approx(mode_sum).epsilon(1e-13));
    CHECK(field.l2_norm() == doctest::Approx(std::sqrt(grid_sum)).epsilon(1e-13));
}

TEST_CASE("derivatives are exact on trigonometric fields") {
    const std::size_t n = 64;
    std::vector<cd> values(n);
    auto x_of = [&](std::size_t m) { return 2.0 * pi * static_cast<double>(m) / static_cast<double>(n); };
    for (std::size_t m = 0; m < n; ++m) {
        const double x = x_of(m);
        values[m] = cd(std::cos(3.0 * x), std::sin(5.0 * x));
    }
    auto field = nlshom::SpectralField::from_values(values);

    auto d1 = field.derivative(1);
    auto d2 = field.derivative(2);
    double worst1 = 0.0;
    double worst2 = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double x = x_of(m);
        const cd exact1(-3.0 * std::sin(3.0 * x), 5.0 * std::cos(5.0 * x));
        const cd exact2(-9.0 * std::cos(3.0 * x), -25.0 * std::sin(5.0 * x));
        worst1 = std::max(worst1, std::abs(d1[m] - exact1));
        worst2 = std::max(worst2, std::abs(d2[m] - exact2));
    }
    CHECK(worst1 < 1e-12);
    CHECK(worst2 < 1e-11);
}

TEST_CASE("Sobolev norm of a single cosine has a closed form") {
    const std::size_t n = 32;
    const int k = 4;
    std::vector<cd> values(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
        values[m] = cd(std::cos(k * x), 0.0);
    }
    auto field = nlshom::SpectralField::from_values(values);

    // cos(kx) has modes 1/2 at +-k, so ||.||_{H^1}^2 = 2 pi (1+k^2)/2.
    const double expected = std::sqrt(pi * (1.0 + k * k));
    CHECK(field.sobolev_norm(1.0) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(field.sup_norm() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("upsampling reproduces band-limited fields at the finer nodes") {
    const std::size_t n = 32;
    std::mt19937 gen(99u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cd> modes(n, cd(0.0, 0.0));
    for (int k = -7; k <= 7; ++k) modes[nlshom::fft_index(k, n)] = cd(dist(gen), dist(gen));

    auto coarse = nlshom::SpectralField::from_modes(modes);
    auto fine_values = nlshom::upsample(coarse.values(), 4);

    double worst = 0.0;
    for (std::size_t m = 0; m < fine_values.size(); ++m) {
        const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(fine_values.size());
        cd exact(0.0, 0.0);
        for (int k = -7; k <= 7; ++k) exact += modes[nlshom::fft_index(k, n)] * std::exp(cd(0.0, k * x));
        worst = std::max(worst, std::abs(fine_values[m] - exact));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("mode accessor and mean agree with construction data") {
    const std::size_t n = 16;
    std::vector<cd> modes(n, cd(0.0, 0.0));
    modes[nlshom::fft_index(0, n)] = cd(0.25, -0.5);
    modes[nlshom::fft_index(3, n)] = cd(1.0, 2.0);
    modes[nlshom::fft_index(-3, n)] = cd(-1.0, 0.5);
    auto field = nlshom::SpectralField::from_modes(modes);

    CHECK(std::abs(field.mean() - cd(0.25, -0.5)) < 1e-14);
    CHECK(std::abs(field.mode(3) - cd(1.0, 2.0)) < 1e-14);
    CHECK(std::abs(field.mode(-3) - cd(-1.0, 0.5)) < 1e-14);
    CHECK(std::abs(field.mode(5)) < 1e-14);
}

TEST_CASE("field arithmetic acts pointwise") {
    const std::size_t n = 16;
    auto a = nlshom::SpectralField::from_values(random_values(n, 1u));
    auto b = nlshom::SpectralField::from_values(random_values(n, 2u));

    auto sum = a + b;
    auto scaled = cd(0.0, 2.0) * a;
    double worst = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        worst = std::max(worst, std::abs(sum[m] - (a[m] + b[m])));
        worst = std::max(worst, std::abs(scaled[m] - cd(0.0, 2.0) * a[m]));
    }
    CHECK(worst == 0.0);
    CHECK(nlshom::sup_difference(a, a) == 0.0);
}

TEST_CASE("format_double round trips awkward values exactly") {
    const double samples[] = {1.0 / 3.0, 1e-17, -2.5e300, 0.1, -0.0, 123456789.123456789, pi};
    for (double v : samples) {
        const std::string text = nlshom::format_double(v);
        const double back = std::stod(text);
        CHECK(back == v);
    }
}

TEST_CASE("csv field serialization round trips bitwise") {
    const std::size_t n = 32;
    auto field = nlshom::SpectralField::from_values(random_values(n, 1234u));
    const std::string path = "test_field_roundtrip.csv";
    nlshom::write_field_csv(field, path);
    auto back = nlshom::read_field_csv(path);
    REQUIRE(back.size() == n);
    CHECK(nlshom::sup_difference(field, back) == 0.0);

    // Writing the same field twice must produce identical bytes.
    std::ifstream first(path);
    std::stringstream buf1;
    buf1 << first.rdbuf();
    nlshom::write_field_csv(field, path);
    std::ifstream second(path);
    std::stringstream buf2;
    buf2 << second.rdbuf();
    CHECK(buf1.str() == buf2.str());
    std::remove(path.c_str());
}

TEST_CASE("json field serialization round trips to machine precision") {
    const std::size_t n = 64;
    auto field = nlshom::SpectralField::from_values(random_values(n, 77u));
    const std::string path = "test_field_roundtrip.json";
    nlshom::write_field_json(field, path);
    auto back = nlshom::read_field_json(path);
    REQUIRE(back.size() == n);

    // The json format stores modes while the field stores grid values, so the
    // round trip includes one forward/backward transform pair of roundoff.
    CHECK(nlshom::sup_difference(field, back) < 1e-14);
    std::remove(path.c_str());
}

TEST_CASE("Gauss-Legendre rule integrates polynomials of degree 2n-1") {
    nlshom::GaussLegendre rule(16);
    REQUIRE(rule.nodes.size() == 16);

    double weight_sum = 0.0;
    for (double w : rule.weights) weight_sum += w;
    CHECK(weight_sum == doctest::Approx(2.0).epsilon(1e-14));

    // int_{-1}^{1} x^{30} dx = 2/31, the highest even power a 16-point rule gets exactly.
    double moment = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        moment += rule.weights[j] * std::pow(rule.nodes[j], 30);
    CHECK(moment == doctest::Approx(2.0 / 31.0).epsilon(1e-13));

    double odd = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        odd += rule.weights[j] * std::pow(rule.nodes[j], 7);
    CHECK(std::abs(odd) < 1e-15);
}

TEST_CASE("composite Gauss panels integrate smooth functions to machine accuracy") {
    nlshom::GaussLegendre rule(8);
    auto nodes = nlshom::composite_gauss(0.0, 2.0, 6, rule);

    double integral = 0.0;
    double measure = 0.0;
    for (const auto& [x, w] : nodes) {
        integral += w * std::exp(x);
        measure += w;
    }
    CHECK(measure == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(integral == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-14));
}
