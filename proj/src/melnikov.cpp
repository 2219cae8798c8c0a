#include "nlshom/melnikov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nlshom/darboux.hpp"
#include "nlshom/field.hpp"
#include "nlshom/quadrature.hpp"
#include "nlshom/zs.hpp"

namespace nlshom {

double phase_shift_one_pair(double omega) {
  return -4.0 * double_points(omega).theta0;
}

double phase_shift_two_pair(double omega) {
  const DoublePointData d = double_points(omega);
  if (!d.has_second) {
    throw std::domain_error(
        "phase_shift_two_pair: needs omega in (1, 3/2) for the second pair");
  }
  return -4.0 * (d.theta0 + d.theta0_hat);
}

namespace {

std::vector<std::pair<double, double>> symmetric_time_nodes(
    double half_width, double panel_length, int nodes_per_panel) {
  const int half_panels =
      std::max(1, static_cast<int>(std::ceil(half_width / panel_length)));
  const GaussLegendre rule(nodes_per_panel);
  return composite_gauss(-half_width, half_width, 2 * half_panels, rule);
}

struct RawOnePair {
  cd c1{0.0}, c2{0.0}, c3{0.0}, c4{0.0};
};

RawOnePair one_pair_pass(const OnePairOrbit& orbit, double tau_max,
                         int nodes_per_unit, std::size_t nx) {
  const double sigma = orbit.points().sigma;
  const double omega = orbit.wave().omega;
  const double half_width = tau_max / (2.0 * sigma);
  const auto nodes =
      symmetric_time_nodes(half_width, 1.0 / (2.0 * sigma), nodes_per_unit);
  const double dx = 2.0 * pi / static_cast<double>(nx);

  RawOnePair acc;
  std::vector<cd> pvals(nx);
  for (const auto& [t, wt] : nodes) {
    for (std::size_t m = 0; m < nx; ++m) {
      pvals[m] = orbit.envelope(t, dx * static_cast<double>(m));
    }
    const SpectralField p = SpectralField::from_values(pvals);
    const SpectralField pxx = p.derivative(2);
    cd r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
    for (std::size_t m = 0; m < nx; ++m) {
      const double x = dx * static_cast<double>(m);
      const cd u1b = std::conj(orbit.u1(t, x));
      const cd u2b = std::conj(orbit.u2(t, x));
      const double den = std::norm(u1b) + std::norm(u2b);
      const double w = 1.0 / (den * den);
      const cd u1s = u1b * u1b * w;
      const cd u2s = u2b * u2b * w;
      const cd pv = p.values()[m];
      const cd pxxv = pxx.values()[m];
      r1 += u1s * pxxv - u2s * std::conj(pxxv);
      r2 += u2s * std::conj(pv) - u1s * pv;
      r3 += u1s - u2s;
      r4 += u1s + u2s;
    }
    acc.c1 += wt * dx * r1;
    acc.c2 += wt * dx * r2;
    acc.c3 += wt * dx * r3;
    acc.c4 += wt * dx * r4;
  }
  acc.c1 *= omega * omega;
  acc.c2 *= omega * omega;
  acc.c3 *= omega;
  acc.c4 *= iu * omega;
  return acc;
}

double relative_change(const std::vector<double>& base,
                       const std::vector<double>& refined) {
  double scale = 0.0;
  for (double v : base) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1e-300);
  double diff = 0.0;
  for (std::size_t j = 0; j < base.size(); ++j) {
    diff = std::max(diff, std::abs(base[j] - refined[j]));
  }
  return diff / scale;
}

}  // namespace

OnePairIntegrals melnikov_one_pair(double omega, const QuadratureSpec& quad,
                                   bool certificates) {
  const OnePairOrbit orbit =
      OnePairOrbit::even(PlaneWave{omega, omega, 0.0}, 0.0);
  const RawOnePair base =
      one_pair_pass(orbit, quad.tau_max, quad.nodes_per_unit, quad.x_grid);

  OnePairIntegrals out;
  out.omega = omega;
  out.m1 = base.c1.real();
  out.m2 = base.c2.real();
  out.m3 = base.c3.real();
  out.m4_diagnostic = base.c4.real();
  out.imag_residue =
      std::max({std::abs(base.c1.imag()), std::abs(base.c2.imag()),
                std::abs(base.c3.imag()), std::abs(base.c4.imag())});
  if (certificates) {
    const RawOnePair wide = one_pair_pass(orbit, quad.tau_max + 8.0,
                                          quad.nodes_per_unit, quad.x_grid);
    const RawOnePair dense = one_pair_pass(orbit, quad.tau_max,
                                           2 * quad.nodes_per_unit, quad.x_grid);
    out.cert_domain =
        relative_change({out.m1, out.m2, out.m3},
                        {wide.c1.real(), wide.c2.real(), wide.c3.real()});
    out.cert_nodes =
        relative_change({out.m1, out.m2, out.m3},
                        {dense.c1.real(), dense.c2.real(), dense.c3.real()});
  }
  return out;
}

KappaPoint kappa_point(double omega, const QuadratureSpec& quad,
                       bool certificates) {
  KappaPoint out;
  out.integrals = melnikov_one_pair(omega, quad, certificates);
  out.delta_gamma = phase_shift_one_pair(omega);
  const double s = std::sin(0.5 * out.delta_gamma);
  const double scale = std::max(
      {std::abs(out.integrals.m1), std::abs(out.integrals.m2),
       std::abs(out.integrals.m3), 1e-300});
  const double denom = 2.0 * out.integrals.m1 * s;
  if (std::abs(s) < 1e-10 || std::abs(denom) < 1e-10 * scale) {
    out.singular = true;
    return out;
  }
  out.kappa = -(2.0 * out.integrals.m2 * s +
                out.integrals.m3 * omega * out.delta_gamma) /
              denom;
  if (std::abs(out.kappa) < 1e-12) {
    out.singular = true;
    return out;
  }
  out.alpha = 1.0 / out.kappa;
  const double beta_cos_gamma =
      out.alpha * omega * out.delta_gamma / (2.0 * s);
  out.closure_residual =
      std::abs(out.integrals.m1 + out.alpha * out.integrals.m2 +
               beta_cos_gamma * out.integrals.m3) /
      scale;
  return out;
}

std::vector<KappaPoint> kappa_curve(double omega_lo, double omega_hi,
                                    std::size_t count,
                                    const QuadratureSpec& quad,
                                    bool certificates) {
  if (count < 2 || !(omega_lo < omega_hi)) {
    throw std::invalid_argument("kappa_curve: need omega_lo < omega_hi and "
                                "at least two samples");
  }
  std::vector<KappaPoint> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double w = omega_lo + (omega_hi - omega_lo) *
                                    static_cast<double>(j) /
                                    static_cast<double>(count - 1);
    out.push_back(kappa_point(w, quad, certificates));
  }
  return out;
}

namespace {

struct RawTwoPair {
  cd c[2][4] = {{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}};
};

RawTwoPair two_pair_pass(const TwoPairOrbit& orbit, double tau_max,
                         int nodes_per_unit, std::size_t nx) {
  const double sigma = orbit.points().sigma;
  const double sigma_hat = orbit.points().sigma_hat;
  const double omega = orbit.wave().omega;
  const double shift = std::abs(orbit.rho_hat());
  const double half_width = std::max(tau_max / (2.0 * sigma),
                                     (tau_max + shift) / (4.0 * sigma_hat));
  const double panel = 1.0 / std::max(2.0 * sigma, 4.0 * sigma_hat);
  const auto nodes = symmetric_time_nodes(half_width, panel, nodes_per_unit);
  const double dx = 2.0 * pi / static_cast<double>(nx);

  RawTwoPair acc;
  std::vector<cd> pvals(nx);
  for (const auto& [t, wt] : nodes) {
    for (std::size_t m = 0; m < nx; ++m) {
      pvals[m] = orbit.envelope(t, dx * static_cast<double>(m));
    }
    const SpectralField p = SpectralField::from_values(pvals);
    const SpectralField pxx = p.derivative(2);
    cd r[2][4] = {{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}};
    for (std::size_t m = 0; m < nx; ++m) {
      const double x = dx * static_cast<double>(m);
      const std::array<cd, 2> s = orbit.s_fields(t, x);
      const std::array<cd, 2> sh = orbit.s_hat_fields(t, x);
      const cd pv = p.values()[m];
      const cd pxxv = pxx.values()[m];
      const cd s1 = s[0] * s[0];
      const cd s2 = s[1] * s[1];
      const cd sh1 = sh[0] * sh[0];
      const cd sh2 = sh[1] * sh[1];
      r[0][0] += s2 * pxxv - s1 * std::conj(pxxv);
      r[0][1] += s1 * std::conj(pv) - s2 * pv;
      r[0][2] += s2 - s1;
      r[0][3] += s2 + s1;
      r[1][0] += sh2 * pxxv - sh1 * std::conj(pxxv);
      r[1][1] += sh1 * std::conj(pv) - sh2 * pv;
      r[1][2] += sh2 - sh1;
      r[1][3] += sh2 + sh1;
    }
    for (int j = 0; j < 2; ++j) {
      for (int l = 0; l < 4; ++l) acc.c[j][l] += wt * dx * r[j][l];
    }
  }
  for (int j = 0; j < 2; ++j) {
    acc.c[j][0] *= omega * omega;
    acc.c[j][1] *= omega * omega;
    acc.c[j][2] *= omega;
    acc.c[j][3] *= iu * omega;
  }
  return acc;
}

}  // namespace

TwoPairIntegrals melnikov_two_pairs(double omega, double delta_rho,
                                    const QuadratureSpec& quad,
                                    bool certificates) {
  if (!(omega > 1.0)) {
    throw std::domain_error(
        "melnikov_two_pairs: the two-pair measurement needs omega in "
        "(1, 3/2)");
  }
  // Time gauge rho = 0; the invariant combination delta_rho =
  // 2 (sigma_hat / sigma) rho - rho_hat then pins rho_hat.
  const TwoPairOrbit orbit =
      TwoPairOrbit::even(PlaneWave{omega, omega, 0.0}, 0.0, -delta_rho);
  const RawTwoPair base =
      two_pair_pass(orbit, quad.tau_max, quad.nodes_per_unit, quad.x_grid);

  TwoPairIntegrals out;
  out.omega = omega;
  out.delta_rho = delta_rho;
  for (int j = 0; j < 2; ++j) {
    for (int l = 0; l < 4; ++l) {
      out.m[j][l] = base.c[j][l].real();
      out.imag_residue =
          std::max(out.imag_residue, std::abs(base.c[j][l].imag()));
    }
  }
  if (certificates) {
    const RawTwoPair wide = two_pair_pass(orbit, quad.tau_max + 8.0,
                                          quad.nodes_per_unit, quad.x_grid);
    const RawTwoPair dense = two_pair_pass(orbit, quad.tau_max,
                                           2 * quad.nodes_per_unit, quad.x_grid);
    std::vector<double> b, w, d;
    for (int j = 0; j < 2; ++j) {
      for (int l = 0; l < 4; ++l) {
        b.push_back(base.c[j][l].real());
        w.push_back(wide.c[j][l].real());
        d.push_back(dense.c[j][l].real());
      }
    }
    out.cert_domain = relative_change(b, w);
    out.cert_nodes = relative_change(b, d);
  }
  return out;
}

SurfacePoint surface_point(double omega, double delta_rho,
                           const QuadratureSpec& quad, bool certificates) {
  SurfacePoint out;
  out.integrals = melnikov_two_pairs(omega, delta_rho, quad, certificates);
  out.delta_gamma = phase_shift_two_pair(omega);
  const double s = std::sin(0.5 * out.delta_gamma);
  const double(&m)[2][4] = out.integrals.m;
  double scale = 1e-300;
  for (int j = 0; j < 2; ++j) {
    for (int l = 0; l < 4; ++l) scale = std::max(scale, std::abs(m[j][l]));
  }
  if (std::abs(s) < 1e-10) {
    out.singular = true;
    return out;
  }
  const double g = omega * out.delta_gamma / (2.0 * s);
  const double denom = m[1][0] * m[0][3] - m[0][0] * m[1][3];
  if (std::abs(denom) < 1e-10 * scale * scale ||
      std::abs(m[0][3]) < 1e-12 * scale) {
    out.singular = true;
    return out;
  }
  out.chi = ((m[0][1] * m[1][3] - m[1][1] * m[0][3]) +
             g * (m[0][2] * m[1][3] - m[1][2] * m[0][3])) /
            denom;
  if (std::abs(out.chi) < 1e-12) {
    out.singular = true;
    return out;
  }
  out.alpha = 1.0 / out.chi;
  out.beta_cos_gamma = out.alpha * g;
  out.beta_sin_gamma =
      -(m[0][0] + out.alpha * (m[0][1] + g * m[0][2])) / m[0][3];
  out.beta = std::hypot(out.beta_cos_gamma, out.beta_sin_gamma);
  out.gamma = std::atan2(out.beta_sin_gamma, out.beta_cos_gamma);
  out.closure_residual_1 =
      std::abs(m[0][0] + out.alpha * m[0][1] + out.beta_cos_gamma * m[0][2] +
               out.beta_sin_gamma * m[0][3]) /
      scale;
  out.closure_residual_2 =
      std::abs(m[1][0] + out.alpha * m[1][1] + out.beta_cos_gamma * m[1][2] +
               out.beta_sin_gamma * m[1][3]) /
      scale;
  out.closure_residual_d = std::abs(out.alpha * omega * out.delta_gamma -
                                    2.0 * out.beta_cos_gamma * s);
  return out;
}

double second_distance(double theta_initial, double theta_shift, double alpha,
                       double beta, double omega) {
  return 2.0 * omega *
         (alpha * omega * theta_shift +
          beta * (std::sin(theta_initial) -
                  std::sin(theta_initial + theta_shift)));
}

cd melnikov_raw_one_pair(double omega, double alpha, double beta, double gamma,
                         const QuadratureSpec& quad) {
  const OnePairOrbit orbit =
      OnePairOrbit::even(PlaneWave{omega, omega, gamma}, 0.0);
  const double sigma = orbit.points().sigma;
  const double half_width = quad.tau_max / (2.0 * sigma);
  const auto nodes = symmetric_time_nodes(half_width, 1.0 / (2.0 * sigma),
                                          quad.nodes_per_unit);
  const std::size_t nx = quad.x_grid;
  cd acc = 0.0;
  for (const auto& [t, wt] : nodes) {
    const SpectralField q = orbit.snapshot(t, nx);
    const SpectralField qxx = q.derivative(2);
    std::vector<cd> pert(nx);
    for (std::size_t m = 0; m < nx; ++m) {
      pert[m] = qxx.values()[m] - alpha * q.values()[m] + beta;
    }
    const GradientField grad = orbit.melnikov_vector(t, nx);
    acc += wt * pair_gradient(grad, pert, nx);
  }
  return acc;
}

double one_pair_drop_constant(double omega) {
  const double sigma = double_points(omega).sigma;
  return -4.0 * pi * sigma * sigma / (omega * omega);
}

ExistenceResult existence_one_pair(double omega, double beta,
                                   const QuadratureSpec& quad) {
  const KappaPoint kp = kappa_point(omega, quad, false);
  if (kp.singular) {
    throw std::runtime_error(
        "existence_one_pair: the measurement is singular at this omega");
  }
  const double dg = kp.delta_gamma;
  const double s = std::sin(0.5 * dg);
  const double m1 = kp.integrals.m1;
  const double m2 = kp.integrals.m2;
  const double m3 = kp.integrals.m3;
  const double scale =
      std::max({std::abs(m1), std::abs(m2), std::abs(m3), 1.0});

  double alpha = kp.alpha;
  const double cos_seed = alpha * omega * dg / (2.0 * s * beta);
  if (std::abs(cos_seed) > 1.0) {
    std::ostringstream msg;
    msg << "existence_one_pair: forcing beta = " << beta
        << " is below the pinning level |alpha omega Delta gamma / (2 sin)| = "
        << std::abs(alpha * omega * dg / (2.0 * s));
    throw std::domain_error(msg.str());
  }
  double gamma = std::acos(cos_seed);

  const auto residual = [&](double al, double ga, double& e1, double& e2) {
    e1 = m1 + al * m2 + beta * std::cos(ga) * m3;
    e2 = al * omega * dg - 2.0 * beta * std::cos(ga) * s;
  };

  double e1 = 0.0, e2 = 0.0;
  residual(alpha, gamma, e1, e2);
  int it = 0;
  bool converged = std::max(std::abs(e1), std::abs(e2)) < 1e-11 * scale;
  for (; it < 50 && !converged; ++it) {
    const double j11 = m2;
    const double j12 = -beta * std::sin(gamma) * m3;
    const double j21 = omega * dg;
    const double j22 = 2.0 * beta * std::sin(gamma) * s;
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-14 * scale) break;
    const double da = (e1 * j22 - j12 * e2) / det;
    const double dg2 = (j11 * e2 - e1 * j21) / det;
    double step = 1.0;
    double n0 = std::max(std::abs(e1), std::abs(e2));
    for (int h = 0; h < 12; ++h) {
      double t1 = 0.0, t2 = 0.0;
      residual(alpha - step * da, gamma - step * dg2, t1, t2);
      if (std::max(std::abs(t1), std::abs(t2)) < n0) break;
      step *= 0.5;
    }
    alpha -= step * da;
    gamma -= step * dg2;
    residual(alpha, gamma, e1, e2);
    converged = std::max(std::abs(e1), std::abs(e2)) < 1e-11 * scale;
  }

  ExistenceResult out;
  out.omega = omega;
  out.alpha = alpha;
  out.beta = beta;
  out.gamma = gamma;
  out.residual_melnikov = std::abs(e1);
  out.residual_distance = 2.0 * omega * std::abs(e2);
  out.iterations = it;
  out.converged = converged;
  {
    const double j11 = m2;
    const double j12 = -beta * std::sin(gamma) * m3;
    const double j21 = omega * dg;
    const double j22 = 2.0 * beta * std::sin(gamma) * s;
    const double t = j11 * j11 + j12 * j12 + j21 * j21 + j22 * j22;
    const double d = j11 * j22 - j12 * j21;
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * d * d));
    const double smax = std::sqrt(0.5 * (t + disc));
    const double smin = std::sqrt(std::max(0.0, 0.5 * (t - disc)));
    out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  }
  return out;
}

double default_forcing_one_pair(double omega, const QuadratureSpec& quad) {
  const KappaPoint kp = kappa_point(omega, quad, false);
  if (kp.singular) {
    throw std::runtime_error(
        "default_forcing_one_pair: the measurement is singular at this omega");
  }
  const double s = std::sin(0.5 * kp.delta_gamma);
  return std::sqrt(2.0) * std::abs(kp.alpha * omega * kp.delta_gamma / (2.0 * s));
}

ExistenceResult existence_two_pair(double omega, double delta_rho,
                                   const QuadratureSpec& quad) {
  const SurfacePoint sp = surface_point(omega, delta_rho, quad, false);
  if (sp.singular) {
    throw std::runtime_error(
        "existence_two_pair: the measurement is singular at this "
        "(omega, delta_rho)");
  }
  ExistenceResult out;
  out.omega = omega;
  out.delta_rho = delta_rho;
  out.alpha = sp.alpha;
  out.beta = sp.beta;
  out.gamma = sp.gamma;
  out.residual_melnikov =
      std::max(sp.closure_residual_1, sp.closure_residual_2);
  out.residual_distance = sp.closure_residual_d;
  out.iterations = 0;
  out.converged = true;
  {
    // Condition of the 2x2 system for (alpha, beta sin gamma).
    const double s = std::sin(0.5 * sp.delta_gamma);
    const double g = omega * sp.delta_gamma / (2.0 * s);
    const double j11 = sp.integrals.m[0][1] + g * sp.integrals.m[0][2];
    const double j12 = sp.integrals.m[0][3];
    const double j21 = sp.integrals.m[1][1] + g * sp.integrals.m[1][2];
    const double j22 = sp.integrals.m[1][3];
    const double t = j11 * j11 + j12 * j12 + j21 * j21 + j22 * j22;
    const double d = j11 * j22 - j12 * j21;
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * d * d));
    const double smax = std::sqrt(0.5 * (t + disc));
    const double smin = std::sqrt(std::max(0.0, 0.5 * (t - disc)));
    out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace nlshom
