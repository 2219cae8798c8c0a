#include "nlshom/darboux.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlshom {

namespace {

double sech(double x) {
  const double ax = std::abs(x);
  if (ax > 700.0) return 2.0 * std::exp(-ax);
  return 1.0 / std::cosh(x);
}

cd polar_unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

cd PlaneWave::value(double t) const { return a * polar_unit(theta(t)); }

DoublePointData double_points(double a) {
  if (!(a > 0.5)) {
    throw std::domain_error(
        "double_points: no imaginary double point for amplitude <= 1/2");
  }
  if (!(a < 1.5)) {
    throw std::domain_error(
        "double_points: amplitude >= 3/2 brings in a third pair, outside the "
        "supported range");
  }
  DoublePointData d;
  d.a = a;
  d.sigma = std::sqrt(a * a - 0.25);
  d.theta0 = std::atan2(d.sigma, 0.5);
  d.has_second = a > 1.0;
  if (d.has_second) {
    d.sigma_hat = std::sqrt(a * a - 1.0);
    d.theta0_hat = std::atan2(d.sigma_hat, 1.0);
  }
  return d;
}

std::array<cd, 2> bloch(const PlaneWave& pw, cd lambda, int sign, double t,
                        double x) {
  const cd k = std::sqrt(cd{pw.a * pw.a, 0.0} + lambda * lambda);
  const double s = sign >= 0 ? 1.0 : -1.0;
  const cd phase = std::exp(s * iu * (2.0 * lambda * k * t + k * x));
  const double half_theta = 0.5 * pw.theta(t);
  return {pw.a * polar_unit(half_theta) * phase,
          (s * k - lambda) * polar_unit(-half_theta) * phase};
}

Mat2 darboux_gauge(cd lambda, cd nu, const std::array<cd, 2>& phi) {
  const double n1 = std::norm(phi[0]);
  const double n2 = std::norm(phi[1]);
  const double den = n1 + n2;
  if (den < 1e-300) {
    throw std::domain_error("darboux_gauge: the dressing solution vanishes");
  }
  const cd d1 = lambda - nu;
  const cd d2 = lambda - std::conj(nu);
  const cd off = (std::conj(nu) - nu) / den;
  return {(d1 * n1 + d2 * n2) / den, off * phi[0] * std::conj(phi[1]),
          off * std::conj(phi[0]) * phi[1], (d1 * n2 + d2 * n1) / den};
}

cd darboux_potential(cd q, cd nu, const std::array<cd, 2>& phi) {
  const double den = std::norm(phi[0]) + std::norm(phi[1]);
  if (den < 1e-300) {
    throw std::domain_error(
        "darboux_potential: the dressing solution vanishes");
  }
  return q + 2.0 * (nu - std::conj(nu)) * phi[0] * std::conj(phi[1]) / den;
}

OnePairOrbit::OnePairOrbit(const PlaneWave& pw, double rho, double vartheta)
    : pw_(pw), data_(double_points(pw.a)), rho_(rho), vartheta_(vartheta) {}

OnePairOrbit OnePairOrbit::even(const PlaneWave& pw, double rho) {
  const DoublePointData d = double_points(pw.a);
  return OnePairOrbit(pw, rho, d.theta0 - 0.5 * pi);
}

cd OnePairOrbit::envelope(double t, double x) const {
  const double th0 = data_.theta0;
  const double tt = tau(t);
  const double st = sech(tt);
  const double cy = std::cos(y(x));
  const double den = 1.0 + std::sin(th0) * st * cy;
  const cd num{std::cos(2.0 * th0) - std::sin(th0) * st * cy,
               -std::sin(2.0 * th0) * std::tanh(tt)};
  return num / den;
}

cd OnePairOrbit::value(double t, double x) const {
  return pw_.value(t) * envelope(t, x);
}

cd OnePairOrbit::u1(double t, double x) const {
  const double ht = 0.5 * tau(t);
  const double z = 0.5 * x + 0.5 * vartheta_;
  return {std::cosh(ht) * std::cos(z), -std::sinh(ht) * std::sin(z)};
}

cd OnePairOrbit::u2(double t, double x) const {
  const double ht = 0.5 * tau(t);
  const double z = 0.5 * x + 0.5 * vartheta_ - data_.theta0;
  return {-std::sinh(ht) * std::cos(z), std::cosh(ht) * std::sin(z)};
}

std::array<cd, 2> OnePairOrbit::phi(double t, double x) const {
  const cd half{0.5 * rho_, 0.5 * vartheta_};
  const cd cp = std::exp(half);
  const cd cm = std::exp(-half);
  const std::array<cd, 2> pp = bloch(pw_, data_.nu(), +1, t, x);
  const std::array<cd, 2> pm = bloch(pw_, data_.nu(), -1, t, x);
  return {cp * pp[0] + cm * pm[0], cp * pp[1] + cm * pm[1]};
}

SpectralField OnePairOrbit::snapshot(double t, std::size_t n) const {
  std::vector<cd> vals(n);
  for (std::size_t m = 0; m < n; ++m) {
    vals[m] = value(t, 2.0 * pi * static_cast<double>(m) /
                           static_cast<double>(n));
  }
  return SpectralField::from_values(std::move(vals));
}

cd OnePairOrbit::asymptotic_phase(int time_sign) const {
  const double s = time_sign >= 0 ? 1.0 : -1.0;
  return polar_unit(-2.0 * data_.theta0 * s);
}

GradientField OnePairOrbit::melnikov_vector(double t, std::size_t n) const {
  const double a = pw_.a;
  const double sig = data_.sigma;
  // i (nu - conj nu) = -2 sigma and sqrt(Delta Delta'') at nu = 8 pi sigma.
  const double pref = 0.25 / (a * a) * (-2.0 * sig) * (8.0 * pi * sig);
  const cd qc = pw_.value(t);
  GradientField g;
  g.dq.resize(n);
  g.dqbar.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x = 2.0 * pi * static_cast<double>(m) /
                     static_cast<double>(n);
    const cd w1 = u1(t, x);
    const cd w2 = u2(t, x);
    const double den = std::norm(w1) + std::norm(w2);
    const double den2 = den * den;
    g.dq[m] = pref * std::conj(qc) * std::conj(w1) * std::conj(w1) / den2;
    g.dqbar[m] = -pref * qc * std::conj(w2) * std::conj(w2) / den2;
  }
  return g;
}

TwoPairOrbit::TwoPairOrbit(const PlaneWave& pw, double rho, double vartheta,
                           double rho_hat, double vartheta_hat)
    : pw_(pw),
      data_(double_points(pw.a)),
      base_(pw, rho, vartheta),
      rho_hat_(rho_hat),
      vartheta_hat_(vartheta_hat) {
  if (!data_.has_second) {
    throw std::invalid_argument(
        "TwoPairOrbit: the second pair of double points needs amplitude in "
        "(1, 3/2)");
  }
}

TwoPairOrbit TwoPairOrbit::even(const PlaneWave& pw, double rho,
                                double rho_hat) {
  const DoublePointData d = double_points(pw.a);
  if (!d.has_second) {
    throw std::invalid_argument(
        "TwoPairOrbit: the second pair of double points needs amplitude in "
        "(1, 3/2)");
  }
  return TwoPairOrbit(pw, rho, d.theta0 - 0.5 * pi, rho_hat,
                      d.theta0_hat - 0.5 * pi);
}

cd TwoPairOrbit::envelope(double t, double x) const {
  const double s0 = std::sin(data_.theta0);
  const double c0 = std::cos(data_.theta0);
  const double s2 = std::sin(2.0 * data_.theta0);
  const double sh0 = std::sin(data_.theta0_hat);
  const double ch0 = std::cos(data_.theta0_hat);
  const double s2h = std::sin(2.0 * data_.theta0_hat);

  const double tt = tau(t);
  const double tth = tau_hat(t);
  const double st = sech(tt);
  const double th = std::tanh(tt);
  const double sth = sech(tth);
  const double thh = std::tanh(tth);
  const double yy = y(x);
  const double yyh = y_hat(x);
  const double cy = std::cos(yy);
  const double sy = std::sin(yy);
  const double cyh = std::cos(yyh);
  const double syh = std::sin(yyh);

  const double b1 = 1.0 + s0 * st * cy;
  const double b2 = 1.0 + sh0 * sth * cyh;

  const double w1 =
      (sh0 * sh0 * b1 * b1 +
       0.125 * s2 * s2 * st * st * (1.0 - std::cos(2.0 * yy))) *
          b2 -
      0.5 * s2 * s2h * st * sth * b1 * sy * syh +
      s0 * s0 *
          (1.0 + 2.0 * s0 * st * cy + (cy * cy - c0 * c0) * st * st) * b2 -
      2.0 * sh0 * s0 *
          (ch0 * c0 * thh * th + (s0 + st * cy) * (sh0 + sth * cyh)) * b1;

  const cd hat_plus{sh0 + sth * cyh, ch0 * thh};
  const cd hat_minus{sh0 + sth * cyh, -ch0 * thh};
  const cd sq_term{-c0 * th, s0 + st * cy};
  const cd w2 =
      (-2.0 * sh0 * sh0 * b1 * b1 +
       0.25 * s2 * s2 * st * st * (1.0 - std::cos(2.0 * yy))) *
          hat_plus +
      2.0 * s0 * s0 * sq_term * sq_term * hat_minus +
      2.0 * s0 * cd{s0 + st * cy, c0 * th} *
          (2.0 * sh0 * b1 * b2 - s2 * ch0 * st * sth * sy * syh);

  if (std::abs(w1) < 1e-12) {
    std::ostringstream msg;
    msg << "TwoPairOrbit: denominator W1 vanishes at t = " << t
        << ", x = " << x << " (singular Backlund parameters)";
    throw std::domain_error(msg.str());
  }
  return base_.envelope(t, x) + w2 * sh0 / w1;
}

cd TwoPairOrbit::value(double t, double x) const {
  return pw_.value(t) * envelope(t, x);
}

cd TwoPairOrbit::value_iterated(double t, double x) const {
  const cd qc = pw_.value(t);
  const std::array<cd, 2> ph = base_.phi(t, x);
  const cd q1 = darboux_potential(qc, data_.nu(), ph);
  const std::array<cd, 2> ph2 = phi_hat(t, x);
  return darboux_potential(q1, data_.nu_hat(), ph2);
}

cd TwoPairOrbit::v1(double t, double x) const {
  const double ht = 0.5 * tau_hat(t);
  const double z = x + 0.5 * vartheta_hat_;
  return {std::cosh(ht) * std::cos(z), -std::sinh(ht) * std::sin(z)};
}

cd TwoPairOrbit::v2(double t, double x) const {
  const double ht = 0.5 * tau_hat(t);
  const double z = x + 0.5 * vartheta_hat_ - data_.theta0_hat;
  return {-std::sinh(ht) * std::cos(z), std::cosh(ht) * std::sin(z)};
}

std::array<cd, 2> TwoPairOrbit::big_v(double t, double x) const {
  const cd nu = data_.nu();
  const cd nuh = data_.nu_hat();
  const cd w1 = base_.u1(t, x);
  const cd w2 = base_.u2(t, x);
  const cd vv1 = v1(t, x);
  const cd vv2 = v2(t, x);
  const double m1 = std::norm(w1);
  const double m2 = std::norm(w2);
  const double den = m1 + m2;
  const cd big1 = (((nuh - nu) * m1 + (nuh - std::conj(nu)) * m2) * vv1 +
                   (std::conj(nu) - nu) * w1 * std::conj(w2) * vv2) /
                  den;
  const cd big2 = ((std::conj(nu) - nu) * std::conj(w1) * w2 * vv1 +
                   ((nuh - std::conj(nu)) * m1 + (nuh - nu) * m2) * vv2) /
                  den;
  return {big1, big2};
}

std::array<cd, 2> TwoPairOrbit::s_fields(double t, double x) const {
  const cd nu = data_.nu();
  const cd nuh = data_.nu_hat();
  const cd w1 = std::conj(base_.u1(t, x));
  const cd w2 = std::conj(base_.u2(t, x));
  const std::array<cd, 2> v = big_v(t, x);
  const double mu = std::norm(w1) + std::norm(w2);
  const double mv = std::norm(v[0]) + std::norm(v[1]);
  const double den = mu * mv;
  const cd s1 = (((nu - nuh) * std::norm(v[0]) +
                  (nu - std::conj(nuh)) * std::norm(v[1])) *
                     w2 -
                 (std::conj(nuh) - nuh) * v[0] * std::conj(v[1]) * w1) /
                den;
  const cd s2 = ((std::conj(nuh) - nuh) * std::conj(v[0]) * v[1] * w2 -
                 ((nu - std::conj(nuh)) * std::norm(v[0]) +
                  (nu - nuh) * std::norm(v[1])) *
                     w1) /
                den;
  return {s1, s2};
}

std::array<cd, 2> TwoPairOrbit::s_hat_fields(double t, double x) const {
  const std::array<cd, 2> v = big_v(t, x);
  const double den = std::norm(v[0]) + std::norm(v[1]);
  return {std::conj(v[1]) / den, std::conj(v[0]) / den};
}

std::array<cd, 2> TwoPairOrbit::phi_hat(double t, double x) const {
  const cd half{0.5 * rho_hat_, 0.5 * vartheta_hat_};
  const cd cp = std::exp(half);
  const cd cm = std::exp(-half);
  const std::array<cd, 2> pp = bloch(pw_, data_.nu_hat(), +1, t, x);
  const std::array<cd, 2> pm = bloch(pw_, data_.nu_hat(), -1, t, x);
  const std::array<cd, 2> raw{cp * pp[0] + cm * pm[0],
                              cp * pp[1] + cm * pm[1]};
  const Mat2 g = darboux_gauge(data_.nu_hat(), data_.nu(), base_.phi(t, x));
  return apply(g, raw);
}

SpectralField TwoPairOrbit::snapshot(double t, std::size_t n) const {
  std::vector<cd> vals(n);
  for (std::size_t m = 0; m < n; ++m) {
    vals[m] = value(t, 2.0 * pi * static_cast<double>(m) /
                           static_cast<double>(n));
  }
  return SpectralField::from_values(std::move(vals));
}

cd TwoPairOrbit::asymptotic_phase(int time_sign) const {
  const double s = time_sign >= 0 ? 1.0 : -1.0;
  return polar_unit(-2.0 * (data_.theta0 + data_.theta0_hat) * s);
}

GradientField TwoPairOrbit::melnikov_vector_first(double t,
                                                  std::size_t n) const {
  const double a = pw_.a;
  const cd nu = data_.nu();
  const cd nuh = data_.nu_hat();
  const cd pref = 0.25 / (a * a) * iu * (nu - std::conj(nu)) /
                  ((nu - nuh) * (nu - std::conj(nuh))) *
                  (8.0 * pi * data_.sigma);
  const cd qc = pw_.value(t);
  GradientField g;
  g.dq.resize(n);
  g.dqbar.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x = 2.0 * pi * static_cast<double>(m) /
                     static_cast<double>(n);
    const std::array<cd, 2> s = s_fields(t, x);
    g.dq[m] = pref * std::conj(qc) * s[1] * s[1];
    g.dqbar[m] = -pref * qc * s[0] * s[0];
  }
  return g;
}

GradientField TwoPairOrbit::melnikov_vector_second(double t,
                                                   std::size_t n) const {
  const double a = pw_.a;
  const cd nu = data_.nu();
  const cd nuh = data_.nu_hat();
  // The multiplier splitting at the periodic point carries the opposite
  // branch to the antiperiodic one: d(m+ - m-)/dlambda = -4 pi sigma_hat.
  const cd pref = 0.5 / (a * a) * iu * (nuh - std::conj(nuh)) *
                  ((nuh - nu) * (nuh - std::conj(nu))) *
                  (-4.0 * pi * data_.sigma_hat);
  const cd qc = pw_.value(t);
  GradientField g;
  g.dq.resize(n);
  g.dqbar.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x = 2.0 * pi * static_cast<double>(m) /
                     static_cast<double>(n);
    const std::array<cd, 2> s = s_hat_fields(t, x);
    g.dq[m] = pref * std::conj(qc) * s[1] * s[1];
    g.dqbar[m] = -pref * qc * s[0] * s[0];
  }
  return g;
}

namespace {

cd wronskian(const std::array<cd, 2>& a, const std::array<cd, 2>& b) {
  return a[0] * b[1] - a[1] * b[0];
}

}  // namespace

EigenPairGrids one_pair_gauge_grids(const OnePairOrbit& orbit, double t,
                                    std::size_t n) {
  const PlaneWave& pw = orbit.wave();
  const cd nu = orbit.points().nu();
  EigenPairGrids out;
  out.plus.resize(n);
  out.minus.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x = 2.0 * pi * static_cast<double>(m) /
                     static_cast<double>(n);
    const Mat2 g = darboux_gauge(nu, nu, orbit.phi(t, x));
    out.plus[m] = apply(g, bloch(pw, nu, +1, t, x));
    out.minus[m] = apply(g, bloch(pw, nu, -1, t, x));
  }
  out.wronskian_base =
      wronskian(bloch(pw, nu, +1, t, 0.0), bloch(pw, nu, -1, t, 0.0));
  out.extra_det = nu - std::conj(nu);
  return out;
}

EigenPairGrids two_pair_gauge_grids_first(const TwoPairOrbit& orbit, double t,
                                          std::size_t n) {
  const PlaneWave& pw = orbit.wave();
  const cd nu = orbit.points().nu();
  const cd nuh = orbit.points().nu_hat();
  EigenPairGrids out;
  out.plus.resize(n);
  out.minus.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x = 2.0 * pi * static_cast<double>(m) /
                     static_cast<double>(n);
    const Mat2 g1 = darboux_gauge(nu, nu, orbit.base().phi(t, x));
    const Mat2 g2 = darboux_gauge(nu, nuh, orbit.phi_hat(t, x));
    out.plus[m] = apply(g2, apply(g1, bloch(pw, nu, +1, t, x)));
    out.minus[m] = apply(g2, apply(g1, bloch(pw, nu, -1, t, x)));
  }
  out.wronskian_base =
      wronskian(bloch(pw, nu, +1, t, 0.0), bloch(pw, nu, -1, t, 0.0));
  out.extra_det =
      (nu - std::conj(nu)) * (nu - nuh) * (nu - std::conj(nuh));
  return out;
}

EigenPairGrids two_pair_gauge_grids_second(const TwoPairOrbit& orbit, double t,
                                           std::size_t n) {
  const PlaneWave& pw = orbit.wave();
  const cd nu = orbit.points().nu();
  const cd nuh = orbit.points().nu_hat();
  EigenPairGrids out;
  out.plus.resize(n);
  out.minus.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x = 2.0 * pi * static_cast<double>(m) /
                     static_cast<double>(n);
    const Mat2 g1 = darboux_gauge(nuh, nu, orbit.base().phi(t, x));
    const Mat2 g2 = darboux_gauge(nuh, nuh, orbit.phi_hat(t, x));
    out.plus[m] = apply(g2, apply(g1, bloch(pw, nuh, +1, t, x)));
    out.minus[m] = apply(g2, apply(g1, bloch(pw, nuh, -1, t, x)));
  }
  out.wronskian_base =
      wronskian(bloch(pw, nuh, +1, t, 0.0), bloch(pw, nuh, -1, t, 0.0));
  out.extra_det =
      (nuh - std::conj(nuh)) * (nuh - nu) * (nuh - std::conj(nu));
  return out;
}

}  // namespace nlshom
