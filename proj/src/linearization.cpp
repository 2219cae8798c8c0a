#include "nlshom/linearization.hpp"

#include <cmath>
#include <stdexcept>

#include "nlshom/fft.hpp"

namespace nlshom {

namespace {

double mean_abs2(const SpectralField& f) {
  double s = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) s += std::norm(f[m]);
  return s / static_cast<double>(f.size());
}

cd mean_of(const std::vector<cd>& v) {
  cd s(0.0, 0.0);
  for (const cd& z : v) s += z;
  return s / static_cast<double>(v.size());
}

double mode_gap(int k, double omega) {
  return 4.0 * omega * omega - static_cast<double>(k) * k;
}

}  // namespace

ResonanceCoords to_resonance_coords(const SpectralField& q, double omega) {
  const cd m = q.mean();
  const double rho = std::abs(m);
  if (rho < 1e-12) {
    throw std::domain_error(
        "to_resonance_coords: spatial mean vanishes, phase undefined");
  }
  ResonanceCoords c;
  c.theta = std::atan2(m.imag(), m.real());
  const cd rot = std::exp(-iu * c.theta);
  std::vector<cd> f(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) f[i] = q[i] * rot - rho;
  c.f = SpectralField::from_values(std::move(f));
  c.J = rho * rho + mean_abs2(c.f) - omega * omega;
  return c;
}

SpectralField from_resonance_coords(const ResonanceCoords& c, double omega) {
  const double rad = c.J + omega * omega - mean_abs2(c.f);
  if (rad <= 0.0) {
    throw std::domain_error(
        "from_resonance_coords: J + omega^2 - <|f|^2> must be positive");
  }
  const double rho = std::sqrt(rad);
  const cd rot = std::exp(iu * c.theta);
  std::vector<cd> q(c.f.size());
  for (std::size_t i = 0; i < c.f.size(); ++i) q[i] = (rho + c.f[i]) * rot;
  return SpectralField::from_values(std::move(q));
}

double r2_J(const ResonanceCoords& c, const Params& p) {
  const double f2 = mean_abs2(c.f);
  const double rad = c.J + p.omega * p.omega - f2;
  if (rad <= 0.0) throw std::domain_error("r2_J: coordinate chart degenerate");
  const SpectralField fx = c.f.derivative(1);
  return -2.0 * mean_abs2(fx) +
         2.0 * p.beta * std::cos(c.theta) *
             (std::sqrt(rad) - std::sqrt(c.J + p.omega * p.omega));
}

double r2_theta(const ResonanceCoords& c, const Params& p) {
  const double f2 = mean_abs2(c.f);
  const double base = c.J + p.omega * p.omega;
  const double rad = base - f2;
  if (rad <= 0.0) throw std::domain_error("r2_theta: coordinate chart degenerate");
  const double rho = std::sqrt(rad);
  double sum_sq = 0.0;   // <(f + conj f)^2>
  double sum_cub = 0.0;  // <|f|^2 (f + conj f)>
  for (std::size_t m = 0; m < c.f.size(); ++m) {
    const double re2 = 2.0 * c.f[m].real();
    sum_sq += re2 * re2;
    sum_cub += std::norm(c.f[m]) * re2;
  }
  const double n = static_cast<double>(c.f.size());
  sum_sq /= n;
  sum_cub /= n;
  return -sum_sq - sum_cub / rho -
         p.epsilon * p.beta * std::sin(c.theta) *
             (1.0 / std::sqrt(rad) - 1.0 / std::sqrt(base));
}

SpectralField n2_term(const ResonanceCoords& c, double omega) {
  // n2 = 2 rho [ 2(|f|^2 - <|f|^2>) + (f^2 - <f^2>) ]
  const double f2 = mean_abs2(c.f);
  const double rad = c.J + omega * omega - f2;
  if (rad <= 0.0) throw std::domain_error("n2_term: coordinate chart degenerate");
  const double rho = std::sqrt(rad);
  std::vector<cd> v(c.f.size());
  cd mean_fsq(0.0, 0.0);
  for (std::size_t m = 0; m < c.f.size(); ++m) mean_fsq += c.f[m] * c.f[m];
  mean_fsq /= static_cast<double>(c.f.size());
  for (std::size_t m = 0; m < c.f.size(); ++m) {
    const double a2 = std::norm(c.f[m]);
    v[m] = 2.0 * rho *
           (2.0 * (a2 - f2) + (c.f[m] * c.f[m] - mean_fsq));
  }
  return SpectralField::from_values(std::move(v));
}

SpectralField n3_term(const ResonanceCoords& c, const Params& p) {
  const double f2 = mean_abs2(c.f);
  const double base = c.J + p.omega * p.omega;
  const double rad = base - f2;
  if (rad <= 0.0) throw std::domain_error("n3_term: coordinate chart degenerate");
  const double rho = std::sqrt(rad);
  const std::size_t n = c.f.size();

  cd mean_f2(0.0, 0.0);
  cd mean_fbar2(0.0, 0.0);
  cd mean_af(0.0, 0.0);   // <|f|^2 f>
  double mean_cub = 0.0;  // <|f|^2 (f + conj f)>
  for (std::size_t m = 0; m < n; ++m) {
    mean_f2 += c.f[m] * c.f[m];
    mean_fbar2 += std::conj(c.f[m]) * std::conj(c.f[m]);
    mean_af += std::norm(c.f[m]) * c.f[m];
    mean_cub += std::norm(c.f[m]) * 2.0 * c.f[m].real();
  }
  const double dn = static_cast<double>(n);
  mean_f2 /= dn;
  mean_fbar2 /= dn;
  mean_af /= dn;
  mean_cub /= dn;
  const cd bracket = mean_f2 + mean_fbar2 + cd(6.0 * f2, 0.0);
  const double forcing = p.epsilon * p.beta * std::sin(c.theta) *
                         (1.0 / std::sqrt(rad) - 1.0 / std::sqrt(base));

  std::vector<cd> v(n);
  for (std::size_t m = 0; m < n; ++m) {
    const cd f = c.f[m];
    v[m] = -bracket * f + 2.0 * (std::norm(f) * f - mean_af) -
           (mean_cub / rho) * f - 2.0 * f2 * std::conj(f) - forcing * f;
  }
  return SpectralField::from_values(std::move(v));
}

SpectralField l_epsilon_apply(const SpectralField& f, const Params& p) {
  const SpectralField fxx = f.derivative(2);
  std::vector<cd> v(f.size());
  const double w2 = p.omega * p.omega;
  for (std::size_t m = 0; m < f.size(); ++m) {
    v[m] = -iu * fxx[m] + p.epsilon * (fxx[m] - p.alpha * f[m]) -
           2.0 * iu * w2 * (f[m] + std::conj(f[m]));
  }
  return SpectralField::from_values(std::move(v));
}

SpectralField v_epsilon_apply(const SpectralField& f, double J, double theta,
                              const Params& p) {
  const double base = J + p.omega * p.omega;
  if (base <= 0.0) throw std::domain_error("v_epsilon_apply: J + omega^2 <= 0");
  const double g = p.epsilon * p.beta * std::sin(theta) / std::sqrt(base);
  std::vector<cd> v(f.size());
  for (std::size_t m = 0; m < f.size(); ++m) {
    v[m] = -2.0 * iu * J * (f[m] + std::conj(f[m])) + iu * g * f[m];
  }
  return SpectralField::from_values(std::move(v));
}

std::vector<ModePair> spectrum_l_epsilon(const Params& p, int k_max) {
  std::vector<ModePair> out;
  out.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) {
    const double gap = mode_gap(k, p.omega);
    const cd root = static_cast<double>(k) * std::sqrt(cd(gap, 0.0));
    const double damp = -p.epsilon * (p.alpha + static_cast<double>(k) * k);
    out.push_back({k, damp + root, damp - root});
  }
  return out;
}

int unstable_mode_count(double omega) {
  int c = 0;
  for (int k = 1; k < 2.0 * omega; ++k) ++c;
  return c;
}

cd eigenvector_phase(int k, double omega) {
  const double gap = mode_gap(k, omega);
  if (gap <= 0.0) {
    throw std::domain_error("eigenvector_phase: mode " + std::to_string(k) +
                            " is not in the elliptic band");
  }
  return cd(k, -std::sqrt(gap)) / (2.0 * omega);
}

EigenSplit eigen_split(const SpectralField& g, const Params& p) {
  const int kmax = unstable_mode_count(p.omega);
  EigenSplit out;
  out.h = g;
  const std::vector<cd> hat = g.modes();
  const std::size_t n = g.size();
  for (int k = 1; k <= kmax; ++k) {
    const double gap = mode_gap(k, p.omega);
    if (gap < 1e-12) {
      throw std::domain_error(
          "eigen_split: eigenvectors degenerate at 2 omega = " + std::to_string(k));
    }
    const double s = std::sqrt(gap);
    // complex amplitude of cos kx
    const cd ck = hat[fft_index(k, n)] + hat[fft_index(-k, n)];
    const double xp = p.omega * ck.real() / k - p.omega * ck.imag() / s;
    const double xm = p.omega * ck.real() / k + p.omega * ck.imag() / s;
    out.xi_plus.push_back(xp);
    out.xi_minus.push_back(xm);
    for (std::size_t m = 0; m < n; ++m) {
      out.h[m] -= ck * std::cos(k * out.h.x(m));
    }
  }
  return out;
}

SpectralField eigen_unsplit(const EigenSplit& s, const Params& p) {
  SpectralField g = s.h;
  for (std::size_t i = 0; i < s.xi_plus.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const cd ph = eigenvector_phase(k, p.omega);
    const cd amp = s.xi_plus[i] * ph + s.xi_minus[i] * std::conj(ph);
    for (std::size_t m = 0; m < g.size(); ++m) {
      g[m] += amp * std::cos(k * g.x(m));
    }
  }
  return g;
}

std::array<double, 2> v_coupling(int k, double xi_p, double xi_m, double J,
                                 double theta, const Params& p) {
  const double gap = mode_gap(k, p.omega);
  if (gap <= 0.0) throw std::domain_error("v_coupling: mode outside elliptic band");
  const double s = std::sqrt(gap);
  const double ck = static_cast<double>(k) / s;
  const double cp = (2.0 * p.omega * p.omega - static_cast<double>(k) * k) /
                    (static_cast<double>(k) * s);
  const double cm = 2.0 * p.omega * p.omega / (static_cast<double>(k) * s);
  const double g = p.epsilon * p.beta * std::sin(theta) /
                   std::sqrt(J + p.omega * p.omega);
  const double plus = 2.0 * ck * J * (xi_p + xi_m) + g * (cp * xi_p - cm * xi_m);
  const double minus = -2.0 * ck * J * (xi_p + xi_m) + g * (cm * xi_p - cp * xi_m);
  return {plus, minus};
}

}  // namespace nlshom
