#include "nlshom/normal_form.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nlshom/fft.hpp"

namespace nlshom {

namespace {

struct Freqs {
  double b, sigma, s1, s2, s3, s4;
  double d1, d2, d3, d4;
};

void check_pair(int k, int l) {
  if (k == 0 || l == 0 || k + l == 0) {
    throw std::invalid_argument("normal form: need k, l, k+l all nonzero");
  }
}

Freqs freqs(int k, int l, const Params& p) {
  check_pair(k, l);
  Freqs f;
  const double w2 = p.omega * p.omega;
  const double kk = k, ll = l;
  f.b = -2.0 * w2;
  f.sigma = p.epsilon * (2.0 * kk * ll - p.alpha);
  f.s1 = 2.0 * (kk * ll + w2);
  f.s2 = 2.0 * (ll * ll + kk * ll - w2);
  f.s3 = 2.0 * (kk * kk + kk * ll - w2);
  f.s4 = 2.0 * (kk * kk + ll * ll + kk * ll - 3.0 * w2);
  const double ss = f.sigma * f.sigma;
  const double bb = f.b * f.b;
  f.d1 = f.s1 * f.s1 + ss - bb;
  f.d2 = f.s2 * f.s2 + ss - bb;
  f.d3 = f.s3 * f.s3 + ss - bb;
  f.d4 = f.s4 * f.s4 + ss - bb;
  return f;
}

[[noreturn]] void throw_exceptional(int k, int l, const char* what, double value) {
  std::ostringstream msg;
  msg << "normal form: exceptional denominator at (k, l) = (" << k << ", " << l
      << "): " << what << " = " << value;
  throw std::domain_error(msg.str());
}

void check_denominators(int k, int l, const Freqs& f) {
  const auto scale = [&](double s) {
    return std::max(1.0, s * s + f.sigma * f.sigma + f.b * f.b);
  };
  if (std::abs(f.d1) < 1e-8 * scale(f.s1)) throw_exceptional(k, l, "d1", f.d1);
  if (std::abs(f.d2) < 1e-8 * scale(f.s2)) throw_exceptional(k, l, "d2", f.d2);
  if (std::abs(f.d3) < 1e-8 * scale(f.s3)) throw_exceptional(k, l, "d3", f.d3);
  if (std::abs(f.d4) < 1e-8 * scale(f.s4)) throw_exceptional(k, l, "d4", f.d4);
}

double system_residual(int k, int l, const Params& p, const NormalFormCoeffs& c) {
  const Freqs f = freqs(k, l, p);
  const cd is(0.0, f.sigma);
  const cd r1 = (f.s1 + is) * c.K1 + f.b * c.K2_kl + f.b * c.K2_lk +
                f.b * std::conj(c.K3) + 2.0 * p.omega;
  const cd r2 = -f.b * c.K1 + (f.s2 + is) * c.K2_kl + f.b * std::conj(c.K2_lk) +
                f.b * c.K3 + 2.0 * p.omega;
  const cd r3 = -f.b * c.K1 + f.b * std::conj(c.K2_kl) + (f.s3 + is) * c.K2_lk +
                f.b * c.K3 + 2.0 * p.omega;
  const cd r4 = f.b * std::conj(c.K1) - f.b * c.K2_kl - f.b * c.K2_lk +
                (f.s4 + is) * c.K3;
  return std::max(std::max(std::abs(r1), std::abs(r2)),
                  std::max(std::abs(r3), std::abs(r4)));
}

}  // namespace

NormalFormCoeffs solve_coeffs(int k, int l, const Params& p) {
  const Freqs f = freqs(k, l, p);
  check_denominators(k, l, f);

  // Unknowns: Re/Im of K1, K2_kl, K2_lk, K3 (in that order).
  Eigen::Matrix<double, 8, 8> A = Eigen::Matrix<double, 8, 8>::Zero();
  Eigen::Matrix<double, 8, 1> rhs = Eigen::Matrix<double, 8, 1>::Zero();

  const auto add = [&A](int eq, int var, cd a, bool conjugated) {
    // a * z with z = x + i y:            Re = ax x - ay y, Im = ay x + ax y
    // a * conj(z):                       Re = ax x + ay y, Im = ay x - ax y
    const double ax = a.real(), ay = a.imag();
    const double sgn = conjugated ? -1.0 : 1.0;
    A(2 * eq, 2 * var) += ax;
    A(2 * eq, 2 * var + 1) += -sgn * ay;
    A(2 * eq + 1, 2 * var) += ay;
    A(2 * eq + 1, 2 * var + 1) += sgn * ax;
  };

  const cd is(0.0, f.sigma);
  const cd b(f.b, 0.0);
  // eq 0
  add(0, 0, f.s1 + is, false);
  add(0, 1, b, false);
  add(0, 2, b, false);
  add(0, 3, b, true);
  rhs(0) = -2.0 * p.omega;
  // eq 1
  add(1, 0, -b, false);
  add(1, 1, f.s2 + is, false);
  add(1, 2, b, true);
  add(1, 3, b, false);
  rhs(2) = -2.0 * p.omega;
  // eq 2
  add(2, 0, -b, false);
  add(2, 1, b, true);
  add(2, 2, f.s3 + is, false);
  add(2, 3, b, false);
  rhs(4) = -2.0 * p.omega;
  // eq 3
  add(3, 0, b, true);
  add(3, 1, -b, false);
  add(3, 2, -b, false);
  add(3, 3, f.s4 + is, false);

  Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(A);
  if (!lu.isInvertible()) {
    throw_exceptional(k, l, "coefficient system determinant", 0.0);
  }
  const Eigen::Matrix<double, 8, 1> u = lu.solve(rhs);

  NormalFormCoeffs c;
  c.K1 = cd(u(0), u(1));
  c.K2_kl = cd(u(2), u(3));
  c.K2_lk = cd(u(4), u(5));
  c.K3 = cd(u(6), u(7));
  c.K = 2.0 * p.omega + (f.s4 + is) * c.K3 + f.b * std::conj(c.K3);
  c.residual = system_residual(k, l, p, c);
  return c;
}

ReducedCoeffs reduced_coeffs(int k, int l, const Params& p) {
  const Freqs f = freqs(k, l, p);
  check_denominators(k, l, f);
  const cd is(0.0, f.sigma);
  ReducedCoeffs r;
  r.U = f.b * f.b / f.d1 + f.b * f.b / f.d2 + f.b * f.b / f.d3 +
        (f.s4 * f.s4 + f.sigma * f.sigma) / f.d4;
  r.V = -f.b * (f.s1 + is) / f.d1 + f.b * (f.s2 - is) / f.d2 +
        f.b * (f.s3 - is) / f.d3 - f.b * (f.s4 + is) / f.d4;
  r.W = 2.0 * p.omega * (f.s4 * f.s4 + f.sigma * f.sigma - f.b * (f.s4 + is)) / f.d4;
  return r;
}

NormalFormCoeffs closed_form_coeffs(int k, int l, const Params& p) {
  const Freqs f = freqs(k, l, p);
  check_denominators(k, l, f);
  const ReducedCoeffs r = reduced_coeffs(k, l, p);
  const double det = r.U * r.U - std::norm(r.V);
  const double scale = std::max(1.0, r.U * r.U + std::norm(r.V));
  if (std::abs(det) < 1e-8 * scale) {
    throw_exceptional(k, l, "U^2 - |V|^2", det);
  }
  const cd K = (r.U * r.W - r.V * std::conj(r.W)) / det;
  const cd is(0.0, f.sigma);

  NormalFormCoeffs c;
  c.K = K;
  c.K1 = (f.b * std::conj(K) - (f.s1 - is) * K) / f.d1;
  c.K2_kl = (-f.b * K - (f.s2 - is) * std::conj(K)) / f.d2;
  c.K2_lk = (-f.b * K - (f.s3 - is) * std::conj(K)) / f.d3;
  c.K3 = ((f.s4 - is) * (K - 2.0 * p.omega) - f.b * (std::conj(K) - 2.0 * p.omega)) / f.d4;
  c.residual = system_residual(k, l, p, c);
  return c;
}

double denominator_D(int k, int l, const Params& p) {
  const Freqs f = freqs(k, l, p);
  const double q1 = f.s1 - f.b;
  const double q2 = f.s2 + f.b;
  const double q3 = f.s3 + f.b;
  const double q4 = f.s4 - f.b;
  for (double q : {q1, q2, q3, q4}) {
    if (std::abs(q) < 1e-13) {
      throw_exceptional(k, l, "leading-order sub-denominator", q);
    }
  }
  return 1.0 + f.b * (1.0 / q1 - 1.0 / q2 - 1.0 / q3 + 1.0 / q4);
}

cd leading_K(int k, int l, const Params& p) {
  const Freqs f = freqs(k, l, p);
  const double D = denominator_D(k, l, p);
  const double bb = f.b * f.b;
  const double sum = 1.0 / (f.s1 * f.s1 - bb) + 1.0 / (f.s2 * f.s2 - bb) +
                     1.0 / (f.s3 * f.s3 - bb);
  return 2.0 * p.omega * (1.0 + iu * f.b * f.sigma * sum / D);
}

DenominatorScan denominator_scan(double omega, int kl_max, const Params& base) {
  Params p = base;
  p.omega = omega;
  DenominatorScan out;
  out.omega = omega;
  out.min_abs_D = std::numeric_limits<double>::infinity();
  out.min_abs_UV = std::numeric_limits<double>::infinity();
  for (int k = -kl_max; k <= kl_max; ++k) {
    for (int l = -kl_max; l <= kl_max; ++l) {
      if (k == 0 || l == 0 || k + l == 0) continue;
      bool flag = false;
      try {
        const double D = denominator_D(k, l, p);
        out.min_abs_D = std::min(out.min_abs_D, std::abs(D));
        if (std::abs(D) < 1e-6) flag = true;
      } catch (const std::domain_error&) {
        flag = true;
      }
      try {
        const ReducedCoeffs r = reduced_coeffs(k, l, p);
        const double uv = std::abs(r.U * r.U - std::norm(r.V));
        out.min_abs_UV = std::min(out.min_abs_UV, uv);
        if (uv < 1e-6) flag = true;
      } catch (const std::domain_error&) {
        flag = true;
      }
      if (flag) out.flagged.push_back({k, l});
    }
  }
  return out;
}

SpectralField apply_transform(const SpectralField& f, const Params& p, int k_max) {
  const std::size_t n = f.size();
  const int half = static_cast<int>(n) / 2;
  if (k_max < 1 || k_max > half - 1) {
    throw std::invalid_argument("apply_transform: k_max out of range");
  }
  const std::vector<cd> hat = f.modes();
  std::vector<cd> out_hat(n, cd(0.0, 0.0));
  for (int k = -k_max; k <= k_max; ++k) {
    if (k == 0) continue;
    for (int l = -k_max; l <= k_max; ++l) {
      if (l == 0 || k + l == 0) continue;
      const int m = k + l;
      if (m < -half || m > half - 1) continue;
      const NormalFormCoeffs c = closed_form_coeffs(k, l, p);
      const cd fk = hat[fft_index(k, n)];
      const cd fl = hat[fft_index(l, n)];
      const cd fkm = std::conj(hat[fft_index(-k, n)]);
      const cd flm = std::conj(hat[fft_index(-l, n)]);
      out_hat[fft_index(m, n)] +=
          c.K1 * fk * fl + c.K2_kl * fk * flm + c.K2_lk * fkm * fl + c.K3 * fkm * flm;
    }
  }
  return SpectralField::from_modes(out_hat);
}

SpectralField invert_transform(const SpectralField& g, const Params& p, int k_max,
                               double r0) {
  const double gn = g.sobolev_norm(1);
  if (gn > r0) {
    throw std::domain_error("invert_transform: input outside the contraction ball");
  }
  SpectralField f = g;
  std::vector<double> history;
  double prev_step = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    SpectralField next = g - apply_transform(f, p, k_max);
    const double step = (next - f).sobolev_norm(1);
    history.push_back(step);
    f = next;
    if (step < 1e-14 * std::max(1.0, gn)) return f;
    if (it > 2 && step > 0.9 * prev_step) {
      throw ConvergenceError(
          "invert_transform: fixed point iteration is not contracting", history);
    }
    prev_step = step;
  }
  throw ConvergenceError("invert_transform: no convergence in 100 iterations",
                         history);
}

}  // namespace nlshom
