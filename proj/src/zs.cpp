#include "nlshom/zs.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nlshom/fft.hpp"

namespace nlshom {

namespace {

Mat2 add(const Mat2& x, const Mat2& y) {
  return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}

Mat2 scale(cd s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }

Mat2 coefficient_matrix(cd lambda, cd q) {
  return {iu * lambda, iu * q, iu * std::conj(q), -iu * lambda};
}

void rk4_step(Mat2& m, const Mat2& u0, const Mat2& u1, const Mat2& u2,
              double h) {
  const Mat2 k1 = u0 * m;
  const Mat2 k2 = u1 * add(m, scale(0.5 * h, k1));
  const Mat2 k3 = u1 * add(m, scale(0.5 * h, k2));
  const Mat2 k4 = u2 * add(m, scale(h, k3));
  m = add(m, scale(h / 6.0,
                   add(add(k1, k4), scale(2.0, add(k2, k3)))));
}

// One period of psi_x = U psi at step stride*dx_fine over the oversampled
// samples; records M at the coarse nodes when node_stride > 0.
Mat2 integrate(const std::vector<cd>& fine, cd lambda, std::size_t stride,
               std::vector<Mat2>* nodes, std::size_t node_stride) {
  const std::size_t nf = fine.size();
  const double h = static_cast<double>(stride) * 2.0 * pi /
                   static_cast<double>(nf);
  Mat2 m;
  if (nodes) nodes->push_back(m);
  for (std::size_t j = 0; j < nf; j += stride) {
    const Mat2 u0 = coefficient_matrix(lambda, fine[j]);
    const Mat2 u1 = coefficient_matrix(lambda, fine[(j + stride / 2) % nf]);
    const Mat2 u2 = coefficient_matrix(lambda, fine[(j + stride) % nf]);
    rk4_step(m, u0, u1, u2, h);
    if (nodes && (j + stride) % node_stride == 0) nodes->push_back(m);
  }
  return m;
}

std::vector<cd> oversample(const SpectralField& q) {
  return upsample(q.values(), 32);
}

}  // namespace

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
          x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

std::array<cd, 2> apply(const Mat2& m, const std::array<cd, 2>& v) {
  return {m.a * v[0] + m.b * v[1], m.c * v[0] + m.d * v[1]};
}

TransferResult zs_transfer(const SpectralField& q, cd lambda) {
  const std::vector<cd> fine = oversample(q);
  const Mat2 coarse = integrate(fine, lambda, 4, nullptr, 0);
  const Mat2 refined = integrate(fine, lambda, 2, nullptr, 0);
  const double disagreement =
      std::abs(coarse.trace() - refined.trace());
  if (disagreement > 1e-8) {
    std::ostringstream msg;
    msg << "zs_transfer: step halving moved the discriminant by "
        << disagreement << " at lambda = (" << lambda.real() << ", "
        << lambda.imag() << "); the field is not resolved";
    throw std::runtime_error(msg.str());
  }
  return {refined, refined.trace(), std::abs(refined.det() - 1.0),
          disagreement};
}

std::vector<Mat2> zs_transfer_path(const SpectralField& q, cd lambda) {
  const std::vector<cd> fine = oversample(q);
  std::vector<Mat2> nodes;
  nodes.reserve(q.size() + 1);
  integrate(fine, lambda, 2, &nodes, 32);
  return nodes;
}

Mat2 zs_transfer_magnus(const SpectralField& q, cd lambda,
                        int steps_per_node) {
  const std::size_t factor = 2 * static_cast<std::size_t>(steps_per_node);
  const std::vector<cd> fine = upsample(q.values(), factor);
  const std::size_t steps = q.size() * static_cast<std::size_t>(steps_per_node);
  const double h = 2.0 * pi / static_cast<double>(steps);
  Mat2 m;
  for (std::size_t j = 0; j < steps; ++j) {
    const Mat2 a = scale(h, coefficient_matrix(lambda, fine[2 * j + 1]));
    // exp of a trace-free 2x2: cosh(mu) I + sinh(mu)/mu A, mu^2 = -det A.
    const cd mu2 = -a.det();
    const cd mu = std::sqrt(mu2);
    cd sinhc;
    if (std::abs(mu) < 1e-6) {
      sinhc = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0;
    } else {
      sinhc = std::sinh(mu) / mu;
    }
    const cd ch = std::cosh(mu);
    const Mat2 e{ch + sinhc * a.a, sinhc * a.b, sinhc * a.c,
                 ch + sinhc * a.d};
    m = e * m;
  }
  return m;
}

cd floquet_discriminant(const SpectralField& q, cd lambda) {
  return zs_transfer(q, lambda).discriminant;
}

cd plane_wave_discriminant(double a, cd lambda) {
  const cd k = std::sqrt(cd{a * a, 0.0} + lambda * lambda);
  return 2.0 * std::cos(2.0 * pi * k);
}

CriticalPoint refine_critical_point(const SpectralField& q, cd seed) {
  const double h = 1e-3;
  cd lambda = seed;
  double residual = 0.0;
  for (int it = 0; it < 40; ++it) {
    const cd dpp = floquet_discriminant(q, lambda + 2.0 * h);
    const cd dp = floquet_discriminant(q, lambda + h);
    const cd d0 = floquet_discriminant(q, lambda);
    const cd dm = floquet_discriminant(q, lambda - h);
    const cd dmm = floquet_discriminant(q, lambda - 2.0 * h);
    const cd g = (-dpp + 8.0 * dp - 8.0 * dm + dmm) / (12.0 * h);
    const cd gp = (-dpp + 16.0 * dp - 30.0 * d0 + 16.0 * dm - dmm) /
                  (12.0 * h * h);
    residual = std::abs(g);
    if (residual < 1e-11) break;
    if (std::abs(gp) == 0.0) {
      throw std::runtime_error(
          "refine_critical_point: vanishing curvature, Newton step undefined");
    }
    const cd step = g / gp;
    lambda -= step;
    if (std::abs(step) < 1e-14) break;
  }
  {
    const cd dpp = floquet_discriminant(q, lambda + 2.0 * h);
    const cd dp = floquet_discriminant(q, lambda + h);
    const cd dm = floquet_discriminant(q, lambda - h);
    const cd dmm = floquet_discriminant(q, lambda - 2.0 * h);
    residual = std::abs((-dpp + 8.0 * dp - 8.0 * dm + dmm) / (12.0 * h));
  }
  if (residual > 1e-9) {
    std::ostringstream msg;
    msg << "refine_critical_point: Newton stalled, |Delta'| = " << residual;
    throw std::runtime_error(msg.str());
  }
  return {lambda, floquet_discriminant(q, lambda), residual};
}

cd discriminant_second_derivative(const SpectralField& q, cd lambda,
                                  double h) {
  const cd dpp = floquet_discriminant(q, lambda + 2.0 * h);
  const cd dp = floquet_discriminant(q, lambda + h);
  const cd d0 = floquet_discriminant(q, lambda);
  const cd dm = floquet_discriminant(q, lambda - h);
  const cd dmm = floquet_discriminant(q, lambda - 2.0 * h);
  return (-dpp + 16.0 * dp - 30.0 * d0 + 16.0 * dm - dmm) / (12.0 * h * h);
}

namespace {

std::array<cd, 2> monodromy_eigenvector(const Mat2& m, cd eig) {
  const std::array<cd, 2> cand1{m.b, eig - m.a};
  const std::array<cd, 2> cand2{eig - m.d, m.c};
  const double n1 = std::abs(cand1[0]) + std::abs(cand1[1]);
  const double n2 = std::abs(cand2[0]) + std::abs(cand2[1]);
  return n1 >= n2 ? cand1 : cand2;
}

}  // namespace

GradientField floquet_gradient(const SpectralField& q, cd lambda) {
  const std::vector<Mat2> path = zs_transfer_path(q, lambda);
  const Mat2 m = path.back();
  const cd delta = m.trace();
  if (std::abs(delta * delta - 4.0) < 1e-9) {
    throw std::domain_error(
        "floquet_gradient: Floquet multipliers coalesce at this lambda; use "
        "the degenerate evaluator");
  }
  const cd s = std::sqrt(delta * delta - 4.0);
  const cd mp = 0.5 * (delta + s);
  const cd mm = 0.5 * (delta - s);
  const std::array<cd, 2> vp = monodromy_eigenvector(m, mp);
  const std::array<cd, 2> vm = monodromy_eigenvector(m, mm);
  const cd w = vp[0] * vm[1] - vp[1] * vm[0];
  const double vscale = (std::abs(vp[0]) + std::abs(vp[1])) *
                        (std::abs(vm[0]) + std::abs(vm[1]));
  if (std::abs(w) < 1e-10 * std::max(vscale, 1e-30)) {
    throw std::domain_error(
        "floquet_gradient: degenerate eigenbasis (double point); use the "
        "degenerate evaluator");
  }
  const std::size_t n = q.size();
  GradientField g;
  g.dq.resize(n);
  g.dqbar.resize(n);
  const cd pref = iu * s / w;
  for (std::size_t j = 0; j < n; ++j) {
    const std::array<cd, 2> psip = apply(path[j], vp);
    const std::array<cd, 2> psim = apply(path[j], vm);
    g.dq[j] = pref * psip[1] * psim[1];
    g.dqbar[j] = -pref * psip[0] * psim[0];
  }
  return g;
}

GradientField floquet_gradient_degenerate(
    const SpectralField& q, cd nu, const std::vector<std::array<cd, 2>>& phi_p,
    const std::vector<std::array<cd, 2>>& phi_m, cd wronskian_base,
    cd extra_det) {
  const std::size_t n = q.size();
  if (phi_p.size() != n || phi_m.size() != n) {
    throw std::invalid_argument(
        "floquet_gradient_degenerate: eigenfunction grids must match the "
        "field grid");
  }
  const cd delta = floquet_discriminant(q, nu);
  const cd ddpp = discriminant_second_derivative(q, nu);
  // d(m+ - m-)/dlambda at the double point is -Delta sqrt(Delta''/Delta),
  // assuming the plus grid carries the multiplier branch whose quasimomentum
  // derivative lies in the upper half plane. The sign flips between
  // antiperiodic (Delta = -2) and periodic (Delta = +2) points.
  const cd split_slope = -delta * std::sqrt(ddpp / delta);
  const cd pref = iu * split_slope / (extra_det * wronskian_base);
  GradientField g;
  g.dq.resize(n);
  g.dqbar.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    g.dq[j] = pref * phi_p[j][1] * phi_m[j][1];
    g.dqbar[j] = -pref * phi_p[j][0] * phi_m[j][0];
  }
  return g;
}

cd pair_gradient(const GradientField& g, const std::vector<cd>& dq,
                 std::size_t n) {
  if (g.dq.size() != n || dq.size() != n) {
    throw std::invalid_argument("pair_gradient: size mismatch");
  }
  cd acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += dq[j] * g.dq[j] + std::conj(dq[j]) * g.dqbar[j];
  }
  return acc * (2.0 * pi / static_cast<double>(n));
}

}  // namespace nlshom
