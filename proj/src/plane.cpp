#include "nlshom/plane.hpp"

#include <cmath>
#include <stdexcept>

namespace nlshom {

namespace {

std::array<double, 2> rescaled_rhs(const PlaneState& s, const Params& p,
                                   bool leading) {
  const double eps = leading ? 0.0 : p.epsilon;
  const double I = p.omega * p.omega + std::sqrt(eps) * s.I;
  if (I <= 0.0) return {std::nan(""), std::nan("")};
  const double r = std::sqrt(I);
  const double jp = 2.0 * (-p.alpha * I + p.beta * r * std::cos(s.theta));
  const double tp = -2.0 * s.I - std::sqrt(eps) * p.beta * std::sin(s.theta) / r;
  return {jp, tp};
}

// Eigenvalues of [[a, b], [c, d]]
std::array<cd, 2> eig2(double a, double b, double c, double d) {
  const cd tr(a + d, 0.0);
  const cd disc = std::sqrt(cd((a - d) * (a - d) + 4.0 * b * c, 0.0));
  return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

// FD Jacobian eigenvalues of the full flow at (I, theta)
std::array<cd, 2> numeric_eigs_polar(double I, double theta, const Params& p) {
  const double hI = 1e-7 * std::max(1.0, std::abs(I));
  const double ht = 1e-7;
  const auto fI = [&](double Iv, double tv) {
    return plane_rhs({Iv, tv}, p);
  };
  const auto a = (fI(I + hI, theta)[0] - fI(I - hI, theta)[0]) / (2 * hI);
  const auto b = (fI(I, theta + ht)[0] - fI(I, theta - ht)[0]) / (2 * ht);
  const auto c = (fI(I + hI, theta)[1] - fI(I - hI, theta)[1]) / (2 * hI);
  const auto d = (fI(I, theta + ht)[1] - fI(I, theta - ht)[1]) / (2 * ht);
  return eig2(a, b, c, d);
}

std::array<cd, 2> numeric_eigs_cartesian(double u, double v, const Params& p) {
  const double h = 1e-7;
  const auto f = [&](double uu, double vv) { return plane_rhs_cartesian(uu, vv, p); };
  const auto a = (f(u + h, v)[0] - f(u - h, v)[0]) / (2 * h);
  const auto b = (f(u, v + h)[0] - f(u, v - h)[0]) / (2 * h);
  const auto c = (f(u + h, v)[1] - f(u - h, v)[1]) / (2 * h);
  const auto d = (f(u, v + h)[1] - f(u, v - h)[1]) / (2 * h);
  return eig2(a, b, c, d);
}

// Closed-form eigenvalues at a stationary point of the full flow. Uses the
// stationarity relations, so it is exact only there.
std::array<cd, 2> closed_eigs(double I, double theta, const Params& p,
                              FixedPointKind kind) {
  const double eps = p.epsilon;
  const double r = std::sqrt(I);
  const double s = std::sin(theta);
  if (kind == FixedPointKind::focus) {
    const double rad = 4.0 * std::pow(p.omega * p.omega - I, 2) - 4.0 * eps * r * p.beta * s;
    const cd root = std::sqrt(cd(rad, 0.0));
    return {-eps * p.alpha + iu * root, -eps * p.alpha - iu * root};
  }
  // center / saddle: mu = -eps alpha +- sqrt(4 eps beta sqrt(I) sin theta - (eps beta sin theta / sqrt(I))^2)
  const double inner = 4.0 * eps * p.beta * r * s -
                       eps * eps * std::pow(p.beta * s / r, 2);
  const cd root = std::sqrt(cd(inner, 0.0));
  return {-eps * p.alpha + root, -eps * p.alpha - root};
}

double stationarity_residual(double I, double theta, const Params& p) {
  const auto f = plane_rhs({I, theta}, p);
  const double e = p.epsilon > 0 ? p.epsilon : 1.0;
  return std::max(std::abs(f[0]) / e, std::abs(f[1]));
}

// Newton on (I, theta) with the analytic Jacobian, dI/dt scaled by 1/eps
PlaneState newton_polar(PlaneState s, const Params& p) {
  const double eps = p.epsilon;
  for (int it = 0; it < 60; ++it) {
    const double r = std::sqrt(s.I);
    const double F1 = -2.0 * p.alpha * s.I + 2.0 * p.beta * r * std::cos(s.theta);
    const double F2 = -2.0 * (s.I - p.omega * p.omega) -
                      eps * p.beta * std::sin(s.theta) / r;
    const double a = -2.0 * p.alpha + p.beta * std::cos(s.theta) / r;
    const double b = -2.0 * p.beta * r * std::sin(s.theta);
    const double c = -2.0 + 0.5 * eps * p.beta * std::sin(s.theta) / (s.I * r);
    const double d = -eps * p.beta * std::cos(s.theta) / r;
    const double det = a * d - b * c;
    if (det == 0.0) throw std::runtime_error("fixed_points: singular Jacobian");
    const double dI = (d * F1 - b * F2) / det;
    const double dt = (-c * F1 + a * F2) / det;
    s.I -= dI;
    s.theta -= dt;
    if (s.I <= 0.0) throw std::runtime_error("fixed_points: Newton left I > 0");
    if (std::abs(dI) + std::abs(dt) < 1e-15 * (1.0 + std::abs(s.I))) break;
  }
  return s;
}

}  // namespace

std::array<double, 2> plane_rhs(const PlaneState& s, const Params& p) {
  if (s.I <= 0.0) {
    throw std::domain_error("plane_rhs: I must be positive in the polar chart");
  }
  const double r = std::sqrt(s.I);
  const double Idot =
      p.epsilon * (-2.0 * p.alpha * s.I + 2.0 * p.beta * r * std::cos(s.theta));
  const double tdot = -2.0 * (s.I - p.omega * p.omega) -
                      p.epsilon * p.beta * std::sin(s.theta) / r;
  return {Idot, tdot};
}

std::array<double, 2> plane_rhs_cartesian(double u, double v, const Params& p) {
  // dq/dt = -2i (|q|^2 - omega^2) q + eps (beta - alpha q)
  const double mod = u * u + v * v - p.omega * p.omega;
  const double du = 2.0 * mod * v + p.epsilon * (p.beta - p.alpha * u);
  const double dv = -2.0 * mod * u - p.epsilon * p.alpha * v;
  return {du, dv};
}

std::vector<PlaneFixedPoint> fixed_points(const Params& p) {
  validate(p);
  const double eps = p.epsilon;
  const double w2 = p.omega * p.omega;
  std::vector<PlaneFixedPoint> out;

  // Small-amplitude focus: Newton in Cartesian coordinates (the polar chart is
  // ill-conditioned at I = O(eps^2)).
  {
    cd q = eps * p.beta / cd(eps * p.alpha, -2.0 * w2);
    for (int it = 0; it < 60; ++it) {
      const double u = q.real(), v = q.imag();
      const auto f = plane_rhs_cartesian(u, v, p);
      const double h = 1e-8;
      const double a = (plane_rhs_cartesian(u + h, v, p)[0] -
                        plane_rhs_cartesian(u - h, v, p)[0]) / (2 * h);
      const double b = (plane_rhs_cartesian(u, v + h, p)[0] -
                        plane_rhs_cartesian(u, v - h, p)[0]) / (2 * h);
      const double c = (plane_rhs_cartesian(u + h, v, p)[1] -
                        plane_rhs_cartesian(u - h, v, p)[1]) / (2 * h);
      const double d = (plane_rhs_cartesian(u, v + h, p)[1] -
                        plane_rhs_cartesian(u, v - h, p)[1]) / (2 * h);
      const double det = a * d - b * c;
      const double du = (d * f[0] - b * f[1]) / det;
      const double dv = (-c * f[0] + a * f[1]) / det;
      q -= cd(du, dv);
      if (std::abs(du) + std::abs(dv) < 1e-17) break;
    }
    PlaneFixedPoint fp;
    fp.kind = FixedPointKind::focus;
    fp.I = std::norm(q);
    fp.theta = std::atan2(q.imag(), q.real());
    fp.mu_closed = closed_eigs(fp.I, fp.theta, p, fp.kind);
    fp.mu_numeric = numeric_eigs_cartesian(q.real(), q.imag(), p);
    fp.residual = eps > 0 ? stationarity_residual(fp.I, fp.theta, p) : 0.0;
    out.push_back(fp);
  }

  const double root = std::sqrt(p.beta * p.beta - p.alpha * p.alpha * w2);
  struct Seed {
    FixedPointKind kind;
    double I, theta;
  };
  const double Ip = w2 + 0.5 * eps * root / p.omega;
  const double Iq = w2 - 0.5 * eps * root / p.omega;
  const Seed seeds[2] = {
      {FixedPointKind::center, Ip,
       -std::acos(std::min(1.0, p.alpha * std::sqrt(Ip) / p.beta))},
      {FixedPointKind::saddle, Iq,
       std::acos(std::min(1.0, p.alpha * std::sqrt(Iq) / p.beta))},
  };
  for (const Seed& sd : seeds) {
    PlaneFixedPoint fp;
    fp.kind = sd.kind;
    if (eps == 0.0) {
      fp.I = w2;
      fp.theta = sd.theta;
      fp.residual = 0.0;
    } else {
      const PlaneState refined = newton_polar({sd.I, sd.theta}, p);
      fp.I = refined.I;
      fp.theta = refined.theta;
      fp.residual = stationarity_residual(fp.I, fp.theta, p);
    }
    fp.mu_closed = closed_eigs(fp.I, fp.theta, p, fp.kind);
    fp.mu_numeric = numeric_eigs_polar(fp.I, fp.theta, p);
    out.push_back(fp);
  }
  return out;
}

double fish_hamiltonian(double j, double theta, const Params& p) {
  return j * j +
         2.0 * p.omega * (-p.alpha * p.omega * theta + p.beta * std::sin(theta));
}

double theta_star(const Params& p) {
  const double c = p.alpha * p.omega / p.beta;
  if (!(c < 1.0)) {
    throw std::domain_error("theta_star: requires alpha omega < beta");
  }
  return std::acos(c);
}

std::vector<PlaneFixedPoint> leading_fixed_points(const Params& p) {
  const double ts = theta_star(p);
  const double m =
      2.0 * std::sqrt(p.omega) *
      std::pow(p.beta * p.beta - p.alpha * p.alpha * p.omega * p.omega, 0.25);
  PlaneFixedPoint saddle{FixedPointKind::saddle, 0.0, ts,
                         {cd(m, 0.0), cd(-m, 0.0)},
                         {cd(m, 0.0), cd(-m, 0.0)},
                         0.0};
  PlaneFixedPoint center{FixedPointKind::center, 0.0, -ts,
                         {cd(0.0, m), cd(0.0, -m)},
                         {cd(0.0, m), cd(0.0, -m)},
                         0.0};
  // Numeric column from the FD Jacobian of the leading flow
  const double h = 1e-7;
  for (PlaneFixedPoint* fp : {&saddle, &center}) {
    const auto f = [&](double j, double t) {
      return rescaled_rhs({j, t}, p, true);
    };
    const double a = (f(fp->I + h, fp->theta)[0] - f(fp->I - h, fp->theta)[0]) / (2 * h);
    const double b = (f(fp->I, fp->theta + h)[0] - f(fp->I, fp->theta - h)[0]) / (2 * h);
    const double c = (f(fp->I + h, fp->theta)[1] - f(fp->I - h, fp->theta)[1]) / (2 * h);
    const double d = (f(fp->I, fp->theta + h)[1] - f(fp->I, fp->theta - h)[1]) / (2 * h);
    fp->mu_numeric = eig2(a, b, c, d);
  }
  return {saddle, center};
}

FishFrame fish_frame(const Params& p) {
  const double ts = theta_star(p);
  const auto F = [&](double th) {
    return p.alpha * p.omega * (th - ts) - p.beta * (std::sin(th) - std::sin(ts));
  };
  // F is increasing on (-3pi/2, -theta_*) and positive on (-theta_*, theta_*),
  // so the head is the unique sign change left of the saddle.
  double lo = -1.5 * pi;
  if (F(lo) >= 0.0) {
    throw std::runtime_error("fish_frame: no head bracket; parameters degenerate");
  }
  double hi = lo;
  const double step = 1e-3;
  while (hi < ts && F(hi) < 0.0) hi += step;
  if (hi >= ts) {
    throw std::runtime_error("fish_frame: level set does not close before the saddle");
  }
  lo = hi - step;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (F(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-16) break;
  }
  FishFrame out;
  out.theta_star = ts;
  out.theta_hat = 0.5 * (lo + hi);
  out.level = fish_hamiltonian(0.0, ts, p);
  return out;
}

double separatrix_unstable(double theta, const Params& p) {
  const double ts = theta_star(p);
  double rad = 2.0 * p.omega *
               (p.alpha * p.omega * (theta - ts) -
                p.beta * (std::sin(theta) - std::sin(ts)));
  if (rad < 0.0) {
    if (rad > -1e-12) {
      rad = 0.0;  // roundoff at the tangency points
    } else {
      throw std::domain_error("separatrix: angle outside the saddle level set");
    }
  }
  const double sgn = theta > ts ? 1.0 : (theta < ts ? -1.0 : 0.0);
  return -sgn * std::sqrt(rad);
}

std::vector<SeparatrixSample> separatrix_curves(const Params& p, double delta_hat,
                                                std::size_t samples) {
  const FishFrame fr = fish_frame(p);
  const double lo = fr.theta_hat + delta_hat;
  const double hi = fr.theta_star + 2.0 * pi;
  if (samples < 2) throw std::invalid_argument("separatrix: need >= 2 samples");
  std::vector<SeparatrixSample> out;
  out.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double th = lo + (hi - lo) * static_cast<double>(i) /
                               static_cast<double>(samples - 1);
    const double u = separatrix_unstable(th, p);
    out.push_back({th, u, -u});
  }
  return out;
}

PlaneTrajectory integrate_plane(const PlaneState& s0, double t_end, double dt,
                                const Params& p, PlaneModel model) {
  if (dt <= 0 || t_end <= 0) {
    throw std::invalid_argument("integrate_plane: dt and t_end must be positive");
  }
  const auto rhs = [&](const PlaneState& s) -> std::array<double, 2> {
    switch (model) {
      case PlaneModel::full:
        return plane_rhs(s, p);
      case PlaneModel::rescaled:
        return rescaled_rhs(s, p, false);
      case PlaneModel::leading:
        return rescaled_rhs(s, p, true);
    }
    return {0.0, 0.0};
  };
  const auto bad = [&](const PlaneState& s) {
    if (model == PlaneModel::full) return s.I <= 0.0;
    if (model == PlaneModel::rescaled) {
      return p.omega * p.omega + std::sqrt(p.epsilon) * s.I <= 0.0;
    }
    return false;
  };

  PlaneTrajectory traj;
  PlaneState s = s0;
  double t = 0.0;
  traj.t.push_back(t);
  traj.states.push_back(s);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
  for (std::size_t n = 0; n < steps; ++n) {
    const double h = std::min(dt, t_end - t);
    const auto step_state = [&](const PlaneState& y, const std::array<double, 2>& k,
                                double f) {
      return PlaneState{y.I + f * k[0], y.theta + f * k[1]};
    };
    if (bad(s)) {
      traj.halted = true;
      break;
    }
    const auto k1 = rhs(s);
    const PlaneState y2 = step_state(s, k1, 0.5 * h);
    if (bad(y2)) { traj.halted = true; break; }
    const auto k2 = rhs(y2);
    const PlaneState y3 = step_state(s, k2, 0.5 * h);
    if (bad(y3)) { traj.halted = true; break; }
    const auto k3 = rhs(y3);
    const PlaneState y4 = step_state(s, k3, h);
    if (bad(y4)) { traj.halted = true; break; }
    const auto k4 = rhs(y4);
    s.I += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    s.theta += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    t += h;
    if (bad(s)) {
      traj.halted = true;
      break;
    }
    traj.t.push_back(t);
    traj.states.push_back(s);
  }
  return traj;
}

}  // namespace nlshom
