#include "nlshom/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "nlshom/common.hpp"

namespace nlshom {

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss: need at least one node");
  nodes.resize(n);
  weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

std::vector<std::pair<double, double>> composite_gauss(double a, double b,
                                                       int panels,
                                                       const GaussLegendre& rule) {
  if (panels < 1) throw std::invalid_argument("gauss: need at least one panel");
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(panels) * rule.nodes.size());
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      out.emplace_back(lo + 0.5 * w * (rule.nodes[i] + 1.0),
                       0.5 * w * rule.weights[i]);
    }
  }
  return out;
}

}  // namespace nlshom
