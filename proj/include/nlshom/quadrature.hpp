#pragma once

#include <utility>
#include <vector>

namespace nlshom {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration on
// the Legendre recurrence.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  explicit GaussLegendre(int n);
};

// Composite rule: `panels` equal panels covering [a, b], `rule` points each.
// Returns (node, weight) pairs in ascending node order.
std::vector<std::pair<double, double>> composite_gauss(double a, double b,
                                                       int panels,
                                                       const GaussLegendre& rule);

}  // namespace nlshom
