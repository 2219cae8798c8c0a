#pragma once

#include <cstddef>
#include <string>

namespace nlshom {

// Physical parameters of the forced, damped cubic Schrodinger problem
//   i q_t = q_xx + 2(|q|^2 - omega^2) q + i epsilon (q_xx - alpha q + beta),
// spatially periodic on [0, 2pi], with plane-wave amplitude `amplitude` used by
// the integrable machinery (amplitude = omega on the resonance circle).
struct Params {
  double omega = 0.8;
  double alpha = 1.0;
  double beta = 2.0;
  double gamma = 0.0;
  double epsilon = 1e-3;
  double amplitude = 0.8;
};

struct GridSpec {
  std::size_t n = 256;
};

struct QuadratureSpec {
  double tau_max = 40.0;   // half-width of the time window in decay units
  int nodes_per_unit = 64; // Gauss-Legendre nodes per unit of the decay variable
  std::size_t x_grid = 256;
};

struct EvolutionSpec {
  double dt = 1e-4;
  double t_end = 10.0;
  std::size_t record_stride = 100;
};

struct Config {
  Params params;
  GridSpec grid;
  QuadratureSpec quadrature;
  EvolutionSpec evolution;
};

// Strict loader: unknown sections or keys raise std::invalid_argument, as do
// out-of-range values. Validation rules are in validate().
Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);

void validate(const Params& p);
void validate(const Config& c);

}  // namespace nlshom
