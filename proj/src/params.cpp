#include "nlshom/params.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nlshom/common.hpp"

namespace nlshom {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " +
                                  where);
    }
  }
}

double get_num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw std::invalid_argument(std::string("config: key '") + key +
                                "' must be a number");
  }
  return obj[key].get<double>();
}

std::size_t get_size(const json& obj, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned()) {
    throw std::invalid_argument(std::string("config: key '") + key +
                                "' must be a non-negative integer");
  }
  return obj[key].get<std::size_t>();
}

}  // namespace

Config parse_config(const std::string& json_text) {
  if (json_text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return Config{};
  }
  json root = json::parse(json_text);
  if (!root.is_object()) throw std::invalid_argument("config: root must be an object");
  reject_unknown(root, {"params", "grid", "quadrature", "evolution"}, "root");

  Config c;
  if (root.contains("params")) {
    const json& p = root["params"];
    reject_unknown(p, {"omega", "alpha", "beta", "gamma", "epsilon", "amplitude"},
                   "params");
    c.params.omega = get_num(p, "omega", c.params.omega);
    c.params.alpha = get_num(p, "alpha", c.params.alpha);
    c.params.beta = get_num(p, "beta", c.params.beta);
    c.params.gamma = get_num(p, "gamma", c.params.gamma);
    c.params.epsilon = get_num(p, "epsilon", c.params.epsilon);
    c.params.amplitude = get_num(p, "amplitude", c.params.omega);
  }
  if (root.contains("grid")) {
    const json& g = root["grid"];
    reject_unknown(g, {"n"}, "grid");
    c.grid.n = get_size(g, "n", c.grid.n);
  }
  if (root.contains("quadrature")) {
    const json& q = root["quadrature"];
    reject_unknown(q, {"tau_max", "nodes_per_unit", "x_grid"}, "quadrature");
    c.quadrature.tau_max = get_num(q, "tau_max", c.quadrature.tau_max);
    c.quadrature.nodes_per_unit = static_cast<int>(
        get_size(q, "nodes_per_unit", static_cast<std::size_t>(c.quadrature.nodes_per_unit)));
    c.quadrature.x_grid = get_size(q, "x_grid", c.quadrature.x_grid);
  }
  if (root.contains("evolution")) {
    const json& e = root["evolution"];
    reject_unknown(e, {"dt", "t_end", "record_stride"}, "evolution");
    c.evolution.dt = get_num(e, "dt", c.evolution.dt);
    c.evolution.t_end = get_num(e, "t_end", c.evolution.t_end);
    c.evolution.record_stride = get_size(e, "record_stride", c.evolution.record_stride);
  }
  validate(c);
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const Params& p) {
  if (!(p.omega > 0.5 && p.omega < 1.5)) {
    throw std::invalid_argument(
        "params: omega must lie in (1/2, 3/2), got " + std::to_string(p.omega));
  }
  if (std::abs(p.omega - 1.0) < 1e-12) {
    throw std::invalid_argument("params: omega = 1 is a degenerate mode boundary");
  }
  if (!(p.amplitude > 0.5 && p.amplitude < 1.5)) {
    throw std::invalid_argument("params: amplitude must lie in (1/2, 3/2)");
  }
  if (!(p.alpha > 0.0)) {
    throw std::invalid_argument("params: alpha must be positive");
  }
  if (!(p.epsilon >= 0.0 && p.epsilon < 0.1)) {
    throw std::invalid_argument("params: epsilon must lie in [0, 0.1)");
  }
  if (!(p.alpha * p.omega < p.beta)) {
    throw std::invalid_argument(
        "params: need αω < β (forcing must dominate damping), got alpha*omega = " +
        std::to_string(p.alpha * p.omega) + ", beta = " + std::to_string(p.beta));
  }
}

void validate(const Config& c) {
  validate(c.params);
  if (!is_pow2(c.grid.n) || c.grid.n < 8) {
    throw std::invalid_argument("grid: n must be a power of two >= 8");
  }
  if (!is_pow2(c.quadrature.x_grid) || c.quadrature.x_grid < 8) {
    throw std::invalid_argument("quadrature: x_grid must be a power of two >= 8");
  }
  if (!(c.quadrature.tau_max > 0) || c.quadrature.nodes_per_unit < 2) {
    throw std::invalid_argument("quadrature: tau_max > 0 and nodes_per_unit >= 2 required");
  }
  if (!(c.evolution.dt > 0) || !(c.evolution.t_end > 0)) {
    throw std::invalid_argument("evolution: dt and t_end must be positive");
  }
  if (c.evolution.record_stride == 0) {
    throw std::invalid_argument("evolution: record_stride must be positive");
  }
}

}  // namespace nlshom
