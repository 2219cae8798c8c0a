// Command-line front end for the homoclinic-orbit toolkit. Every subcommand
// writes CSV artifacts plus a JSON run manifest carrying the parameters, an
// input hash, the output list and the embedded oracle results; a failing
// oracle makes the process exit nonzero. Numeric output is routed through
// format_double so reruns are byte identical.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlshom/common.hpp"
#include "nlshom/darboux.hpp"
#include "nlshom/evolution.hpp"
#include "nlshom/field.hpp"
#include "nlshom/io.hpp"
#include "nlshom/linearization.hpp"
#include "nlshom/melnikov.hpp"
#include "nlshom/normal_form.hpp"
#include "nlshom/params.hpp"
#include "nlshom/plane.hpp"
#include "nlshom/zs.hpp"

namespace fs = std::filesystem;
using nlshom::cd;
using nlshom::iu;
using nlshom::pi;
using json = nlohmann::json;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    int threads = 1;
};

// lo:hi:step (inclusive endpoints up to rounding); a bare number is a
// single-point range.
std::vector<double> parse_range(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
    if (parts.size() == 1) return {parts[0]};
    if (parts.size() != 3 || parts[2] <= 0.0) {
        throw std::invalid_argument("range must be 'lo:hi:step' with step > 0, got '" +
                                    text + "'");
    }
    std::vector<double> out;
    const auto count =
        static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
    for (std::size_t j = 0; j < count; ++j) out.push_back(parts[0] + static_cast<double>(j) * parts[2]);
    return out;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t j = 0; j < count; ++j) body(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= count) return;
            body(j);
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, static_cast<int>(count));
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

json config_json(const nlshom::Config& c) {
    return json{
        {"params",
         {{"omega", c.params.omega},
          {"alpha", c.params.alpha},
          {"beta", c.params.beta},
          {"gamma", c.params.gamma},
          {"epsilon", c.params.epsilon},
          {"amplitude", c.params.amplitude}}},
        {"grid", {{"n", c.grid.n}}},
        {"quadrature",
         {{"tau_max", c.quadrature.tau_max},
          {"nodes_per_unit", c.quadrature.nodes_per_unit},
          {"x_grid", c.quadrature.x_grid}}},
        {"evolution",
         {{"dt", c.evolution.dt},
          {"t_end", c.evolution.t_end},
          {"record_stride", c.evolution.record_stride}}}};
}

// Per-command manifest: parameters, deterministic input hash, outputs and the
// oracle table. write() returns false if any oracle failed.
class Manifest {
  public:
    Manifest(std::string command, const nlshom::Config& config, const std::string& invocation)
        : command_(std::move(command)) {
        doc_["command"] = command_;
        doc_["parameters"] = config_json(config);
        char buf[19];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(command_ + "\n" + invocation)));
        doc_["input_hash"] = std::string("fnv1a64:") + buf;
        doc_["outputs"] = json::array();
        doc_["oracles"] = json::array();
    }

    void add_output(const std::string& name) { doc_["outputs"].push_back(name); }

    void add_oracle(const std::string& name, double value, double tolerance) {
        const bool pass = value < tolerance;
        doc_["oracles"].push_back(
            {{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", pass}});
        all_pass_ = all_pass_ && pass;
        std::cout << (pass ? "[ok]   " : "[FAIL] ") << command_ << ": " << name << " = "
                  << nlshom::format_double(value) << " (tolerance "
                  << nlshom::format_double(tolerance) << ")\n";
    }

    void note(const std::string& key, const json& value) { doc_[key] = value; }

    bool write(const fs::path& dir) {
        std::ofstream out(dir / (command_ + "_manifest.json"));
        out << doc_.dump(2) << "\n";
        return all_pass_;
    }

  private:
    std::string command_;
    json doc_;
    bool all_pass_ = true;
};

fs::path resolve_out_dir(const GlobalOpts& g) {
    const char* env = std::getenv("NLS_HOMOCLINIC_OUT");
    fs::path dir = (env != nullptr && *env != '\0') ? fs::path(env) : fs::path(g.out_dir);
    fs::create_directories(dir);
    return dir;
}

// Richardson time derivative of an orbit snapshot, for residual oracles.
template <typename Orbit>
nlshom::SpectralField orbit_dt(const Orbit& orbit, double t, std::size_t n) {
    const double h = 1e-4;
    auto d_h = (0.5 / h) * (orbit.snapshot(t + h, n) + (-1.0) * orbit.snapshot(t - h, n));
    auto d_h2 = (1.0 / h) * (orbit.snapshot(t + 0.5 * h, n) + (-1.0) * orbit.snapshot(t - 0.5 * h, n));
    return (1.0 / 3.0) * (4.0 * d_h2 + (-1.0) * d_h);
}

template <typename Orbit>
double pde_residual(const Orbit& orbit, double t, std::size_t n, double omega) {
    auto q = orbit.snapshot(t, n);
    auto qxx = q.derivative(2);
    auto dq = orbit_dt(orbit, t, n);
    double worst = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const cd r = iu * dq[m] - qxx[m] - 2.0 * (std::norm(q[m]) - omega * omega) * q[m];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

// ---------------------------------------------------------------------------

int cmd_plane_portrait(const nlshom::Config& c, const fs::path& dir, Manifest& man) {
    const auto frame = nlshom::fish_frame(c.params);
    const double span = frame.theta_star - frame.theta_hat;
    const double jscale = nlshom::separatrix_unstable(frame.theta_hat + 0.5 * span, c.params);

    struct Seed { double j, theta; };
    const std::vector<Seed> seeds = {
        {0.0, frame.theta_hat + 0.25 * span},
        {0.0, frame.theta_hat + 0.55 * span},
        {0.0, frame.theta_hat + 0.85 * span},
        {0.05, frame.theta_star - 0.02},
        {1.4 * jscale, frame.theta_hat + 0.5 * span},
        {0.0, frame.theta_star + 0.6},
    };

    nlshom::CsvTable table({"run", "tau", "j", "theta", "H"});
    double worst_drift = 0.0;
    for (std::size_t r = 0; r < seeds.size(); ++r) {
        const auto traj = nlshom::integrate_plane({seeds[r].j, seeds[r].theta}, 30.0, 5e-4,
                                                  c.params, nlshom::PlaneModel::leading);
        const double h0 = nlshom::fish_hamiltonian(seeds[r].j, seeds[r].theta, c.params);
        for (std::size_t m = 0; m < traj.states.size(); m += 20) {
            const auto& s = traj.states[m];
            const double h = nlshom::fish_hamiltonian(s.I, s.theta, c.params);
            table.add_row({static_cast<double>(r), traj.t[m], s.I, s.theta, h});
            worst_drift = std::max(worst_drift, std::abs(h - h0));
        }
    }
    table.write((dir / "plane_trajectories.csv").string());
    man.add_output("plane_trajectories.csv");

    // Nullclines of the leading flow: theta' = 0 on j = 0, j' = 0 on the
    // saddle/center verticals theta = +-theta_*.
    nlshom::CsvTable null_table({"branch", "theta", "j"});
    const double ts = nlshom::theta_star(c.params);
    for (int m = 0; m <= 200; ++m) {
        const double th = frame.theta_hat - 1.0 + (ts + 2.0 * pi - frame.theta_hat) *
                                                      static_cast<double>(m) / 200.0;
        null_table.add_row({0.0, th, 0.0});
    }
    for (int m = 0; m <= 100; ++m) {
        const double j = -2.0 * jscale + 4.0 * jscale * static_cast<double>(m) / 100.0;
        null_table.add_row({1.0, ts, j});
        null_table.add_row({2.0, -ts, j});
    }
    null_table.write((dir / "plane_nullclines.csv").string());
    man.add_output("plane_nullclines.csv");

    man.add_oracle("leading_hamiltonian_drift", worst_drift, 1e-8);
    return 0;
}

int cmd_fish(const nlshom::Config& c, const fs::path& dir, Manifest& man) {
    const auto frame = nlshom::fish_frame(c.params);
    const auto curve = nlshom::separatrix_curves(c.params);

    nlshom::CsvTable table({"theta", "phi_unstable", "phi_stable"});
    double worst = 0.0;
    for (const auto& s : curve) {
        table.add_row({s.theta, s.phi_unstable, s.phi_stable});
        worst = std::max(worst, std::abs(nlshom::fish_hamiltonian(s.phi_unstable, s.theta,
                                                                  c.params) -
                                         frame.level));
    }
    table.write((dir / "fish.csv").string());
    man.add_output("fish.csv");
    man.note("frame", json{{"theta_star", frame.theta_star},
                           {"theta_hat", frame.theta_hat},
                           {"level", frame.level}});
    man.add_oracle("level_set_membership", worst, 1e-10);
    man.add_oracle("head_on_level",
                   std::abs(nlshom::fish_hamiltonian(0.0, frame.theta_hat, c.params) -
                            frame.level),
                   1e-10);
    return 0;
}

int cmd_spectrum(const nlshom::Config& c, int k_max, const fs::path& dir, Manifest& man) {
    nlshom::CsvTable table({"epsilon", "k", "re_mu_plus", "im_mu_plus", "re_mu_minus",
                            "im_mu_minus"});
    for (double eps : {0.0, c.params.epsilon}) {
        nlshom::Params p = c.params;
        p.epsilon = eps;
        for (const auto& pair : nlshom::spectrum_l_epsilon(p, k_max)) {
            table.add_row({eps, static_cast<double>(pair.k), pair.mu_plus.real(),
                           pair.mu_plus.imag(), pair.mu_minus.real(), pair.mu_minus.imag()});
        }
    }
    table.write((dir / "spectrum.csv").string());
    man.add_output("spectrum.csv");

    // Operator oracle: apply the constant-coefficient linearization to the
    // closed-form eigenfunctions of every unstable-band block (k < 2 omega).
    double worst = 0.0;
    const std::size_t n = 64;
    const auto mus = nlshom::spectrum_l_epsilon(c.params, std::max(k_max, 2));
    for (int k = 1; k <= std::max(k_max, 2) && k < 2.0 * c.params.omega; ++k) {
        const cd phase = nlshom::eigenvector_phase(k, c.params.omega);
        std::vector<cd> vals(n);
        for (std::size_t m = 0; m < n; ++m) {
            const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
            vals[m] = phase * std::cos(k * x);
        }
        const auto f = nlshom::SpectralField::from_values(std::move(vals));
        const auto lf = nlshom::l_epsilon_apply(f, c.params);
        const cd mu = mus[static_cast<std::size_t>(k - 1)].mu_plus;
        double r = 0.0;
        for (std::size_t m = 0; m < n; ++m) r = std::max(r, std::abs(lf[m] - mu * f[m]));
        worst = std::max(worst, r);
    }
    man.add_oracle("eigenfunction_residual", worst, 1e-10);
    man.add_oracle("unstable_count_mismatch",
                   std::abs(nlshom::unstable_mode_count(0.8) - 1) +
                       std::abs(nlshom::unstable_mode_count(1.2) - 2),
                   0.5);
    return 0;
}

int cmd_normal_form_scan(const nlshom::Config& c, const std::string& omega_range, int kl_max,
                         const fs::path& dir, Manifest& man) {
    const auto omegas = parse_range(omega_range);
    nlshom::CsvTable table({"omega", "min_abs_D", "min_abs_UV", "flagged_pairs"});
    for (double w : omegas) {
        const auto scan = nlshom::denominator_scan(w, kl_max, c.params);
        table.add_row({w, scan.min_abs_D, scan.min_abs_UV,
                       static_cast<double>(scan.flagged.size())});
    }
    table.write((dir / "normal_form_scan.csv").string());
    man.add_output("normal_form_scan.csv");

    // Coefficient table at the configured parameters, keyed by "(k,l)".
    json coeffs = json::object();
    double worst = 0.0;
    for (int k = 1; k <= kl_max; ++k) {
        for (int l = 1; l <= kl_max; ++l) {
            const auto nf = nlshom::solve_coeffs(k, l, c.params);
            worst = std::max(worst, nf.residual);
            coeffs["(" + std::to_string(k) + "," + std::to_string(l) + ")"] = {
                {"K1", {nf.K1.real(), nf.K1.imag()}},
                {"K2_kl", {nf.K2_kl.real(), nf.K2_kl.imag()}},
                {"K2_lk", {nf.K2_lk.real(), nf.K2_lk.imag()}},
                {"K3", {nf.K3.real(), nf.K3.imag()}},
                {"K", {nf.K.real(), nf.K.imag()}},
                {"residual", nf.residual}};
        }
    }
    {
        std::ofstream out(dir / "normal_form_coeffs.json");
        out << coeffs.dump(2) << "\n";
    }
    man.add_output("normal_form_coeffs.json");
    man.add_oracle("coefficient_system_residual", worst, 1e-12);
    return 0;
}

int cmd_floquet(const nlshom::Config& c, double a, const fs::path& dir, Manifest& man) {
    const auto q = nlshom::SpectralField::from_values(
        std::vector<cd>(c.grid.n, cd(a, 0.0)));

    std::vector<cd> lambdas;
    for (int m = 0; m < 50; ++m)
        lambdas.emplace_back(0.0, 1.2 * static_cast<double>(m) / 49.0);
    for (int m = 0; m < 50; ++m)
        lambdas.emplace_back(-1.0 + 2.0 * static_cast<double>(m) / 49.0, 0.0);

    nlshom::CsvTable table({"re_lambda", "im_lambda", "re_delta", "im_delta",
                            "re_closed", "im_closed"});
    double worst = 0.0;
    for (const cd lambda : lambdas) {
        const cd num = nlshom::floquet_discriminant(q, lambda);
        const cd closed = nlshom::plane_wave_discriminant(a, lambda);
        table.add_row({lambda.real(), lambda.imag(), num.real(), num.imag(),
                       closed.real(), closed.imag()});
        worst = std::max(worst, std::abs(num - closed));
    }
    table.write((dir / "floquet.csv").string());
    man.add_output("floquet.csv");
    man.add_oracle("plane_wave_discriminant_error", worst, 1e-8);
    return 0;
}

struct HomoclinicOpts {
    int pairs = 1;
    bool even = false;
    double a = 0.0;  // 0 = take the configured amplitude
    double rho = 0.0, vartheta = 0.0, rho_hat = 0.0, vartheta_hat = 0.0;
    double t0 = -4.0, t1 = 4.0;
    int nt = 21;
};

int cmd_homoclinic(const nlshom::Config& c, const HomoclinicOpts& o, const fs::path& dir,
                   Manifest& man) {
    const double a = o.a > 0.0 ? o.a : c.params.amplitude;
    nlshom::PlaneWave pw;
    pw.a = a;
    pw.omega = c.params.omega;
    pw.gamma = c.params.gamma;
    const std::size_t n = c.grid.n;

    nlshom::CsvTable table({"t", "x", "re", "im"});
    auto emit = [&](auto&& snapshot_fn) {
        for (int j = 0; j < o.nt; ++j) {
            const double t =
                o.t0 + (o.t1 - o.t0) * static_cast<double>(j) / static_cast<double>(o.nt - 1);
            const auto q = snapshot_fn(t);
            for (std::size_t m = 0; m < n; ++m) {
                const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
                table.add_row({t, x, q[m].real(), q[m].imag()});
            }
        }
    };

    if (o.pairs == 1) {
        const auto orbit = o.even ? nlshom::OnePairOrbit::even(pw, o.rho)
                                  : nlshom::OnePairOrbit(pw, o.rho, o.vartheta);
        emit([&](double t) { return orbit.snapshot(t, n); });

        const double sigma = orbit.points().sigma;
        man.add_oracle("pde_residual", pde_residual(orbit, 0.3, n, c.params.omega), 1e-6);
        const double t_far = (40.0 + std::abs(o.rho)) / (2.0 * sigma);
        const cd target = pw.value(t_far) * orbit.asymptotic_phase(+1);
        auto far = orbit.snapshot(t_far, n);
        double gap = 0.0;
        for (std::size_t m = 0; m < n; ++m) gap = std::max(gap, std::abs(far[m] - target));
        man.add_oracle("asymptotic_phase_gap", gap, 1e-10);
    } else if (o.pairs == 2) {
        const auto orbit = o.even
                               ? nlshom::TwoPairOrbit::even(pw, o.rho, o.rho_hat)
                               : nlshom::TwoPairOrbit(pw, o.rho, o.vartheta, o.rho_hat,
                                                      o.vartheta_hat);
        emit([&](double t) { return orbit.snapshot(t, n); });

        man.add_oracle("pde_residual", pde_residual(orbit, 0.3, n, c.params.omega), 1e-5);
        const auto& dp = orbit.points();
        const double t_far = std::max((40.0 + std::abs(o.rho)) / (2.0 * dp.sigma),
                                      (40.0 + std::abs(o.rho_hat)) / (4.0 * dp.sigma_hat));
        const cd target = pw.value(t_far) * orbit.asymptotic_phase(+1);
        const auto far = orbit.snapshot(t_far, n);
        double gap = 0.0;
        for (std::size_t m = 0; m < n; ++m) gap = std::max(gap, std::abs(far[m] - target));
        man.add_oracle("asymptotic_phase_gap", gap, 1e-10);
        double worst = 0.0;
        for (int j = 0; j < 5; ++j) {
            const double t = -1.0 + 0.5 * static_cast<double>(j);
            double gap = 0.0;
            const auto direct = orbit.snapshot(t, n);
            for (std::size_t m = 0; m < n; ++m) {
                const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
                gap = std::max(gap, std::abs(direct[m] - orbit.value_iterated(t, x)));
            }
            worst = std::max(worst, gap);
        }
        man.add_oracle("iterated_gauge_gap", worst, 1e-8);
    } else {
        throw std::invalid_argument("homoclinic: --pairs must be 1 or 2");
    }

    table.write((dir / "homoclinic.csv").string());
    man.add_output("homoclinic.csv");
    return 0;
}

int cmd_melnikov_kappa(const nlshom::Config& c, const std::string& omega_range,
                       const fs::path& dir, int threads, Manifest& man) {
    const auto omegas = parse_range(omega_range);
    std::vector<nlshom::KappaPoint> points(omegas.size());
    parallel_for(omegas.size(), threads, [&](std::size_t j) {
        points[j] = nlshom::kappa_point(omegas[j], c.quadrature, true);
    });

    nlshom::CsvTable table({"omega", "delta_gamma", "m1", "m2", "m3", "m4", "kappa",
                            "alpha", "m1_closure", "d_tilde", "cert_domain", "cert_nodes",
                            "imag_residue", "singular"});
    double worst_m1 = 0.0, worst_d = 0.0, worst_cert = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        const auto& pt = points[j];
        const auto& in = pt.integrals;
        const double C = nlshom::one_pair_drop_constant(in.omega);
        // gamma = 0 representative of the existence relation: beta cos(gamma)
        // pinned by the distance closure, beta sin(gamma) = 0.
        double beta0 = 0.0, m1_abs = 0.0, d_abs = 0.0;
        if (!pt.singular) {
            beta0 = pt.alpha * in.omega * pt.delta_gamma /
                    (2.0 * std::sin(0.5 * pt.delta_gamma));
            m1_abs = std::abs(C * (in.m1 + pt.alpha * in.m2 + beta0 * in.m3));
            d_abs = std::abs(nlshom::second_distance(-0.5 * pt.delta_gamma,
                                                     pt.delta_gamma, pt.alpha, beta0,
                                                     in.omega));
        }
        table.add_row({in.omega, pt.delta_gamma, in.m1, in.m2, in.m3, in.m4_diagnostic,
                       pt.kappa, pt.alpha, m1_abs, d_abs, in.cert_domain, in.cert_nodes,
                       in.imag_residue, pt.singular ? 1.0 : 0.0});
        if (!pt.singular) {
            worst_m1 = std::max(worst_m1, m1_abs);
            worst_d = std::max(worst_d, d_abs);
        }
        worst_cert = std::max({worst_cert, std::abs(in.cert_domain), std::abs(in.cert_nodes)});
    }
    table.write((dir / "melnikov_kappa.csv").string());
    man.add_output("melnikov_kappa.csv");
    man.add_oracle("measurement_closure", worst_m1, 1e-8);
    man.add_oracle("distance_closure", worst_d, 1e-8);
    man.add_oracle("quadrature_certificates", worst_cert, 1e-8);
    return 0;
}

int cmd_melnikov_surface(const nlshom::Config& c, const std::string& omega_range,
                         const std::string& rho_range, const fs::path& dir, int threads,
                         Manifest& man) {
    const auto omegas = parse_range(omega_range);
    const auto rhos = parse_range(rho_range);
    const std::size_t count = omegas.size() * rhos.size();
    std::vector<nlshom::SurfacePoint> points(count);
    parallel_for(count, threads, [&](std::size_t j) {
        const double w = omegas[j / rhos.size()];
        const double dr = rhos[j % rhos.size()];
        points[j] = nlshom::surface_point(w, dr, c.quadrature, true);
    });

    nlshom::CsvTable table({"omega", "delta_rho", "chi", "alpha", "beta", "gamma",
                            "closure_1", "closure_2", "closure_d", "cert_domain",
                            "cert_nodes", "singular"});
    double worst_closure = 0.0, worst_d = 0.0, worst_cert = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const auto& sp = points[j];
        const auto& in = sp.integrals;
        // Absolute zero-residuals of the two measurements and the distance.
        double z[2];
        for (int r = 0; r < 2; ++r) {
            z[r] = std::abs(in.m[r][0] + sp.alpha * in.m[r][1] +
                            sp.beta_cos_gamma * in.m[r][2] + sp.beta_sin_gamma * in.m[r][3]);
        }
        const double dg = sp.delta_gamma;
        const double d_abs = sp.singular
                                 ? 0.0
                                 : std::abs(nlshom::second_distance(
                                       sp.gamma - 0.5 * dg, dg, sp.alpha, sp.beta, in.omega));
        table.add_row({in.omega, in.delta_rho, sp.chi, sp.alpha, sp.beta, sp.gamma, z[0],
                       z[1], d_abs, in.cert_domain, in.cert_nodes, sp.singular ? 1.0 : 0.0});
        if (!sp.singular) {
            worst_closure = std::max({worst_closure, z[0], z[1]});
            worst_d = std::max(worst_d, d_abs);
        }
        worst_cert = std::max({worst_cert, std::abs(in.cert_domain), std::abs(in.cert_nodes)});
    }
    table.write((dir / "melnikov_surface.csv").string());
    man.add_output("melnikov_surface.csv");
    man.add_oracle("measurement_closure", worst_closure, 1e-6);
    man.add_oracle("distance_closure", worst_d, 1e-6);
    man.add_oracle("quadrature_certificates", worst_cert, 1e-8);
    return 0;
}

int cmd_second_distance(const nlshom::Config& c, const std::string& theta_range,
                        double shift, const fs::path& dir, Manifest& man) {
    const auto thetas = parse_range(theta_range);
    const double dg = shift != 0.0 ? shift : nlshom::phase_shift_one_pair(c.params.omega);

    nlshom::CsvTable table({"theta0", "shift", "alpha", "beta", "d"});
    for (double th : thetas) {
        table.add_row({th, dg, c.params.alpha, c.params.beta,
                       nlshom::second_distance(th, dg, c.params.alpha, c.params.beta,
                                               c.params.omega)});
    }
    table.write((dir / "second_distance.csv").string());
    man.add_output("second_distance.csv");

    // The distance is the reduced Hamiltonian difference; check at three rows.
    double worst = 0.0;
    for (double th : {thetas.front(), thetas[thetas.size() / 2], thetas.back()}) {
        const double d =
            nlshom::second_distance(th, dg, c.params.alpha, c.params.beta, c.params.omega);
        const double dh = nlshom::fish_hamiltonian(0.2, th, c.params) -
                          nlshom::fish_hamiltonian(0.2, th + dg, c.params);
        worst = std::max(worst, std::abs(d - dh));
    }
    man.add_oracle("hamiltonian_difference_identity", worst, 1e-12);
    return 0;
}

struct EvolveOpts {
    std::string equation = "nls";
    std::string init = "plane";
    std::string file;
    double dt = 0.0;     // 0 = config value
    double t_end = 0.0;  // 0 = config value
    double epsilon = -1.0;
};

int cmd_evolve(const nlshom::Config& c, const EvolveOpts& o, const fs::path& dir,
               Manifest& man) {
    nlshom::Params p = c.params;
    if (o.epsilon >= 0.0) p.epsilon = o.epsilon;
    nlshom::EvolutionSpec spec = c.evolution;
    if (o.dt > 0.0) spec.dt = o.dt;
    if (o.t_end > 0.0) spec.t_end = o.t_end;

    nlshom::PlaneWave pw;
    pw.a = p.amplitude;
    pw.omega = p.omega;
    pw.gamma = p.gamma;
    nlshom::SpectralField q0 = [&]() {
        if (o.init == "plane") {
            return nlshom::SpectralField::from_values(
                std::vector<cd>(c.grid.n, pw.value(0.0)));
        }
        if (o.init == "homoclinic-1") {
            return nlshom::OnePairOrbit::even(pw, 0.0).snapshot(-5.0, c.grid.n);
        }
        if (o.init == "homoclinic-2") {
            return nlshom::TwoPairOrbit::even(pw, 0.0, 0.0).snapshot(-5.0, c.grid.n);
        }
        if (o.init == "file") {
            if (o.file.empty())
                throw std::invalid_argument("evolve: --init file needs --file PATH");
            return nlshom::read_field_csv(o.file);
        }
        throw std::invalid_argument("evolve: unknown --init '" + o.init +
                                    "' (plane, homoclinic-1, homoclinic-2, file)");
    }();

    const auto eq = [&]() {
        if (o.equation == "nls") return nlshom::Equation::nls;
        if (o.equation == "pnls") return nlshom::Equation::pnls;
        throw std::invalid_argument("evolve: unknown --equation '" + o.equation + "'");
    }();

    // Cap the snapshot cadence at roughly ten files.
    const auto steps = static_cast<std::size_t>(std::ceil(spec.t_end / spec.dt - 1e-9));
    spec.record_stride = std::max(spec.record_stride, steps / 10 + 1);

    nlshom::EvolveOptions opt;
    opt.record_snapshots = true;
    const auto res = nlshom::evolve(q0, eq, p, spec, opt);

    json records = json::array();
    double mass_drift = 0.0, energy_drift = 0.0;
    const double mass0 = nlshom::field_mass(q0);
    const double energy0 = nlshom::nls_energy(q0, p.omega);
    for (std::size_t j = 0; j < res.records.size(); ++j) {
        const auto& rec = res.records[j];
        records.push_back({{"t", rec.t},
                           {"mass", rec.mass},
                           {"energy", rec.energy},
                           {"tail_fraction", rec.tail_fraction}});
        mass_drift = std::max(mass_drift, std::abs(rec.mass - mass0));
        energy_drift = std::max(energy_drift, std::abs(rec.energy - energy0));
        char name[48];
        std::snprintf(name, sizeof name, "evolve_snapshot_%03zu.csv", j);
        nlshom::write_field_csv(res.snapshots[j], (dir / name).string());
        man.add_output(name);
    }
    nlshom::write_field_csv(res.final_state, (dir / "evolve_final.csv").string());
    man.add_output("evolve_final.csv");

    man.note("records", records);
    man.note("conserved_drift", json{{"mass", mass_drift}, {"energy", energy_drift}});
    man.add_oracle("halving_certificate", res.cert_halving, 1e-8);
    if (eq == nlshom::Equation::nls) {
        man.add_oracle("mass_drift", mass_drift, 1e-10);
    }
    return 0;
}

int cmd_track(const nlshom::Config& c, const std::string& epsilons_text, double window_start,
              const fs::path& dir, Manifest& man) {
    std::vector<double> epsilons;
    std::stringstream ss(epsilons_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) epsilons.push_back(std::stod(tok));

    const auto result =
        nlshom::tracking_experiment(epsilons, c.params, c.grid.n, c.evolution, window_start);

    nlshom::CsvTable table({"epsilon", "window_start", "window_end", "sup_distance",
                            "end_distance", "bound_ratio", "plane_distance_end",
                            "correction_scale"});
    double rmin = 1e300, rmax = 0.0;
    for (const auto& row : result.rows) {
        table.add_row({row.epsilon, row.window_start, row.window_end, row.sup_distance,
                       row.end_distance, row.bound_ratio, row.plane_distance_end,
                       row.correction_scale});
        rmin = std::min(rmin, row.bound_ratio);
        rmax = std::max(rmax, row.bound_ratio);
    }
    table.write((dir / "tracking.csv").string());
    man.add_output("tracking.csv");
    man.note("mu", result.mu);
    man.add_oracle("reference_path_identity", result.reference_check, 1e-300);
    if (result.rows.size() > 1) {
        man.add_oracle("bound_ratio_spread", rmax / rmin, 4.0);
    }
    return 0;
}

// The verify umbrella: a desk-scale oracle sweep over every module. --full
// adds the slower dynamical checks.
int cmd_verify(const nlshom::Config& c, bool full, const fs::path& dir, Manifest& man) {
    // Field / quadrature layer.
    {
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const std::size_t n = 128;
        std::vector<cd> vals(n);
        cd coeff[7];
        for (auto& z : coeff) z = cd(u(rng), u(rng));
        for (std::size_t m = 0; m < n; ++m) {
            const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
            cd v = 0.7 + coeff[0] * 0.1;
            for (int k = 1; k <= 3; ++k) {
                v += 0.2 / k * (coeff[k] * std::exp(iu * (k * x)) +
                                coeff[3 + k] * std::exp(-iu * (k * x)));
            }
            vals[m] = v;
        }
        const auto f = nlshom::SpectralField::from_values(vals);
        const auto back = nlshom::SpectralField::from_modes(f.modes());
        man.add_oracle("fft_round_trip", nlshom::sup_difference(f, back), 1e-13);

        // Parseval: grid quadrature of |f|^2 against the mode-sum norm.
        double grid_sum = 0.0;
        for (std::size_t m = 0; m < n; ++m) grid_sum += std::norm(f[m]);
        grid_sum *= 2.0 * pi / static_cast<double>(n);
        man.add_oracle("parseval_gap",
                       std::abs(grid_sum - f.l2_norm() * f.l2_norm()), 1e-12);

        std::vector<cd> cs(n);
        for (std::size_t m = 0; m < n; ++m) {
            const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
            cs[m] = std::cos(3.0 * x);
        }
        const auto g = nlshom::SpectralField::from_values(std::move(cs));
        const auto gx = g.derivative(1);
        double dworst = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
            dworst = std::max(dworst, std::abs(gx[m] - cd(-3.0 * std::sin(3.0 * x), 0.0)));
        }
        man.add_oracle("spectral_derivative", dworst, 1e-12);
    }

    // Integrable layer.
    for (double a : {0.8, 1.2}) {
        const auto q = nlshom::SpectralField::from_values(std::vector<cd>(128, cd(a, 0.0)));
        double worst = 0.0;
        for (int m = 0; m < 20; ++m) {
            const cd lambda(-0.8 + 1.6 * static_cast<double>(m) / 19.0,
                            0.05 * static_cast<double>(m % 3));
            worst = std::max(worst, std::abs(nlshom::floquet_discriminant(q, lambda) -
                                             nlshom::plane_wave_discriminant(a, lambda)));
        }
        man.add_oracle("plane_wave_discriminant_a" + nlshom::format_double(a), worst, 1e-8);

        const auto d = nlshom::double_points(a);
        const auto cp = nlshom::refine_critical_point(q, cd(0.02, 0.95 * d.sigma));
        man.add_oracle("double_point_a" + nlshom::format_double(a),
                       std::abs(cp.lambda - d.nu()), 1e-8);
    }

    // Linearization layer; omega = 1.2 keeps both k = 1, 2 inside the band.
    {
        nlshom::Params p = c.params;
        p.omega = 1.2;
        double worst = 0.0;
        for (int k : {1, 2}) {
            const cd phase = nlshom::eigenvector_phase(k, p.omega);
            const std::size_t n = 64;
            std::vector<cd> vals(n);
            for (std::size_t m = 0; m < n; ++m) {
                const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
                vals[m] = phase * std::cos(k * x);
            }
            const auto f = nlshom::SpectralField::from_values(std::move(vals));
            const auto lf = nlshom::l_epsilon_apply(f, p);
            const cd mu = nlshom::spectrum_l_epsilon(p, 4)[static_cast<std::size_t>(k - 1)].mu_plus;
            for (std::size_t m = 0; m < f.size(); ++m)
                worst = std::max(worst, std::abs(lf[m] - mu * f[m]));
        }
        man.add_oracle("l_epsilon_eigenfunctions", worst, 1e-10);
    }

    // Normal-form layer: seeded random sweep plus the eps = 0 closed form.
    {
        std::mt19937 rng(777);
        std::uniform_real_distribution<double> uw(0.55, 1.45);
        std::uniform_int_distribution<int> uk(1, 6);
        std::uniform_real_distribution<double> ue(-5.0, -2.0);
        double worst = 0.0;
        int done = 0;
        while (done < 100) {
            nlshom::Params p = c.params;
            p.omega = uw(rng);
            if (std::abs(p.omega - 1.0) < 0.05) continue;
            p.epsilon = std::pow(10.0, ue(rng));
            const int k = uk(rng);
            const int l = uk(rng);
            if (nlshom::denominator_D(k, l, p) < 1e-3) continue;
            const auto nf = nlshom::solve_coeffs(k, l, p);
            const auto cf = nlshom::closed_form_coeffs(k, l, p);
            worst = std::max({worst, nf.residual, std::abs(nf.K - cf.K)});
            ++done;
        }
        man.add_oracle("normal_form_residual", worst, 1e-12);

        nlshom::Params p0 = c.params;
        p0.epsilon = 0.0;
        const auto nf = nlshom::solve_coeffs(1, 2, p0);
        const double w = p0.omega;
        const double gap = std::max(
            {std::abs(nf.K1 - cd(-w / 2.0, 0.0)), std::abs(nf.K2_kl - cd(-w / 6.0, 0.0)),
             std::abs(nf.K2_lk - cd(-w / 3.0, 0.0)), std::abs(nf.K3),
             std::abs(nf.K - cd(2.0 * w, 0.0))});
        man.add_oracle("normal_form_eps0_closed_form", gap, 1e-12);
    }

    // Plane layer.
    {
        const auto frame = nlshom::fish_frame(c.params);
        man.add_oracle("fish_head_on_level",
                       std::abs(nlshom::fish_hamiltonian(0.0, frame.theta_hat, c.params) -
                                frame.level),
                       1e-10);
    }

    // Darboux layer.
    {
        nlshom::PlaneWave pw;
        pw.a = 0.8;
        pw.omega = 0.8;
        const auto orbit = nlshom::OnePairOrbit::even(pw, 0.2);
        const std::size_t n = 128;
        double worst = 0.0;
        for (double t : {-1.5, 0.0, 1.2}) {
            const auto direct = orbit.snapshot(t, n);
            for (std::size_t m = 0; m < n; ++m) {
                const double x = 2.0 * pi * static_cast<double>(m) / static_cast<double>(n);
                const cd raw = nlshom::darboux_potential(pw.value(t), orbit.points().nu(),
                                                         orbit.phi(t, x));
                worst = std::max(worst, std::abs(direct[m] - raw));
            }
        }
        man.add_oracle("darboux_closed_form_gap", worst, 1e-10);

        const double sigma = orbit.points().sigma;
        const double t_far = (40.0 + 0.2) / (2.0 * sigma);
        const cd target = pw.value(t_far) * orbit.asymptotic_phase(+1);
        const auto far = orbit.snapshot(t_far, n);
        double gap = 0.0;
        for (std::size_t m = 0; m < n; ++m) gap = std::max(gap, std::abs(far[m] - target));
        man.add_oracle("asymptotic_phase_gap", gap, 1e-10);
    }

    // Melnikov closure at one frequency.
    {
        const auto pt = nlshom::kappa_point(0.8, c.quadrature, false);
        man.add_oracle("kappa_closure", pt.closure_residual, 1e-8);
        const double d = nlshom::second_distance(0.3, 0.7, c.params.alpha, c.params.beta,
                                                 c.params.omega);
        const double dh = nlshom::fish_hamiltonian(0.1, 0.3, c.params) -
                          nlshom::fish_hamiltonian(0.1, 0.3 + 0.7, c.params);
        man.add_oracle("second_distance_identity", std::abs(d - dh), 1e-12);
    }

    if (full) {
        nlshom::PlaneWave pw;
        pw.a = 0.8;
        pw.omega = 0.8;
        const auto orbit = nlshom::OnePairOrbit::even(pw, 0.0);
        man.add_oracle("one_pair_pde_residual",
                       std::max({pde_residual(orbit, -2.0, 256, 0.8),
                                 pde_residual(orbit, 0.0, 256, 0.8),
                                 pde_residual(orbit, 1.5, 256, 0.8)}),
                       1e-6);

        nlshom::PlaneWave pw2;
        pw2.a = 1.2;
        pw2.omega = 1.2;
        const auto orbit2 = nlshom::TwoPairOrbit::even(pw2, 0.0, 0.3);
        man.add_oracle("two_pair_pde_residual",
                       std::max(pde_residual(orbit2, -0.5, 256, 1.2),
                                pde_residual(orbit2, 0.4, 256, 1.2)),
                       1e-5);

        double it_gap = 0.0;
        for (std::size_t m = 0; m < 128; ++m) {
            const double x = 2.0 * pi * static_cast<double>(m) / 128.0;
            it_gap = std::max(it_gap, std::abs(orbit2.value(0.3, x) -
                                               orbit2.value_iterated(0.3, x)));
        }
        man.add_oracle("two_pair_iterated_gauge", it_gap, 1e-8);

        // Isospectrality under the evolution, started on the inbound segment
        // of the orbit where dt = 1e-4 meets the halving certificate.
        {
            const std::size_t n = 256;
            const auto q0 = orbit.snapshot(-2.0, n);
            nlshom::Params p = c.params;
            p.omega = 0.8;
            nlshom::EvolutionSpec spec;
            spec.dt = 1e-4;
            spec.t_end = 1.0;
            spec.record_stride = 10000;
            const auto res = nlshom::evolve(q0, nlshom::Equation::nls, p, spec);
            double drift = 0.0;
            for (int m = 0; m < 5; ++m) {
                const cd lambda(0.1 * m - 0.2, 0.25 + 0.05 * m);
                drift = std::max(drift,
                                 std::abs(nlshom::floquet_discriminant(res.final_state, lambda) -
                                          nlshom::floquet_discriminant(q0, lambda)));
            }
            man.add_oracle("isospectrality_drift", drift, 1e-6);
            man.add_oracle("evolution_halving_certificate", res.cert_halving, 1e-8);

            double mass_drift = 0.0;
            for (const auto& rec : res.records)
                mass_drift = std::max(mass_drift,
                                      std::abs(rec.mass - nlshom::field_mass(q0)));
            man.add_oracle("mass_drift", mass_drift, 1e-10);
        }

        // Gradient of the invariant vs finite differences at a generic point.
        {
            const std::size_t n = 64;
            const auto q = orbit.snapshot(0.3, n);
            const cd lambda(0.2, 0.1);
            const auto grad = nlshom::floquet_gradient(q, lambda);
            double scale = 0.0;
            for (const auto& z : grad.dq) scale = std::max(scale, std::abs(z));
            const double h = 1e-5;
            double worst = 0.0;
            for (std::size_t m : {std::size_t{5}, std::size_t{21}, std::size_t{48}}) {
                auto perturbed = [&](cd delta) {
                    std::vector<cd> v = q.values();
                    v[m] += delta;
                    return nlshom::floquet_discriminant(
                        nlshom::SpectralField::from_values(std::move(v)), lambda);
                };
                const cd d_re = (perturbed(cd(h, 0)) - perturbed(cd(-h, 0))) / (2.0 * h);
                const cd d_im = (perturbed(cd(0, h)) - perturbed(cd(0, -h))) / (2.0 * h);
                const double N = static_cast<double>(n);
                const cd fd_dq = 0.5 * N / (2.0 * pi) * (d_re - iu * d_im);
                worst = std::max(worst, std::abs(fd_dq - grad.dq[m]) / scale);
            }
            man.add_oracle("gradient_fd_relative", worst, 1e-4);
        }

        // Degenerate evaluator against the explicit vectors.
        {
            const std::size_t n = 128;
            const double t = 0.45;
            const auto q = orbit.snapshot(t, n);
            const auto grids = nlshom::one_pair_gauge_grids(orbit, t, n);
            const auto numeric = nlshom::floquet_gradient_degenerate(
                q, orbit.points().nu(), grids.plus, grids.minus, grids.wronskian_base,
                grids.extra_det);
            const auto closed = orbit.melnikov_vector(t, n);
            double scale = 0.0, worst = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                scale = std::max(scale, std::abs(closed.dq[m]));
                worst = std::max({worst, std::abs(numeric.dq[m] - closed.dq[m]),
                                  std::abs(numeric.dqbar[m] - closed.dqbar[m])});
            }
            man.add_oracle("degenerate_evaluator_gap", worst / scale, 1e-6);
        }

        // Two-pair surface closure and the existence-system conditioning.
        {
            const auto sp = nlshom::surface_point(1.2, 0.4, c.quadrature, false);
            man.add_oracle("surface_closure",
                           std::max({sp.closure_residual_1, sp.closure_residual_2,
                                     sp.closure_residual_d}),
                           1e-6);
            const auto ex = nlshom::existence_one_pair(
                0.8, nlshom::default_forcing_one_pair(0.8, c.quadrature), c.quadrature);
            man.add_oracle("existence_condition_number", ex.condition, 1e6);
        }

        // Short tracking run.
        {
            nlshom::Params p = c.params;
            nlshom::EvolutionSpec spec;
            spec.dt = 5e-4;
            spec.t_end = 0.0;
            spec.record_stride = 200;
            const auto tr = nlshom::tracking_experiment({1e-3}, p, 128, spec, 1.0);
            man.add_oracle("tracking_reference_identity", tr.reference_check, 1e-300);
        }
    }

    (void)dir;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homoclinic-orbit toolkit for the forced, damped cubic Schrodinger "
                 "equation on the periodic line"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON config (sections params/grid/quadrature/evolution)");
    app.add_option("--out", g.out_dir, "output directory (env NLS_HOMOCLINIC_OUT overrides)");
    app.add_option("--threads", g.threads, "worker threads for grid fan-out");

    auto* plane = app.add_subcommand("plane-portrait", "leading-order plane trajectories and nullclines");
    auto* fish = app.add_subcommand("fish", "singular level set of the reduced Hamiltonian");
    auto* spectrum = app.add_subcommand("spectrum", "linearization eigenvalues on the cos(kx) blocks");
    int spectrum_kmax = 8;
    spectrum->add_option("--kmax", spectrum_kmax, "largest wavenumber block");

    auto* nfscan = app.add_subcommand("normal-form-scan", "small-denominator scan and coefficient tables");
    std::string nf_range = "0.55:1.45:0.02";
    int nf_klmax = 6;
    nfscan->add_option("--omega", nf_range, "omega range lo:hi:step");
    nfscan->add_option("--klmax", nf_klmax, "largest |k|, |l| in the scan");

    auto* floquet = app.add_subcommand("floquet", "plane-wave Floquet discriminant over a lambda grid");
    double floquet_a = 0.0;
    floquet->add_option("--a", floquet_a, "plane-wave amplitude (default: configured amplitude)");

    auto* homoclinic = app.add_subcommand("homoclinic", "closed-form homoclinic orbit space-time data");
    HomoclinicOpts ho;
    homoclinic->add_option("--pairs", ho.pairs, "number of dressed double points (1 or 2)");
    homoclinic->add_flag("--even", ho.even, "even representative (vartheta pinned by theta0)");
    homoclinic->add_option("--a", ho.a, "plane-wave amplitude");
    homoclinic->add_option("--rho", ho.rho, "first Backlund parameter rho");
    homoclinic->add_option("--vartheta", ho.vartheta, "first Backlund parameter vartheta");
    homoclinic->add_option("--rho-hat", ho.rho_hat, "second Backlund parameter rho");
    homoclinic->add_option("--vartheta-hat", ho.vartheta_hat, "second Backlund parameter vartheta");
    homoclinic->add_option("--t0", ho.t0, "first output time");
    homoclinic->add_option("--t1", ho.t1, "last output time");
    homoclinic->add_option("--nt", ho.nt, "number of output times");

    auto* kappa = app.add_subcommand("melnikov-kappa", "one-pair measurement ratio kappa over omega");
    std::string kappa_range = "0.55:0.95:0.01";
    kappa->add_option("--omega", kappa_range, "omega range lo:hi:step");

    auto* surface = app.add_subcommand("melnikov-surface", "two-pair existence surface over (omega, delta-rho)");
    std::string surf_omega = "1.05:1.45:0.1";
    std::string surf_rho = "0:0.8:0.4";
    surface->add_option("--omega", surf_omega, "omega range lo:hi:step");
    surface->add_option("--delta-rho", surf_rho, "delta-rho range lo:hi:step");

    auto* second = app.add_subcommand("second-distance", "reduced Hamiltonian return distance");
    std::string second_range = "-3.141592653589793:3.141592653589793:0.03490658503988659";
    double second_shift = 0.0;
    second->add_option("--theta0", second_range, "initial phase range lo:hi:step");
    second->add_option("--shift", second_shift, "return phase shift (default: one-pair Delta gamma)");

    auto* evolve = app.add_subcommand("evolve", "split-step evolution with certificates");
    EvolveOpts eo;
    evolve->add_option("--equation", eo.equation, "nls or pnls");
    evolve->add_option("--init", eo.init, "plane, homoclinic-1, homoclinic-2 or file");
    evolve->add_option("--file", eo.file, "input field CSV when --init file");
    evolve->add_option("--dt", eo.dt, "time step");
    evolve->add_option("--t-end", eo.t_end, "final time");
    evolve->add_option("--epsilon", eo.epsilon, "perturbation size override");

    auto* track = app.add_subcommand("track", "shadowing distance versus epsilon");
    std::string track_eps = "1e-2,1e-3,1e-4";
    double track_window = 1.0;
    track->add_option("--epsilons", track_eps, "comma-separated epsilon list");
    track->add_option("--window-start", track_window, "start of the measurement window");

    auto* verify = app.add_subcommand("verify", "run the oracle suites");
    bool v_quick = false, v_full = false;
    verify->add_flag("--quick", v_quick, "sub-minute suite only (default)");
    verify->add_flag("--full", v_full, "add the slower dynamical checks");

    CLI11_PARSE(app, argc, argv);

    try {
        const nlshom::Config config =
            g.config_path.empty() ? nlshom::Config{} : nlshom::load_config(g.config_path);
        nlshom::validate(config.params);
        const fs::path dir = resolve_out_dir(g);

        std::string invocation;
        for (int j = 1; j < argc; ++j) {
            invocation += argv[j];
            invocation += '\n';
        }
        if (!g.config_path.empty()) {
            std::ifstream in(g.config_path);
            std::ostringstream ss;
            ss << in.rdbuf();
            invocation += ss.str();
        }

        const std::string name = app.get_subcommands().front()->get_name();
        Manifest man(name, config, invocation);

        int rc = 0;
        if (*plane) rc = cmd_plane_portrait(config, dir, man);
        else if (*fish) rc = cmd_fish(config, dir, man);
        else if (*spectrum) rc = cmd_spectrum(config, spectrum_kmax, dir, man);
        else if (*nfscan) rc = cmd_normal_form_scan(config, nf_range, nf_klmax, dir, man);
        else if (*floquet) rc = cmd_floquet(config, floquet_a > 0.0 ? floquet_a : config.params.amplitude, dir, man);
        else if (*homoclinic) rc = cmd_homoclinic(config, ho, dir, man);
        else if (*kappa) rc = cmd_melnikov_kappa(config, kappa_range, dir, g.threads, man);
        else if (*surface) rc = cmd_melnikov_surface(config, surf_omega, surf_rho, dir, g.threads, man);
        else if (*second) rc = cmd_second_distance(config, second_range, second_shift, dir, man);
        else if (*evolve) rc = cmd_evolve(config, eo, dir, man);
        else if (*track) rc = cmd_track(config, track_eps, track_window, dir, man);
        else if (*verify) rc = cmd_verify(config, v_full, dir, man);

        const bool all_pass = man.write(dir);
        if (rc != 0) return rc;
        return all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
