#pragma once

// Subcommand implementations for the glfock command line. Each command
// reads a RunConfig, writes a CSV or JSON table and returns an exit code:
// 0 pass, 1 assertion failure, 2 config error, 3 non-convergence.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "glfock/glfock.hpp"
#include "glfock/json_io.hpp"

namespace glfock::cli {

using ojson = nlohmann::ordered_json;

enum ExitCode : int { kPass = 0, kAssertion = 1, kConfig = 2, kNonConvergence = 3 };

/// A rectangular result with named columns, rendered as CSV or as a JSON
/// array of row objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<ojson>> rows;

    void add(std::vector<ojson> row) { rows.push_back(std::move(row)); }
};

inline std::string csv_cell(const ojson& v) {
    if (v.is_number_float()) return io::fmt(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return "";
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

inline ojson cell(double v) {
    if (std::isfinite(v)) return v;
    return io::fmt(v);
}

inline void render(const Table& t, const std::string& format, std::ostream& out) {
    if (format == "json") {
        ojson arr = ojson::array();
        for (const auto& r : t.rows) {
            ojson obj = ojson::object();
            for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = r[i];
            arr.push_back(obj);
        }
        out << arr.dump(2) << "\n";
        return;
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
        out << "\n";
    }
}

inline void emit(const Table& t, const io::RunConfig& cfg) {
    if (cfg.output.path.empty()) {
        render(t, cfg.output.format, std::cout);
        return;
    }
    std::ofstream f(cfg.output.path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file '" + cfg.output.path + "'");
    render(t, cfg.output.format, f);
}

/// Command-line overrides applied on top of the config file.
struct Overrides {
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
};

inline io::RunConfig load(const std::string& path, const Overrides& ov) {
    auto cfg = io::load_config(path);
    if (!ov.out.empty()) cfg.output.path = ov.out;
    if (!ov.format.empty()) {
        if (ov.format != "csv" && ov.format != "json") throw ConfigError("--format must be csv or json");
        cfg.output.format = ov.format;
    }
    if (ov.seed) cfg.seed = *ov.seed;
    return cfg;
}

inline double extra_number(const io::RunConfig& cfg, const char* key, double fallback) {
    if (!cfg.extra.contains(key)) return fallback;
    const auto& v = cfg.extra.at(key);
    if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
    return v.get<double>();
}

inline int extra_int(const io::RunConfig& cfg, const char* key, int fallback) {
    if (!cfg.extra.contains(key)) return fallback;
    const auto& v = cfg.extra.at(key);
    if (!v.is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
    return v.get<int>();
}

/// Runs fn, translating library exceptions to exit codes with a one-line
/// diagnostic on stderr.
template <class Fn>
int guarded(const char* name, Fn fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << name << ": config error: " << e.what() << "\n";
        return kConfig;
    } catch (const WeightVerificationError& e) {
        std::cerr << name << ": assertion failed: " << e.what() << "\n";
        return kAssertion;
    } catch (const ConvergenceError& e) {
        std::cerr << name << ": no convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const DivergenceError& e) {
        std::cerr << name << ": no convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const OverflowError& e) {
        std::cerr << name << ": no convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const Error& e) {
        // Domain, non-entire, normalization and signed-measure rejections all
        // mean the configuration asked for something the family cannot do.
        std::cerr << name << ": config error: " << e.what() << "\n";
        return kConfig;
    }
}

// ------------------------------------------------------------- phi-info

inline int phi_info(const io::RunConfig& cfg) {
    const auto& d = cfg.phi;
    Table t{{"field", "value"}, {}};
    t.add({"family", d.name()});
    t.add({"normalized", d.normalized()});
    t.add({"entire", d.entire()});
    for (int k = 0; k < 10; ++k) t.add({"phi_" + std::to_string(k), cell(phi_coeff(d, k))});
    if (d.entire()) {
        const auto od = order_degree_check(d, 200);
        t.add({"rho_hat", cell(od.rho_hat)});
        t.add({"sigma_hat", cell(od.sigma_hat)});
    }
    if (std::abs(d.log_coeff(0)) <= 1e-14) {
        if (d.entire()) {
            const auto psi = psi_pair(d);
            t.add({"psi1", cell(psi.psi1)});
            t.add({"psi2", cell(psi.psi2)});
        }
        const auto rb = radius_bounds(d);
        t.add({"R_L", cell(rb.R_L)});
        t.add({"R_U", cell(rb.R_U)});
        t.add({"R_U_flag", rb.flag});
    }
    emit(t, cfg);
    return kPass;
}

// ---------------------------------------------------------------- check

namespace detail {

inline TruncatedSeries random_series(Rng& rng, int degree) {
    auto f = TruncatedSeries::zero(degree);
    for (int k = 0; k <= degree; ++k) f.at(k) = uniform_box(rng);
    return f;
}

// One row per check: case label, residual, tolerance, pass flag.
struct CheckTable {
    Table table{{"case", "residual", "tolerance", "pass"}, {}};
    std::string first_failure;

    void add(const std::string& label, double residual, double tol) {
        const bool ok = residual <= tol;
        table.add({label, cell(residual), cell(tol), ok});
        if (!ok && first_failure.empty()) {
            first_failure = label + ": residual " + io::fmt(residual) + " > " + io::fmt(tol);
        }
    }
};

inline int finish(const char* suite, const Table& t, const std::string& first_failure, const io::RunConfig& cfg) {
    emit(t, cfg);
    if (first_failure.empty()) {
        std::cerr << "check " << suite << ": PASS\n";
        return kPass;
    }
    std::cerr << "check " << suite << ": FAIL, first failing assertion " << first_failure << "\n";
    return kAssertion;
}

inline int check_moments(const io::RunConfig& cfg) {
    const auto wk = cfg.weight_kernel();
    const int n_max = extra_int(cfg, "n_max", wk.form() == WeightForm::ExpWeight ? 15 : 8);
    const double tol = extra_number(cfg, "tol", 1e-8);
    if (n_max < 0) throw ConfigError("n_max must be non-negative");
    const auto rep = moment_check(cfg.phi, wk, n_max, tol, cfg.quadrature);
    Table t{{"n", "moment", "target", "residual"}, {}};
    std::string first;
    for (const auto& r : rep.rows) {
        t.add({r.n, cell(r.moment), cell(r.target), cell(r.residual)});
        if (first.empty() && !(r.residual <= tol)) {
            first = "n = " + std::to_string(r.n) + ": residual " + io::fmt(r.residual) + " > " + io::fmt(tol);
        }
    }
    if (first.empty() && rep.signed_measure) first = "weight is signed";
    return finish("moments", t, first, cfg);
}

inline int check_duality(const io::RunConfig& cfg) {
    const int trials = extra_int(cfg, "trials", 100);
    const int degree = extra_int(cfg, "degree", 20);
    const double tol = extra_number(cfg, "tol", 1e-12);
    Rng rng(cfg.seed);
    CheckTable ct;
    for (int i = 0; i < trials; ++i) {
        const auto f = random_series(rng, static_cast<int>(uniform01(rng) * (degree + 1)));
        const auto g = random_series(rng, static_cast<int>(uniform01(rng) * (degree + 1)));
        // Orthonormal-basis coordinates keep the residual scale-free.
        auto scale = [&](TruncatedSeries s) {
            for (int k = 0; k <= s.degree_cap(); ++k) s.at(k) *= orthonormal_basis_coeff(cfg.phi, k);
            return s;
        };
        ct.add("pair " + std::to_string(i), duality_check(cfg.phi, scale(f), scale(g)), tol);
    }
    return finish("duality", ct.table, ct.first_failure, cfg);
}

inline int check_bargmann(const io::RunConfig& cfg) {
    const int trials = extra_int(cfg, "trials", 20);
    const int degree = extra_int(cfg, "degree", 15);
    const double tol = extra_number(cfg, "tol", 1e-13);
    Rng rng(cfg.seed);
    CheckTable ct;
    auto random_coeffs = [&]() {
        HermiteCoeffs f(static_cast<std::size_t>(degree) + 1);
        for (auto& c : f) c = uniform_box(rng);
        return f;
    };
    for (int i = 0; i < trials; ++i) {
        const auto f = random_coeffs();
        const auto g = random_coeffs();
        const auto back = bargmann_inverse(cfg.phi, bargmann_forward(cfg.phi, f));
        double rt = 0.0;
        for (std::size_t n = 0; n < f.size(); ++n) rt = std::max(rt, std::abs(back[n] - f[n]));
        // One rounding in each direction.
        ct.add("roundtrip " + std::to_string(i), rt, 4 * std::numeric_limits<double>::epsilon());
        const double unit = std::abs(inner_product_l2(f, g) -
                                     inner_product_l2phi(cfg.phi, bargmann_forward(cfg.phi, f),
                                                         bargmann_forward(cfg.phi, g)));
        const double scale = std::sqrt(inner_product_l2(f, f).real() * inner_product_l2(g, g).real());
        ct.add("unitarity " + std::to_string(i), unit, tol * (1.0 + scale));
        const auto ir = intertwine_residuals(cfg.phi, f);
        ct.add("lower " + std::to_string(i), ir.r_lower, tol);
        ct.add("raise " + std::to_string(i), ir.r_raise, tol);
    }
    return finish("bargmann", ct.table, ct.first_failure, cfg);
}

inline int check_weierstrass(const io::RunConfig& cfg) {
    const int n = extra_int(cfg, "grid_n", 41);
    const int N = cfg.truncation.series_N;
    CheckTable ct;
    double sup = 0.0;
    int violations = 0;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const cplx z(-1.0 + 2.0 * i / (n - 1), -1.0 + 2.0 * j / (n - 1));
            if (std::abs(z) > 1.0 + 1e-12) continue;
            const double lhs = std::abs(1.0 - weierstrass_factor(cfg.phi, z, N));
            const double rhs = std::abs(omega(cfg.phi, z, N));
            sup = std::max(sup, rhs);
            const double excess = lhs - rhs * (1.0 + 1e-12);
            if (excess > 0.0) ++violations;
            worst = std::max(worst, excess);
        }
    }
    ct.add("|1-E| <= |Omega| on grid", worst, 0.0);
    const double bound = omega_bound(cfg.phi);
    ct.add("sup|Omega| - omega_bound", std::max(0.0, sup - bound), 0.0);
    return finish("weierstrass", ct.table, ct.first_failure, cfg);
}

inline int check_reproduce(const io::RunConfig& cfg) {
    const int trials = extra_int(cfg, "trials", 20);
    const int points = extra_int(cfg, "points", 10);
    const int degree = extra_int(cfg, "degree", 10);
    const double tol = extra_number(cfg, "tol", 1e-6);
    const auto vw = verify_weight(cfg.weight_kernel(), 8, 1e-6, cfg.quadrature);
    Rng rng(cfg.seed);
    CheckTable ct;
    for (int i = 0; i < trials; ++i) {
        const auto f = random_series(rng, degree);
        for (int p = 0; p < points; ++p) {
            // Uniform in the disk of radius 1.5.
            const cplx z = std::polar(1.5 * std::sqrt(uniform01(rng)), 2.0 * std::numbers::pi * uniform01(rng));
            const double r = std::abs(reproduce(vw, f, z, cfg.quadrature) - f.evaluate(z));
            ct.add("poly " + std::to_string(i) + " point " + std::to_string(p), r, tol);
        }
    }
    return finish("reproduce", ct.table, ct.first_failure, cfg);
}

}  // namespace detail

inline int check(const io::RunConfig& cfg, const std::string& suite) {
    if (suite == "moments") return detail::check_moments(cfg);
    if (suite == "duality") return detail::check_duality(cfg);
    if (suite == "bargmann") return detail::check_bargmann(cfg);
    if (suite == "weierstrass") return detail::check_weierstrass(cfg);
    if (suite == "reproduce") return detail::check_reproduce(cfg);
    throw ConfigError("--suite must be one of moments, duality, bargmann, weierstrass, reproduce");
}

// --------------------------------------------------------- frames-sweep

struct SweepArgs {
    double s_min = 0.3;
    double s_max = 1.5;
    int steps = 13;
    int window_n = 0;
};

inline std::vector<double> sweep_values(const SweepArgs& a) {
    if (!(a.s_min > 0.0) || !(a.s_min < a.s_max)) throw ConfigError("frames-sweep needs 0 < s-min < s-max");
    if (a.steps < 0) throw ConfigError("--steps must be non-negative");
    if (a.window_n < 0) throw ConfigError("--window-n must be non-negative");
    std::vector<double> s;
    for (int i = 0; i < a.steps; ++i) {
        s.push_back(a.steps == 1 ? a.s_min : a.s_min + (a.s_max - a.s_min) * i / (a.steps - 1));
    }
    return s;
}

inline int frames_sweep(const io::RunConfig& cfg, const SweepArgs& a) {
    const auto s = sweep_values(a);
    Table t{{"s", "A", "B", "condition", "basis_dim", "stability", "status"}, {}};
    if (!s.empty()) {
        const auto vw = verify_weight(cfg.weight_kernel(), 8, 1e-6, cfg.quadrature);
        const auto reps = frame_sweep(vw, a.window_n, s, cfg.truncation.basis_N, cfg.truncation.lattice_M);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto& r = reps[i];
            t.add({cell(s[i]), cell(r.A), cell(r.B), cell(r.condition), r.basis_dim, cell(r.stability), r.status});
        }
    }
    emit(t, cfg);
    return kPass;
}

// ---------------------------------------------------- weierstrass-table

inline int weierstrass_table(const io::RunConfig& cfg) {
    const int n = extra_int(cfg, "grid_n", 41);
    const double radius = extra_number(cfg, "radius", 1.0);
    if (n < 2) throw ConfigError("grid_n must be at least 2");
    if (!(radius > 0.0)) throw ConfigError("radius must be positive");
    const int N = cfg.truncation.series_N;
    psi_pair(cfg.phi);  // rejects phi_0 != 1 up front
    Table t{{"z_re", "z_im", "lhs", "rhs", "ratio"}, {}};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const cplx z(radius * (-1.0 + 2.0 * i / (n - 1)), radius * (-1.0 + 2.0 * j / (n - 1)));
            if (std::abs(z) > radius * (1.0 + 1e-12)) continue;
            const double lhs = std::abs(1.0 - weierstrass_factor(cfg.phi, z, N));
            const double rhs = std::abs(omega(cfg.phi, z, N));
            const double ratio = rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
            t.add({cell(z.real()), cell(z.imag()), cell(lhs), cell(rhs), cell(ratio)});
        }
    }
    emit(t, cfg);
    return kPass;
}

// -------------------------------------------------------------- density

inline int density_cmd(const io::RunConfig& cfg) {
    std::vector<cplx> pts;
    if (cfg.extra.contains("points")) {
        pts = io::points_from_json(cfg.extra.at("points"));
    } else {
        const double lambda = extra_number(cfg, "lambda", 1.0);
        const double Q = extra_number(cfg, "perturbation", 0.0);
        if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
        const LatticeSpec lat{lambda, cfg.truncation.lattice_M};
        pts = Q > 0.0 ? PerturbedLattice::random(lat, Q, cfg.seed).points() : lattice_points(lat);
    }
    std::vector<double> radii{1.0, 2.0, 4.0};
    if (cfg.extra.contains("radii")) {
        const auto& r = cfg.extra.at("radii");
        if (!r.is_array()) throw ConfigError("radii must be an array of numbers");
        radii.clear();
        for (const auto& v : r) {
            if (!v.is_number()) throw ConfigError("radii must be an array of numbers");
            radii.push_back(v.get<double>());
        }
    }
    DensityOptions opt;
    if (cfg.extra.contains("density_norm")) {
        const auto& v = cfg.extra.at("density_norm");
        const std::string s = v.is_string() ? v.get<std::string>() : "";
        if (s == "two_pi") opt.norm = DensityNorm::TwoPi;
        else if (s == "lebesgue") opt.norm = DensityNorm::Lebesgue;
        else throw ConfigError("density_norm must be two_pi or lebesgue");
    }
    opt.shifts = extra_int(cfg, "shifts", opt.shifts);
    opt.margin = extra_number(cfg, "margin", opt.margin);
    const auto rep = density(pts, radii, opt);
    const double two_pi = 2.0 * std::numbers::pi;
    Table t{{"r", "n_min", "n_max", "lower", "upper"}, {}};
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        const double denom = opt.norm == DensityNorm::TwoPi ? two_pi * r * r : r * r;
        t.add({cell(r), rep.counts[i].first, rep.counts[i].second, cell(rep.counts[i].first / denom),
               cell(rep.counts[i].second / denom)});
    }
    emit(t, cfg);
    std::cerr << "density: D- = " << io::fmt(rep.d_minus) << ", D+ = " << io::fmt(rep.d_plus) << "\n";
    return kPass;
}

// --------------------------------------------------- bargmann-roundtrip

/// Samples the Hermite function h_k, transforms it and maps it back; the
/// recovered coefficients must be delta_k within tol.
inline int bargmann_roundtrip(const io::RunConfig& cfg) {
    const int k = extra_int(cfg, "hermite_index", 3);
    const int N = cfg.truncation.basis_N;
    const double tol = extra_number(cfg, "tol", 1e-8);
    if (k < 0 || k > N) throw ConfigError("hermite_index must lie in [0, truncation.basis_N]");
    const auto F = bargmann_sample(
        cfg.phi,
        [k](double x) {
            std::vector<double> h;
            quad::detail::hermite_functions(k, x, h);
            return h[static_cast<std::size_t>(k)];
        },
        N);
    const auto back = bargmann_inverse(cfg.phi, F);
    Table t{{"n", "series_re", "series_im", "coeff_re", "coeff_im", "error"}, {}};
    double worst = 0.0;
    for (int n = 0; n <= N; ++n) {
        const cplx c = back[static_cast<std::size_t>(n)];
        const double err = std::abs(c - (n == k ? 1.0 : 0.0));
        worst = std::max(worst, err);
        t.add({n, cell(F[n].real()), cell(F[n].imag()), cell(c.real()), cell(c.imag()), cell(err)});
    }
    emit(t, cfg);
    if (worst > tol) {
        std::cerr << "bargmann-roundtrip: FAIL, max error " << io::fmt(worst) << " > " << io::fmt(tol) << "\n";
        return kAssertion;
    }
    return kPass;
}

}  // namespace glfock::cli
