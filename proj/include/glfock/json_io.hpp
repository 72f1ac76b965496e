#pragma once

// JSON and CSV plumbing: descriptor (de)serialization, run configuration,
// and number formatting that round-trips doubles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "glfock/errors.hpp"
#include "glfock/fock_space.hpp"
#include "glfock/phi_descriptor.hpp"

namespace glfock::io {

using json = nlohmann::json;

/// Shortest "%.17g" rendering; non-finite values print as inf / -inf / nan.
inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// JSON number, or a string for non-finite values (JSON has no inf/nan).
inline json num(double v) {
    if (std::isfinite(v)) return v;
    return fmt(v);
}

namespace detail {

inline double get_param(const json& params, const char* key) {
    if (!params.contains(key)) throw ConfigError(std::string("phi.params.") + key + " is required");
    const auto& v = params.at(key);
    if (!v.is_number()) throw ConfigError(std::string("phi.params.") + key + " must be a number");
    return v.get<double>();
}

}  // namespace detail

inline json to_json(const PhiDescriptor& d) {
    json params = json::object();
    switch (d.family()) {
        case Family::MittagLeffler:
            params["rho"] = d.ml_rho();
            params["mu"] = d.ml_mu();
            break;
        case Family::StretchedGamma:
            params["a"] = d.sg_a();
            params["b"] = d.sg_b();
            break;
        case Family::GammaDeriv:
            params["n"] = d.deriv_order();
            break;
        case Family::DunklRankOne:
            params["kappa"] = d.kappa();
            break;
        default:
            break;
    }
    return json{{"family", d.name()}, {"params", params}, {"normalized", d.normalized()}};
}

/// {"family": ..., "params": {...}, "normalized": bool}; errors name the field.
inline PhiDescriptor descriptor_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("phi must be an object");
    if (!j.contains("family") || !j.at("family").is_string()) throw ConfigError("phi.family must be a string");
    const auto fam = j.at("family").get<std::string>();
    const json params = j.contains("params") ? j.at("params") : json::object();
    if (!params.is_object()) throw ConfigError("phi.params must be an object");
    bool normalized = false;
    if (j.contains("normalized")) {
        if (!j.at("normalized").is_boolean()) throw ConfigError("phi.normalized must be a boolean");
        normalized = j.at("normalized").get<bool>();
    }
    try {
        if (fam == "Exponential") return PhiDescriptor::exponential(normalized);
        if (fam == "MittagLeffler")
            return PhiDescriptor::mittag_leffler(detail::get_param(params, "rho"), detail::get_param(params, "mu"),
                                                 normalized);
        if (fam == "StretchedGamma")
            return PhiDescriptor::stretched_gamma(detail::get_param(params, "a"), detail::get_param(params, "b"),
                                                  normalized);
        if (fam == "GammaDeriv") {
            const double n = detail::get_param(params, "n");
            if (n < 1 || n != std::floor(n)) throw ConfigError("phi.params.n must be a positive integer");
            return PhiDescriptor::gamma_deriv(static_cast<unsigned>(n), normalized);
        }
        if (fam == "DunklRankOne") return PhiDescriptor::dunkl_rank_one(detail::get_param(params, "kappa"), normalized);
        if (fam == "BackwardShift") return PhiDescriptor::backward_shift();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("phi.params: ") + e.what());
    }
    throw ConfigError("phi.family: unknown family '" + fam + "'");
}

inline WeightForm weight_form_from_string(const std::string& s) {
    if (s == "ExpWeight") return WeightForm::ExpWeight;
    if (s == "MLWeight") return WeightForm::MLWeight;
    if (s == "MLLiteral") return WeightForm::MLLiteral;
    if (s == "StretchedExp") return WeightForm::StretchedExp;
    if (s == "LogWeight") return WeightForm::LogWeight;
    throw ConfigError("weight: unknown form '" + s + "'");
}

struct Truncation {
    int series_N = 60;
    int lattice_M = 10;
    int basis_N = 12;
};

struct OutputSpec {
    std::string path;       // empty = stdout
    std::string format = "csv";
};

struct RunConfig {
    PhiDescriptor phi = PhiDescriptor::exponential();
    std::string weight = "registered";  // form tag, or "registered" for the family's own
    QuadratureScheme quadrature;
    Truncation truncation;
    std::uint64_t seed = 42;
    OutputSpec output;
    json extra = json::object();  // command-specific settings

    /// The weight kernel the config names, bound to phi.
    WeightKernel weight_kernel() const {
        if (weight == "registered") return WeightKernel::registered_for(phi);
        const auto form = weight_form_from_string(weight);
        switch (form) {
            case WeightForm::ExpWeight: return {phi, form};
            case WeightForm::MLWeight:
            case WeightForm::MLLiteral:
                return {phi, form, phi.ml_rho(), phi.ml_mu()};
            case WeightForm::StretchedExp: return {phi, form, phi.sg_a(), phi.sg_b()};
            case WeightForm::LogWeight: return {phi, form, static_cast<double>(phi.deriv_order())};
        }
        throw ConfigError("weight: unsupported form");
    }
};

namespace detail {

inline int positive_int(const json& obj, const char* key, int fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw ConfigError(where + "." + key + " must be a positive integer");
    }
    return static_cast<int>(v.get<long long>());
}

}  // namespace detail

inline RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be an object");
    RunConfig cfg;
    if (!j.contains("phi")) throw ConfigError("phi is required");
    cfg.phi = descriptor_from_json(j.at("phi"));
    if (j.contains("weight")) {
        const auto& w = j.at("weight");
        if (w.is_string()) {
            cfg.weight = w.get<std::string>();
        } else if (w.is_object() && w.contains("form") && w.at("form").is_string()) {
            cfg.weight = w.at("form").get<std::string>();
        } else {
            throw ConfigError("weight must be a form name string or {\"form\": name}");
        }
        if (cfg.weight != "registered") weight_form_from_string(cfg.weight);
    }
    if (j.contains("quadrature")) {
        const auto& q = j.at("quadrature");
        if (!q.is_object()) throw ConfigError("quadrature must be an object");
        if (q.contains("radial")) {
            if (!q.at("radial").is_string()) throw ConfigError("quadrature.radial must be a string");
            const auto r = q.at("radial").get<std::string>();
            if (r == "GaussLaguerre") cfg.quadrature.radial = RadialRule::GaussLaguerre;
            else if (r == "AdaptiveTail") cfg.quadrature.radial = RadialRule::AdaptiveTail;
            else throw ConfigError("quadrature.radial must be GaussLaguerre or AdaptiveTail");
        }
        cfg.quadrature.radial_nodes = detail::positive_int(q, "nodes", cfg.quadrature.radial_nodes, "quadrature");
        if (q.contains("angular_nodes")) {
            const auto& a = q.at("angular_nodes");
            if (!a.is_number_integer() || a.get<long long>() < 0) {
                throw ConfigError("quadrature.angular_nodes must be a non-negative integer");
            }
            cfg.quadrature.angular_nodes = static_cast<int>(a.get<long long>());
        }
        if (q.contains("cut")) {
            if (!q.at("cut").is_number() || q.at("cut").get<double>() < 0) throw ConfigError("quadrature.cut must be >= 0");
            cfg.quadrature.cut = q.at("cut").get<double>();
        }
        if (q.contains("tol")) {
            if (!q.at("tol").is_number() || !(q.at("tol").get<double>() > 0)) throw ConfigError("quadrature.tol must be > 0");
            cfg.quadrature.tol = q.at("tol").get<double>();
        }
    }
    if (j.contains("truncation")) {
        const auto& t = j.at("truncation");
        if (!t.is_object()) throw ConfigError("truncation must be an object");
        cfg.truncation.series_N = detail::positive_int(t, "series_N", cfg.truncation.series_N, "truncation");
        cfg.truncation.lattice_M = detail::positive_int(t, "lattice_M", cfg.truncation.lattice_M, "truncation");
        cfg.truncation.basis_N = detail::positive_int(t, "basis_N", cfg.truncation.basis_N, "truncation");
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        if (!o.is_object()) throw ConfigError("output must be an object");
        if (o.contains("path")) {
            if (!o.at("path").is_string()) throw ConfigError("output.path must be a string");
            cfg.output.path = o.at("path").get<std::string>();
        }
        if (o.contains("format")) {
            if (!o.at("format").is_string()) throw ConfigError("output.format must be a string");
            cfg.output.format = o.at("format").get<std::string>();
        }
        if (cfg.output.format != "csv" && cfg.output.format != "json") {
            throw ConfigError("output.format must be csv or json");
        }
    }
    for (const auto& [k, v] : j.items()) {
        if (k != "phi" && k != "weight" && k != "quadrature" && k != "truncation" && k != "seed" && k != "output") {
            cfg.extra[k] = v;
        }
    }
    return cfg;
}

/// Parses a config file; JSON syntax errors report the byte offset and the
/// line they fall on.
inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what());
    }
    return config_from_json(j);
}

/// Point sets as JSON arrays of [re, im] pairs.
inline std::vector<std::complex<double>> points_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("points must be an array of [re, im] pairs");
    std::vector<std::complex<double>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& p = j[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw ConfigError("points[" + std::to_string(i) + "] must be [re, im]");
        }
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return out;
}

inline json points_to_json(const std::vector<std::complex<double>>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back({p.real(), p.imag()});
    return arr;
}

inline json to_json(const MomentReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json row{{"n", r.n}, {"moment", num(r.moment)}, {"target", num(r.target)}, {"residual", num(r.residual)}};
        if (!r.note.empty()) row["note"] = r.note;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace glfock::io
