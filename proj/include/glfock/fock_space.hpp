#pragma once

// Weight kernels, their moment verification, and the l2_phi / Fock inner
// products with the reproducing kernel built on top.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "glfock/errors.hpp"
#include "glfock/gl_core.hpp"
#include "glfock/phi_descriptor.hpp"
#include "glfock/quadrature.hpp"
#include "glfock/special_functions.hpp"

namespace glfock {

enum class WeightForm { ExpWeight, MLWeight, MLLiteral, StretchedExp, LogWeight };

inline const char* weight_form_name(WeightForm f) {
    switch (f) {
        case WeightForm::ExpWeight: return "ExpWeight";
        case WeightForm::MLWeight: return "MLWeight";
        case WeightForm::MLLiteral: return "MLLiteral";
        case WeightForm::StretchedExp: return "StretchedExp";
        case WeightForm::LogWeight: return "LogWeight";
    }
    return "?";
}

/// Radial weight x -> K(-x) on x >= 0, so that the planar measure
/// (1/pi) K(-|z|^2) dx dy has radial moments int x^n K(-x) dx.
///
///   ExpWeight        e^{-x}
///   MLWeight(r, m)   r x^{r m - 1} e^{-x^r}   (moments Gamma(m + n/r))
///   MLLiteral(r, m)  E_{1/r, m}(-x)           (divergent moments for r > 1)
///   StretchedExp(a,b) e^{-a x^b}
///   LogWeight(n)     2^{1-n} e^{-x} ln^n x    (2 e^{-|z|^2} ln^n |z|, signed for odd n)
///
/// With a normalized descriptor the weight is multiplied by the raw phi_0,
/// which keeps the moments equal to 1/phi_n of the normalized coefficients.
class WeightKernel {
public:
    WeightKernel(PhiDescriptor desc, WeightForm form, double p1 = 0.0, double p2 = 0.0)
        : desc_(std::move(desc)), form_(form), p1_(p1), p2_(p2) {
        if (!desc_.entire()) throw NonEntireError(std::string(desc_.name()) + " is not entire: no weight kernel applies");
        switch (form_) {
            case WeightForm::MLWeight:
            case WeightForm::MLLiteral:
            case WeightForm::StretchedExp:
                if (!(p1_ > 0.0) || !(p2_ > 0.0)) throw DomainError("weight parameters must be positive");
                break;
            case WeightForm::LogWeight:
                if (p1_ < 1.0 || p1_ != std::floor(p1_)) throw DomainError("LogWeight order must be a positive integer");
                break;
            case WeightForm::ExpWeight:
                break;
        }
        scale_ = desc_.normalized() ? std::exp(desc_.log_phi0_raw()) : 1.0;
    }

    /// The weight registered for a family (ExpWeight for Exponential, etc.).
    static WeightKernel registered_for(const PhiDescriptor& d) {
        switch (d.family()) {
            case Family::Exponential: return {d, WeightForm::ExpWeight};
            case Family::MittagLeffler: return {d, WeightForm::MLWeight, d.ml_rho(), d.ml_mu()};
            case Family::StretchedGamma: return {d, WeightForm::StretchedExp, d.sg_a(), d.sg_b()};
            case Family::GammaDeriv: return {d, WeightForm::LogWeight, static_cast<double>(d.deriv_order())};
            case Family::BackwardShift:
                throw NonEntireError("BackwardShift is not entire: no weight kernel applies");
            default:
                throw DomainError(std::string("no weight kernel is registered for ") + d.name());
        }
    }

    const PhiDescriptor& desc() const { return desc_; }
    WeightForm form() const { return form_; }
    double param1() const { return p1_; }
    double param2() const { return p2_; }

    /// False where the kernel can go negative (odd-order LogWeight on (0,1)).
    bool pointwise_nonnegative() const {
        return !(form_ == WeightForm::LogWeight && static_cast<int>(p1_) % 2 == 1);
    }

    /// Where K(-x) >= 0, in words.
    std::string positivity_domain() const {
        return pointwise_nonnegative() ? "x >= 0" : "x >= 1 (negative on 0 < x < 1)";
    }

    /// K(-x).
    double operator()(double x) const { return scale_ * raw(x); }

    /// ln K(-x) for nonnegative kernels where it is cheaper and safer than
    /// the value itself; -inf where the kernel vanishes.
    double log_value(double x) const {
        switch (form_) {
            case WeightForm::ExpWeight:
                return std::log(scale_) - x;
            case WeightForm::MLWeight: {
                if (x == 0.0) return std::log((*this)(0.0));
                const double r = p1_, m = p2_;
                return std::log(scale_ * r) + (r * m - 1.0) * std::log(x) - std::pow(x, r);
            }
            case WeightForm::StretchedExp:
                return std::log(scale_) - p1_ * std::pow(x, p2_);
            default:
                return std::log((*this)(x));
        }
    }

private:
    double raw(double x) const {
        switch (form_) {
            case WeightForm::ExpWeight:
                return std::exp(-x);
            case WeightForm::MLWeight: {
                const double r = p1_, m = p2_;
                const double e = r * m - 1.0;
                if (x == 0.0) return e == 0.0 ? r : (e > 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
                return r * std::exp(e * std::log(x) - std::pow(x, r));
            }
            case WeightForm::MLLiteral:
                return mittag_leffler(p1_, p2_, cplx(-x, 0.0)).real();
            case WeightForm::StretchedExp:
                return std::exp(-p1_ * std::pow(x, p2_));
            case WeightForm::LogWeight: {
                if (x == 0.0) return 0.0;
                const int n = static_cast<int>(p1_);
                return std::pow(2.0, 1 - n) * std::exp(-x) * std::pow(std::log(x), n);
            }
        }
        return 0.0;
    }

    PhiDescriptor desc_;
    WeightForm form_;
    double p1_ = 0.0;
    double p2_ = 0.0;
    double scale_ = 1.0;
};

enum class RadialRule { GaussLaguerre, AdaptiveTail };

/// How planar integrals are discretized: uniform angular nodes times a
/// radial rule in x = r^2. angular_nodes = 0 picks the minimum exact count.
struct QuadratureScheme {
    RadialRule radial = RadialRule::AdaptiveTail;
    int radial_nodes = 100;   // Gauss-Laguerre nodes, or segment budget / 40 for AdaptiveTail
    double cut = 0.0;         // AdaptiveTail split point; 0 = automatic
    int angular_nodes = 0;
    double tol = 1e-12;       // relative tolerance of the adaptive rule

    static QuadratureScheme gauss_laguerre(int nodes) {
        QuadratureScheme q;
        q.radial = RadialRule::GaussLaguerre;
        q.radial_nodes = nodes;
        return q;
    }
};

namespace detail {

/// int_0^inf h(x) dx with the configured radial rule; `peak` hints where
/// the integrand lives. `abs_tol` covers integrals that cancel to near zero.
template <class H>
auto radial_integral(H h, const QuadratureScheme& q, double peak, double abs_tol = 0.0) {
    using T = std::decay_t<std::invoke_result_t<H&, double>>;
    if (q.radial == RadialRule::GaussLaguerre) {
        const auto rule = quad::gauss_laguerre(q.radial_nodes);
        T acc{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            acc += h(rule.nodes[i]) * rule.scaled_weights[i];
        }
        return acc;
    }
    const int budget = std::max(40 * q.radial_nodes, 400);
    const double cut = q.cut > 0.0 ? q.cut : std::max(4.0, 2.0 * peak + 4.0);
    T total = quad::integrate(h, 0.0, cut, abs_tol, q.tol, budget).value;
    // The tail only has to be accurate relative to the whole integral.
    const double tail_tol = std::max(abs_tol, q.tol * quad::detail::magnitude(total));
    total += quad::integrate_to_infinity(h, cut, tail_tol, q.tol, budget).value;
    return total;
}

}  // namespace detail

/// int_0^inf x^n K(-x) dx.
inline double moment(const WeightKernel& wk, int n, const QuadratureScheme& q = {}) {
    if (n < 0) throw DomainError("moment: n must be non-negative");
    const double dn = n;
    auto h = [&](double x) {
        if (x == 0.0) return n == 0 ? wk(0.0) : 0.0;
        return std::pow(x, dn) * wk(x);
    };
    double peak = dn;
    if (wk.form() == WeightForm::MLWeight || wk.form() == WeightForm::StretchedExp) {
        const double b = wk.form() == WeightForm::MLWeight ? wk.param1() : wk.param2();
        peak = std::pow(std::max(dn, 1.0), 1.0 / b);
    }
    return detail::radial_integral(h, q, peak);
}

struct MomentRow {
    int n = 0;
    double moment = 0.0;
    double target = 0.0;   // 1 / phi_n
    double residual = 0.0; // |moment * phi_n - 1|
    std::string note;      // set when the quadrature itself failed
};

struct MomentReport {
    std::vector<MomentRow> rows;
    std::vector<int> failing;
    bool signed_measure = false;
    bool passed() const { return failing.empty(); }
};

/// Checks |moment(n) phi_n - 1| <= tol for n = 0..n_max; quadrature
/// failures count as violations of that n.
inline MomentReport moment_check(const PhiDescriptor& d, const WeightKernel& wk, int n_max, double tol,
                                 const QuadratureScheme& q = {}) {
    if (!d.entire()) throw NonEntireError(std::string("moment_check: ") + d.name() + " is not entire");
    MomentReport rep;
    rep.signed_measure = !wk.pointwise_nonnegative();
    for (int n = 0; n <= n_max; ++n) {
        MomentRow row;
        row.n = n;
        row.target = std::exp(-d.log_coeff(n));
        try {
            row.moment = moment(wk, n, q);
            row.residual = std::abs(row.moment * std::exp(d.log_coeff(n)) - 1.0);
            if (!std::isfinite(row.residual)) row.residual = std::numeric_limits<double>::infinity();
        } catch (const Error& e) {
            row.moment = std::numeric_limits<double>::quiet_NaN();
            row.residual = std::numeric_limits<double>::infinity();
            row.note = e.what();
        }
        if (!(row.residual <= tol)) rep.failing.push_back(n);
        rep.rows.push_back(row);
    }
    return rep;
}

/// A (phi, weight) pair that passed moment_check. Fock-side integrals only
/// accept this type.
class VerifiedWeight {
public:
    const WeightKernel& kernel() const { return wk_; }
    const PhiDescriptor& desc() const { return wk_.desc(); }
    const MomentReport& report() const { return report_; }
    double operator()(double x) const { return wk_(x); }

private:
    VerifiedWeight(WeightKernel wk, MomentReport rep) : wk_(std::move(wk)), report_(std::move(rep)) {}
    friend VerifiedWeight verify_weight(const WeightKernel&, int, double, const QuadratureScheme&);
    WeightKernel wk_;
    MomentReport report_;
};

inline VerifiedWeight verify_weight(const WeightKernel& wk, int n_max = 8, double tol = 1e-6,
                                    const QuadratureScheme& q = {}) {
    auto rep = moment_check(wk.desc(), wk, n_max, tol, q);
    if (!rep.passed()) {
        std::string msg = std::string("weight ") + weight_form_name(wk.form()) + " does not match " +
                          wk.desc().name() + ": moment check fails at n =";
        for (int n : rep.failing) msg += " " + std::to_string(n);
        throw WeightVerificationError(msg);
    }
    return VerifiedWeight(wk, std::move(rep));
}

/// sum_{n=1}^N phi_n^{-1/(2n)}.
inline double carleman_partial(const PhiDescriptor& d, int N) {
    double s = 0.0;
    for (int n = 1; n <= N; ++n) s += std::exp(-d.log_coeff(n) / (2.0 * n));
    return s;
}

/// <f, g> = sum conj(f_k) g_k / phi_k (conjugate-linear in f).
inline cplx inner_product_l2phi(const PhiDescriptor& d, const TruncatedSeries& f, const TruncatedSeries& g) {
    cplx acc = 0.0;
    const int n = std::min(f.degree_cap(), g.degree_cap());
    for (int k = 0; k <= n; ++k) {
        if (f[k] == cplx(0.0) || g[k] == cplx(0.0)) continue;
        acc += std::conj(f[k]) * g[k] * std::exp(-d.log_coeff(k));
    }
    return acc;
}

inline double norm_l2phi(const PhiDescriptor& d, const TruncatedSeries& f) {
    return std::sqrt(inner_product_l2phi(d, f, f).real());
}

/// (1/pi) int conj(f) g K(-|z|^2) dx dy in polar form: the angular average
/// over uniform nodes (exact for the trigonometric polynomials that arise)
/// times a radial integral in x = r^2.
inline cplx inner_product_fock(const VerifiedWeight& vw, const TruncatedSeries& f, const TruncatedSeries& g,
                               const QuadratureScheme& q = {}) {
    if (f.empty() || g.empty()) return 0.0;
    const int maxdeg = std::max(f.degree_cap(), g.degree_cap());
    const int needed = 2 * maxdeg + 2;
    int m = q.angular_nodes == 0 ? needed : q.angular_nodes;
    if (m < needed) {
        throw ConfigError("inner_product_fock: angular_nodes = " + std::to_string(m) + " is below " +
                          std::to_string(needed) + " for degree " + std::to_string(maxdeg));
    }
    std::vector<cplx> dirs(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) dirs[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * j / m);
    auto h = [&](double x) -> cplx {
        const double w = vw(x);
        if (w == 0.0) return 0.0;
        const double r = std::sqrt(x);
        cplx acc = 0.0;
        for (const auto& u : dirs) acc += std::conj(f.evaluate(r * u)) * g.evaluate(r * u);
        return acc * (w / m);
    };
    double peak = maxdeg;
    const auto& wk = vw.kernel();
    if (wk.form() == WeightForm::MLWeight) peak = std::pow(std::max(peak, 1.0), 1.0 / wk.param1());
    if (wk.form() == WeightForm::StretchedExp) peak = std::pow(std::max(peak, 1.0), 1.0 / wk.param2());
    // |<f, g>| <= |f| |g|, so an inner product that cancels to zero only
    // needs accuracy relative to the norms.
    const double scale = norm_l2phi(vw.desc(), f) * norm_l2phi(vw.desc(), g);
    return detail::radial_integral(h, q, peak, q.tol * scale);
}

/// sqrt(phi_n), the coefficient of the orthonormal basis e_n = sqrt(phi_n) z^n.
inline double orthonormal_basis_coeff(const PhiDescriptor& d, int n) { return std::exp(0.5 * d.log_coeff(n)); }

inline TruncatedSeries basis_element(const PhiDescriptor& d, int n) {
    return TruncatedSeries::monomial(n, orthonormal_basis_coeff(d, n));
}

/// k_phi(z, w) = phi(conj(z) w), truncated at degree N.
inline cplx discrete_kernel(const PhiDescriptor& d, cplx z, cplx w, int N) {
    return phi_eval(d, std::conj(z) * w, N).value;
}

/// The kernel k_phi(z, .) as a series in w.
inline TruncatedSeries kernel_series(const PhiDescriptor& d, cplx z, int N) {
    auto out = TruncatedSeries::zero(N);
    const cplx zb = std::conj(z);
    cplx p = 1.0;
    for (int n = 0; n <= N; ++n) {
        out.at(n) = std::exp(d.log_coeff(n)) * p;
        p *= zb;
    }
    return out;
}

struct KernelBoundReport {
    bool first_ok = true;    // sum phi_n |z|^{2n} <= phi(r^2)
    bool second_checked = false;
    bool second_ok = true;   // phi(r^2) <= e^{sigma r^{2 rho}}
    double phi_r2 = 0.0;
    double growth_bound = 0.0;
    double worst_first_ratio = 0.0;  // max over the grid of lhs / phi(r^2)
    cplx worst_point = 0.0;
    bool passed() const { return first_ok && second_ok; }
};

/// ||k(z,.)||^2 <= phi(r^2) <= e^{sigma r^{2 rho}} on a polar grid in |z| <= r.
/// The second inequality is checked only for descriptors with asserted growth.
inline KernelBoundReport kernel_norm_bound_check(const PhiDescriptor& d, double r, int N, double tol = 1e-12) {
    if (!d.entire()) throw NonEntireError("kernel_norm_bound_check: descriptor is not entire");
    if (r < 0.0) throw DomainError("kernel_norm_bound_check: r must be non-negative");
    KernelBoundReport rep;
    rep.phi_r2 = phi_eval(d, r * r, N).value.real();
    const int radial = 12, angular = 16;
    for (int i = 0; i <= radial; ++i) {
        const double rad = r * i / radial;
        for (int j = 0; j < angular; ++j) {
            const cplx z = std::polar(rad, 2.0 * std::numbers::pi * j / angular);
            // ||k(z,.)||^2 = sum phi_n^2 |z|^{2n} / phi_n
            const double lhs = phi_eval(d, std::norm(z), N).value.real();
            const double ratio = lhs / rep.phi_r2;
            if (ratio > rep.worst_first_ratio) {
                rep.worst_first_ratio = ratio;
                rep.worst_point = z;
            }
            if (lhs > rep.phi_r2 * (1.0 + tol)) rep.first_ok = false;
        }
    }
    if (d.growth_asserted()) {
        rep.second_checked = true;
        rep.growth_bound = std::exp(d.sigma() * std::pow(r, 2.0 * d.rho()));
        rep.second_ok = rep.phi_r2 <= rep.growth_bound * (1.0 + tol);
    }
    return rep;
}

/// (1/pi) int conj(k(z,w)) f(w) K(-|w|^2) dA(w), with the kernel truncated at
/// max(deg f, N).
inline cplx reproduce(const VerifiedWeight& vw, const TruncatedSeries& f, cplx z, const QuadratureScheme& q = {},
                      int N = 0) {
    if (f.empty()) return 0.0;
    const auto k = kernel_series(vw.desc(), z, std::max(f.degree_cap(), N));
    return inner_product_fock(vw, k, f, q);
}

/// |<M_z f, g> - <f, D_phi g>| in l2_phi.
inline double duality_check(const PhiDescriptor& d, const TruncatedSeries& f, const TruncatedSeries& g) {
    return std::abs(inner_product_l2phi(d, multiply_z(f), g) - inner_product_l2phi(d, f, gl_derivative(d, g)));
}

}  // namespace glfock
