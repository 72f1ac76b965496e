#pragma once

// Scalar special functions on real arguments (plus complex-argument
// Mittag-Leffler and Kummer series). Everything here is a pure function.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "glfock/errors.hpp"
#include "glfock/quadrature.hpp"

namespace glfock {

using cplx = std::complex<double>;

struct SpecialFnConfig {
    double series_tol = 1e-17;
    int max_terms = 4000;
    // Bounds the adaptive refinement of the integral representations:
    // at most 64 * quad_points Gauss-Kronrod segments per sub-interval.
    int quad_points = 64;

    void validate() const {
        if (!(series_tol > 0.0)) throw ConfigError("series_tol must be positive");
        if (max_terms < 16) throw ConfigError("max_terms must be at least 16");
        if (quad_points < 16) throw ConfigError("quad_points must be at least 16");
    }
};

inline constexpr double kEulerGamma = std::numbers::egamma;

/// Largest x with Gamma(x) finite in double precision.
inline constexpr double kGammaMaxArg = 171.6243769563027;

inline double gamma(double x) {
    if (!(x > 0.0)) throw DomainError("gamma: argument must be positive, got " + std::to_string(x));
    if (x > kGammaMaxArg) throw OverflowError("gamma: overflow for x = " + std::to_string(x));
    return std::tgamma(x);
}

/// ln Gamma(x) for x > 0. Does not touch the global signgam that
/// std::lgamma writes, so it is safe under concurrency.
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
    if (x < 15.0) return std::log(std::tgamma(x));
    const double r = 1.0 / x;
    const double r2 = r * r;
    // Stirling series through the x^-13 term.
    const double series =
        r * (1.0 / 12 + r2 * (-1.0 / 360 + r2 * (1.0 / 1260 + r2 * (-1.0 / 1680 +
        r2 * (1.0 / 1188 + r2 * (-691.0 / 360360 + r2 * (1.0 / 156)))))));
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

inline double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma: argument must be positive, got " + std::to_string(x));
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double r2 = 1.0 / (x * x);
    const double series =
        r2 * (1.0 / 12 - r2 * (1.0 / 120 - r2 * (1.0 / 252 - r2 * (1.0 / 240 -
        r2 * (1.0 / 132 - r2 * (691.0 / 32760 - r2 * (1.0 / 12)))))));
    return shift + std::log(x) - 0.5 / x - series;
}

inline double harmonic(unsigned n) {
    double h = 0.0;
    for (unsigned k = 1; k <= n; ++k) h += 1.0 / k;
    return h;
}

struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;
};

/// E[ln^n T] for T ~ Gamma(x, 1), i.e. Gamma^(n)(x) / Gamma(x).
inline double gamma_deriv_ratio(unsigned n, double x, const SpecialFnConfig& cfg = {}) {
    if (!(x > 0.0)) throw DomainError("gamma_deriv: argument must be positive");
    cfg.validate();
    const double lg = log_gamma(x);
    const int max_seg = 64 * cfg.quad_points;
    const double abs_tol = 1e-15;
    const double rel_tol = 1e-13;
    const double dn = static_cast<double>(n);

    // (0, 1) in u = -ln t: t^{x-1} e^{-t} dt = exp(-x u - e^{-u}) du.
    auto lower = [=](double u) {
        const double mag = std::exp(-x * u - std::exp(-u) - lg);
        if (mag == 0.0) return 0.0;
        return mag * std::pow(-u, dn);
    };
    // (1, inf) directly.
    auto upper = [=](double t) {
        const double lt = std::log(t);
        const double mag = std::exp((x - 1.0) * lt - t - lg);
        if (mag == 0.0) return 0.0;
        return mag * std::pow(lt, dn);
    };

    // The (0,1) piece concentrates near u ~ 1/x for small x, spreads for
    // large n; split where the integrand peaks.
    double total = 0.0;
    const double u_peak = std::max(dn / x, 1e-3);
    total += quad::integrate(lower, 0.0, u_peak, abs_tol, rel_tol, max_seg).value;
    total += quad::integrate_to_infinity(lower, u_peak, abs_tol, rel_tol, max_seg).value;

    // Upper piece: split at the mode and a few widths beyond it.
    std::vector<double> cuts{1.0};
    const double mode = x - 1.0;
    const double width = std::sqrt(std::max(x, 1.0));
    for (double c : {mode - 10.0 * width, mode, mode + 10.0 * width, mode + 40.0 * width}) {
        if (c > cuts.back()) cuts.push_back(c);
    }
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += quad::integrate(upper, cuts[i], cuts[i + 1], abs_tol, rel_tol, max_seg).value;
    }
    total += quad::integrate_to_infinity(upper, cuts.back(), abs_tol, rel_tol, max_seg).value;
    return total;
}

/// n-th derivative of Gamma at x > 0 from its integral representation.
inline double gamma_deriv(unsigned n, double x, const SpecialFnConfig& cfg = {}) {
    if (n == 0) return gamma(x);
    const double ratio = gamma_deriv_ratio(n, x, cfg);
    const double lg = log_gamma(x);
    const double out = ratio * std::exp(lg);
    if (!std::isfinite(out)) throw OverflowError("gamma_deriv: overflow at x = " + std::to_string(x));
    return out;
}

/// ln |Gamma^(n)(x)| and its sign, usable far past the overflow of Gamma.
inline SignedLog log_abs_gamma_deriv(unsigned n, double x, const SpecialFnConfig& cfg = {}) {
    const double lg = log_gamma(x);
    if (n == 0) return {lg, 1};
    const double ratio = gamma_deriv_ratio(n, x, cfg);
    if (ratio == 0.0) throw DomainError("log_abs_gamma_deriv: derivative vanishes at x = " + std::to_string(x));
    return {lg + std::log(std::abs(ratio)), ratio < 0.0 ? -1 : 1};
}

/// E_{1/rho, mu}(z) = sum_k z^k / Gamma(mu + k/rho), series only.
inline cplx mittag_leffler(double rho, double mu, cplx z, const SpecialFnConfig& cfg = {}) {
    if (!(rho > 0.0) || !(mu > 0.0)) throw DomainError("mittag_leffler: rho and mu must be positive");
    cfg.validate();
    if (z == cplx(0.0)) return 1.0 / gamma(mu);
    const double logr = std::log(std::abs(z));
    const double theta = std::arg(z);
    cplx sum = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    int small_run = 0;
    for (int k = 0; k < cfg.max_terms; ++k) {
        const double lmag = k * logr - log_gamma(mu + k / rho);
        const double mag = std::exp(lmag);
        sum += std::polar(mag, k * theta);
        const bool decreasing = mag <= prev_mag;
        prev_mag = mag;
        if (decreasing && mag <= cfg.series_tol * std::max(1.0, std::abs(sum))) {
            if (++small_run >= 2) return sum;
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("mittag_leffler: series did not converge within max_terms for |z| = " +
                           std::to_string(std::abs(z)));
}

namespace detail {

inline cplx kummer_series(double a, double b, cplx z, const SpecialFnConfig& cfg) {
    cplx term = 1.0;
    cplx sum = 1.0;
    int small_run = 0;
    for (int k = 0; k < cfg.max_terms; ++k) {
        term *= (a + k) / (b + k) * z / static_cast<double>(k + 1);
        sum += term;
        if (term == cplx(0.0)) return sum;
        const bool past_peak = std::abs(a + k) * std::abs(z) <= std::abs(b + k) * (k + 1);
        if (past_peak && std::abs(term) <= cfg.series_tol * std::max(1.0, std::abs(sum))) {
            if (++small_run >= 2) return sum;
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("hyp1f1: series did not converge within max_terms");
}

}  // namespace detail

/// Kummer's M(a, b, z) = 1F1(a; b; z). For Re z < 0 the series is summed
/// after Kummer's transformation e^z M(b - a, b, -z), which avoids the
/// alternating-sign cancellation.
inline cplx hyp1f1(double a, double b, cplx z, const SpecialFnConfig& cfg = {}) {
    cfg.validate();
    if (b <= 0.0 && b == std::floor(b)) throw PoleError("hyp1f1: b is a non-positive integer");
    const bool terminating = a <= 0.0 && a == std::floor(a);
    if (z.real() < 0.0 && !terminating) {
        return std::exp(z) * detail::kummer_series(b - a, b, -z, cfg);
    }
    return detail::kummer_series(a, b, z, cfg);
}

/// Orthonormal Hermite function h_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)),
/// by the recurrence on the normalized functions.
inline double hermite_fn(unsigned n, double x) {
    if (n > 200) throw DomainError("hermite_fn: n above the supported budget of 200");
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    for (unsigned k = 0; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace glfock
