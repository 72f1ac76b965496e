#pragma once

// Entire functions phi(z) = sum phi_k z^k with positive coefficients, in the
// six families the library knows about. Coefficients live in log space.

#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "glfock/errors.hpp"
#include "glfock/special_functions.hpp"

namespace glfock {

enum class Family { Exponential, MittagLeffler, StretchedGamma, GammaDeriv, DunklRankOne, BackwardShift };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Exponential: return "Exponential";
        case Family::MittagLeffler: return "MittagLeffler";
        case Family::StretchedGamma: return "StretchedGamma";
        case Family::GammaDeriv: return "GammaDeriv";
        case Family::DunklRankOne: return "DunklRankOne";
        case Family::BackwardShift: return "BackwardShift";
    }
    return "?";
}

/// Coefficient index range over which phi_coeff stays a normal double:
/// Exponential ~170, MittagLeffler(rho, mu) ~ rho * 170, GammaDeriv up to
/// the precomputed table (kGammaDerivMaxK). log_coeff has no such limit
/// except for GammaDeriv.
inline constexpr int kGammaDerivMaxK = 320;

class PhiDescriptor {
public:
    static PhiDescriptor exponential(bool normalized = false) {
        PhiDescriptor d(Family::Exponential, normalized);
        d.rho_ = 1.0;
        d.sigma_ = 1.0;
        return d.finish();
    }

    static PhiDescriptor mittag_leffler(double rho, double mu, bool normalized = false) {
        if (!(rho > 0.0) || !(mu > 0.0)) throw DomainError("MittagLeffler: rho and mu must be positive");
        PhiDescriptor d(Family::MittagLeffler, normalized);
        d.p1_ = rho;
        d.p2_ = mu;
        d.rho_ = rho;
        d.sigma_ = 1.0;
        return d.finish();
    }

    static PhiDescriptor stretched_gamma(double a, double b, bool normalized = false) {
        if (!(a > 0.0) || !(b > 0.0)) throw DomainError("StretchedGamma: a and b must be positive");
        PhiDescriptor d(Family::StretchedGamma, normalized);
        d.p1_ = a;
        d.p2_ = b;
        d.rho_ = b;
        d.sigma_ = a;
        return d.finish();
    }

    /// phi_k = 1 / |Gamma^(n)(k+1)|. The absolute value only matters at
    /// k = 0 for odd n, where Gamma^(n)(1) < 0.
    static PhiDescriptor gamma_deriv(unsigned n, bool normalized = false, const SpecialFnConfig& cfg = {}) {
        if (n < 1) throw DomainError("GammaDeriv: derivative order must be at least 1");
        PhiDescriptor d(Family::GammaDeriv, normalized);
        d.order_ = n;
        d.rho_ = 1.0;
        d.sigma_ = 1.0;
        d.growth_asserted_ = false;
        auto table = std::make_shared<std::vector<double>>();
        table->reserve(kGammaDerivMaxK + 1);
        for (int k = 0; k <= kGammaDerivMaxK; ++k) {
            table->push_back(-log_abs_gamma_deriv(n, k + 1.0, cfg).log_abs);
        }
        d.table_ = std::move(table);
        return d.finish();
    }

    static PhiDescriptor dunkl_rank_one(double kappa, bool normalized = false) {
        if (!(kappa > 0.0)) throw DomainError("DunklRankOne: kappa must be positive");
        PhiDescriptor d(Family::DunklRankOne, normalized);
        d.p1_ = kappa;
        d.rho_ = 1.0;
        d.sigma_ = 1.0;
        d.growth_asserted_ = false;
        return d.finish();
    }

    static PhiDescriptor backward_shift() {
        PhiDescriptor d(Family::BackwardShift, true);
        d.rho_ = 1.0;
        d.sigma_ = 1.0;
        d.entire_ = false;
        d.growth_asserted_ = false;
        return d.finish();
    }

    Family family() const { return family_; }
    const char* name() const { return family_name(family_); }
    bool normalized() const { return normalized_; }
    bool entire() const { return entire_; }
    double rho() const { return rho_; }
    double sigma() const { return sigma_; }
    /// True when (rho, sigma) are known for the family rather than nominal.
    bool growth_asserted() const { return growth_asserted_; }

    // Family parameters (meaning depends on the family).
    double ml_rho() const { return p1_; }
    double ml_mu() const { return p2_; }
    double sg_a() const { return p1_; }
    double sg_b() const { return p2_; }
    double kappa() const { return p1_; }
    unsigned deriv_order() const { return order_; }

    /// ln phi_k of the un-normalized family.
    double log_coeff_raw(int k) const {
        if (k < 0) throw DomainError("phi coefficient index must be non-negative");
        switch (family_) {
            case Family::Exponential:
                return -log_gamma(k + 1.0);
            case Family::MittagLeffler:
                return -log_gamma(p2_ + k / p1_);
            case Family::StretchedGamma: {
                const double s = (k + 1.0) / p2_;
                return std::log(p2_) + s * std::log(p1_) - log_gamma(s);
            }
            case Family::GammaDeriv:
                if (k > kGammaDerivMaxK) {
                    throw OverflowError("GammaDeriv coefficients are tabulated only up to k = " +
                                        std::to_string(kGammaDerivMaxK));
                }
                return (*table_)[static_cast<std::size_t>(k)];
            case Family::DunklRankOne: {
                // phi_{2n} = (1/2)_n / ((2n)! (kappa+1/2)_n)
                // phi_{2n+1} = (1/2)_{n+1} / ((2n+1)! (kappa+1/2)_{n+1})
                const int m = (k % 2 == 0) ? k / 2 : k / 2 + 1;
                const double h = 0.5;
                const double kh = p1_ + 0.5;
                const double log_poch_h = log_gamma(h + m) - log_gamma(h);
                const double log_poch_kh = log_gamma(kh + m) - log_gamma(kh);
                return log_poch_h - log_poch_kh - log_gamma(k + 1.0);
            }
            case Family::BackwardShift:
                return 0.0;
        }
        return 0.0;
    }

    /// ln phi_k, after normalization when the flag is set.
    double log_coeff(int k) const { return log_coeff_raw(k) - (normalized_ ? log_phi0_raw_ : 0.0); }

    /// ln phi_0 of the raw family (the normalization divisor).
    double log_phi0_raw() const { return log_phi0_raw_; }

    double coeff(int k) const {
        const double v = std::exp(log_coeff(k));
        if (!(v > 0.0) || !std::isfinite(v) || v < std::numeric_limits<double>::min()) {
            throw OverflowError(std::string("phi_coeff: ") + name() + " coefficient " + std::to_string(k) +
                                " is outside double range");
        }
        return v;
    }

    /// phi_{k-1} / phi_k for k >= 1, formed as a log difference.
    double ratio(int k) const {
        if (k < 1) throw DomainError("phi ratio needs k >= 1");
        if (family_ == Family::BackwardShift) return 1.0;
        return std::exp(log_coeff(k - 1) - log_coeff(k));
    }

    bool operator==(const PhiDescriptor& o) const {
        return family_ == o.family_ && normalized_ == o.normalized_ && p1_ == o.p1_ && p2_ == o.p2_ &&
               order_ == o.order_;
    }

private:
    PhiDescriptor(Family f, bool normalized) : family_(f), normalized_(normalized) {}

    PhiDescriptor& finish() {
        log_phi0_raw_ = log_coeff_raw(0);
        return *this;
    }

    Family family_;
    bool normalized_ = false;
    bool entire_ = true;
    bool growth_asserted_ = true;
    double rho_ = 1.0;
    double sigma_ = 1.0;
    double p1_ = 0.0;
    double p2_ = 0.0;
    unsigned order_ = 0;
    double log_phi0_raw_ = 0.0;
    std::shared_ptr<const std::vector<double>> table_;
};

inline double phi_coeff(const PhiDescriptor& d, int k) { return d.coeff(k); }

struct PhiEval {
    cplx value;
    double last_term = 0.0;
};

/// Partial sum of phi(z) through degree N, with |last term| as the
/// truncation diagnostic.
inline PhiEval phi_eval(const PhiDescriptor& d, cplx z, int N) {
    if (N < 0) throw DomainError("phi_eval: N must be non-negative");
    const double r = std::abs(z);
    if (!d.entire() && r >= 1.0) {
        throw DivergenceError(std::string("phi_eval: ") + d.name() + " series diverges for |z| >= 1");
    }
    PhiEval out{std::exp(d.log_coeff(0)), std::exp(d.log_coeff(0))};
    if (r == 0.0) return out;
    const double logr = std::log(r);
    const double theta = std::arg(z);
    for (int k = 1; k <= N; ++k) {
        const double mag = std::exp(d.log_coeff(k) + k * logr);
        out.value += std::polar(mag, k * theta);
        out.last_term = mag;
    }
    return out;
}

/// ln phi(x) for real x >= 0, summing until terms are negligible
/// (log-sum-exp, so phi(x) itself may overflow). Entire families only,
/// or |x| < 1 for the backward shift.
inline double log_phi_real(const PhiDescriptor& d, double x, int max_terms = 20000) {
    if (x < 0.0) throw DomainError("log_phi_real: x must be non-negative");
    if (x == 0.0) return d.log_coeff(0);
    if (!d.entire()) {
        if (x >= 1.0) throw DivergenceError("log_phi_real: backward shift diverges for x >= 1");
        return d.log_coeff(0) - std::log1p(-x);
    }
    const double lx = std::log(x);
    // Find the largest log-term first, then sum relative to it.
    std::vector<double> logs;
    double peak = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < max_terms; ++k) {
        const double lt = d.log_coeff(k) + k * lx;
        logs.push_back(lt);
        peak = std::max(peak, lt);
        if (k > 4 && lt < peak - 40.0 && lt < logs[k - 1]) break;
        if (k == max_terms - 1) throw ConvergenceError("log_phi_real: too many terms");
    }
    double s = 0.0;
    for (double lt : logs) s += std::exp(lt - peak);
    return peak + std::log(s);
}

struct OrderDegreeEstimate {
    double rho_hat = 0.0;
    double sigma_hat = 0.0;
    double rho = 0.0;    // descriptor metadata, for comparison
    double sigma = 0.0;
};

/// Fits lim k^{1/rho} phi_k^{1/k} = (sigma e rho)^{1/rho} over k in [K/2, K].
/// y_k = -ln(phi_k)/k is regressed on {1, ln k, ln(k)/k, 1/k}; the last two
/// columns absorb the Stirling corrections of Gamma-type coefficients, the
/// ln k slope is 1/rho and the constant is -ln(sigma e rho)/rho.
inline OrderDegreeEstimate order_degree_check(const PhiDescriptor& d, int K) {
    if (!d.entire()) throw NonEntireError(std::string("order_degree_check: ") + d.name() + " is not entire");
    if (K < 50) throw DomainError("order_degree_check: K must be at least 50");
    const int k0 = K / 2;
    const int rows = K - k0 + 1;
    Eigen::MatrixXd X(rows, 4);
    Eigen::VectorXd y(rows);
    for (int i = 0; i < rows; ++i) {
        const double k = k0 + i;
        const double lk = std::log(k);
        X(i, 0) = 1.0;
        X(i, 1) = lk;
        X(i, 2) = lk / k;
        X(i, 3) = 1.0 / k;
        y[i] = -d.log_coeff(k0 + i) / k;
    }
    const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
    OrderDegreeEstimate out;
    out.rho_hat = 1.0 / beta[1];
    out.sigma_hat = std::exp(-beta[0] * out.rho_hat) / (std::numbers::e * out.rho_hat);
    out.rho = d.rho();
    out.sigma = d.sigma();
    return out;
}

/// |phi_{k-1}/phi_k|^{1/k}, whose trend toward 1 means D_phi f and f share
/// their radius of convergence.
inline double radius_ratio(const PhiDescriptor& d, int k) {
    if (k < 1) throw DomainError("radius_ratio needs k >= 1");
    return std::exp((d.log_coeff(k - 1) - d.log_coeff(k)) / k);
}

}  // namespace glfock
