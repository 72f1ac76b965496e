#pragma once

// Generalized Weierstrass factor E(z) = (1 - z) phi(psi1 z + psi2 z^2), its
// remainder Omega, lattice sigma and g products, and the empirical
// diagnostics built on them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "glfock/errors.hpp"
#include "glfock/fock_space.hpp"
#include "glfock/gl_core.hpp"
#include "glfock/phi_descriptor.hpp"
#include "glfock/random.hpp"

namespace glfock {

struct PsiPair {
    double psi1 = 0.0;
    double psi2 = 0.0;
};

namespace detail {
inline void require_unit_phi0(const PhiDescriptor& d, const char* op) {
    if (std::abs(d.log_coeff(0)) > 1e-14) {
        throw NormalizationError(std::string(op) + ": " + d.name() +
                                 " has phi_0 != 1; construct the descriptor with normalized = true");
    }
}
}  // namespace detail

/// psi1 = 1/phi1, psi2 = (phi1^2 - phi2)/phi1^3: the choice that cancels the
/// z and z^2 terms of E(z) - 1.
inline PsiPair psi_pair(const PhiDescriptor& d) {
    detail::require_unit_phi0(d, "psi_pair");
    const double p1 = std::exp(d.log_coeff(1));
    const double p2 = std::exp(d.log_coeff(2));
    return {1.0 / p1, (p1 * p1 - p2) / (p1 * p1 * p1)};
}

/// phi as a fixed polynomial of degree N (Horner), or the exact rational
/// 1/(1 - w) for the backward shift.
class PhiPoly {
public:
    PhiPoly(const PhiDescriptor& d, int N) : rational_(!d.entire()) {
        c_.reserve(static_cast<std::size_t>(N) + 1);
        for (int k = 0; k <= N; ++k) c_.push_back(std::exp(d.log_coeff(k)));
    }
    cplx operator()(cplx w) const {
        if (rational_) {
            if (std::abs(w) >= 1.0) throw DivergenceError("backward shift phi diverges for |w| >= 1");
            return c_[0] / (1.0 - w);
        }
        cplx acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * w + *it;
        return acc;
    }
    bool rational() const { return rational_; }
    const std::vector<double>& coeffs() const { return c_; }

private:
    std::vector<double> c_;
    bool rational_;
};

/// E(z) = (1 - z) phi(psi1 z + psi2 z^2), with phi truncated at degree N.
inline cplx weierstrass_factor(const PhiDescriptor& d, cplx z, int N) {
    const auto psi = psi_pair(d);
    const cplx w = psi.psi1 * z + psi.psi2 * z * z;
    if (!d.entire()) {
        if (std::abs(w) >= 1.0) throw DivergenceError("weierstrass_factor: |psi1 z + psi2 z^2| >= 1 for backward shift");
        // (1 - z) / (1 - w) written so that w == z gives exactly 1.
        return 1.0 + (w - z) / (1.0 - w);
    }
    return (1.0 - z) * phi_eval(d, w, N).value;
}

/// Taylor coefficients of E(z) - 1 through degree D, by composing the
/// degree-D truncation of phi with psi1 z + psi2 z^2.
inline std::vector<double> weierstrass_series(const PhiDescriptor& d, int D) {
    const auto psi = psi_pair(d);
    std::vector<double> p;
    for (int k = 0; k <= D; ++k) p.push_back(std::exp(d.log_coeff(k)));
    const auto comp = compose_series(p, {0.0, psi.psi1, psi.psi2}, D);
    std::vector<double> e(static_cast<std::size_t>(D) + 1, 0.0);
    for (int k = 0; k <= D; ++k) {
        e[static_cast<std::size_t>(k)] = comp[static_cast<std::size_t>(k)] - (k > 0 ? comp[static_cast<std::size_t>(k) - 1] : 0.0);
    }
    e[0] -= 1.0;
    return e;
}

/// Omega(0) = phi3 psi1^3 + 2 phi2 psi1 psi2 - phi2 psi1^2 - phi1 psi2.
inline double omega_at_zero(const PhiDescriptor& d) {
    const auto psi = psi_pair(d);
    const double p1 = std::exp(d.log_coeff(1)), p2 = std::exp(d.log_coeff(2)), p3 = std::exp(d.log_coeff(3));
    return p3 * std::pow(psi.psi1, 3) + 2.0 * p2 * psi.psi1 * psi.psi2 - p2 * psi.psi1 * psi.psi1 - p1 * psi.psi2;
}

inline constexpr double kOmegaSeriesRadius = 1e-3;

/// Omega(z) = (E(z) - 1) / z^3; below |z| = 1e-3 the degree-15 Taylor
/// series is used instead of the cancelling quotient.
inline cplx omega(const PhiDescriptor& d, cplx z, int N) {
    if (!d.entire()) {
        // E - 1 = (w - z)/(1 - w) with w - z = (psi1 - 1) z + psi2 z^2.
        const auto psi = psi_pair(d);
        const cplx w = psi.psi1 * z + psi.psi2 * z * z;
        if (std::abs(w) >= 1.0) throw DivergenceError("omega: |psi1 z + psi2 z^2| >= 1 for backward shift");
        const cplx num = (psi.psi1 - 1.0) + psi.psi2 * z;
        if (num == cplx(0.0)) return 0.0;
        return num / ((1.0 - w) * z * z);
    }
    if (std::abs(z) < kOmegaSeriesRadius) {
        const auto e = weierstrass_series(d, 15);
        cplx acc = 0.0;
        for (int k = 15; k >= 3; --k) acc = acc * z + e[static_cast<std::size_t>(k)];
        return acc;
    }
    return (weierstrass_factor(d, z, N) - 1.0) / (z * z * z);
}

struct RadiusBounds {
    double R_L = 0.0;
    double R_U = 0.0;            // +inf when the trend says unbounded
    double R_U_estimate = 0.0;   // 1 / |phi_N|^{1/N} at the last index
    std::string flag;            // "finite" or "unbounded-trend"
};

/// R_L = |psi1| + |psi2| and R_U = 1 / limsup |phi_n|^{1/n}, the latter
/// judged from n in [N/2, N]: a root sequence still falling by more than 3%
/// across that window is read as tending to zero.
inline RadiusBounds radius_bounds(const PhiDescriptor& d, int N = 200) {
    if (N < 100) throw DomainError("radius_bounds: N must be at least 100");
    if (d.family() == Family::GammaDeriv) N = std::min(N, kGammaDerivMaxK);
    const auto psi = psi_pair(d);
    RadiusBounds rb;
    rb.R_L = std::abs(psi.psi1) + std::abs(psi.psi2);
    auto root = [&](int n) { return std::exp(d.log_coeff(n) / n); };
    double sup = 0.0;
    for (int n = N / 2; n <= N; ++n) sup = std::max(sup, root(n));
    rb.R_U_estimate = 1.0 / root(N);
    if (root(N) < 0.97 * root(N / 2)) {
        rb.flag = "unbounded-trend";
        rb.R_U = std::numeric_limits<double>::infinity();
    } else {
        rb.flag = "finite";
        rb.R_U = 1.0 / sup;
    }
    return rb;
}

/// Right side of the Omega estimate:
///   |phi1 psi2 - 2 phi2 psi1 psi2 + phi2 psi1^2| + |phi2 psi1 psi2^2 - 2 phi2 psi1 psi2|
///   + |phi2 psi2^2| + 2 sum_{n>=3} |phi_n| (|psi1| + |psi2|)^n.
/// The tail is summed until its terms drop below 1e-17 of the total.
/// Infinite when |psi1| + |psi2| sits on the boundary of a finite radius.
inline double omega_bound(const PhiDescriptor& d) {
    const auto psi = psi_pair(d);
    const double R = std::abs(psi.psi1) + std::abs(psi.psi2);
    if (!d.entire()) {
        const auto rb = radius_bounds(d);
        if (R > rb.R_U * (1.0 + 1e-12)) throw DivergenceError("omega_bound: |psi1| + |psi2| exceeds R_U");
        if (R >= rb.R_U * (1.0 - 1e-12)) return std::numeric_limits<double>::infinity();
    }
    const double p1 = std::exp(d.log_coeff(1)), p2 = std::exp(d.log_coeff(2));
    const double a = psi.psi1, b = psi.psi2;
    double head = std::abs(p1 * b - 2.0 * p2 * a * b + p2 * a * a) + std::abs(p2 * a * b * b - 2.0 * p2 * a * b) +
                  std::abs(p2 * b * b);
    double tail = 0.0;
    const double lR = std::log(R);
    const int n_cap = d.family() == Family::GammaDeriv ? kGammaDerivMaxK : 100000;
    for (int n = 3; n <= n_cap; ++n) {
        const double t = std::exp(d.log_coeff(n) + n * lR);
        tail += t;
        if (n > 10 && t < 1e-17 * (head + 2.0 * tail)) return head + 2.0 * tail;
    }
    throw ConvergenceError("omega_bound: tail did not converge");
}

/// Square lattice lambda (m + i n), |m|, |n| <= trunc_M.
struct LatticeSpec {
    double lambda = 1.0;
    int trunc_M = 16;

    cplx point(int m, int n) const { return lambda * cplx(m, n); }
    int side() const { return 2 * trunc_M + 1; }
};

/// Points z_{m,n} with |z_{m,n} - lambda_{m,n}| < Q, separation q > 0.
class PerturbedLattice {
public:
    /// Uniform random offsets in the open disk of radius Q (seeded).
    static PerturbedLattice random(const LatticeSpec& lat, double Q, std::uint64_t seed) {
        if (!(Q > 0.0)) throw DomainError("PerturbedLattice: Q must be positive");
        Rng rng(seed);
        std::vector<cplx> pts;
        const int M = lat.trunc_M;
        for (int m = -M; m <= M; ++m) {
            for (int n = -M; n <= M; ++n) {
                const double u = uniform01(rng);
                const double v = uniform01(rng);
                const double r = 0.999 * Q * std::sqrt(u);
                pts.push_back(lat.point(m, n) + std::polar(r, 2.0 * std::numbers::pi * v));
            }
        }
        return PerturbedLattice(lat, Q, std::move(pts));
    }

    /// The unperturbed lattice itself, with the given closeness bound.
    static PerturbedLattice exact(const LatticeSpec& lat, double Q = 1e-12) {
        std::vector<cplx> pts;
        for (int m = -lat.trunc_M; m <= lat.trunc_M; ++m)
            for (int n = -lat.trunc_M; n <= lat.trunc_M; ++n) pts.push_back(lat.point(m, n));
        return PerturbedLattice(lat, Q, std::move(pts));
    }

    /// Explicit points in (m, n) order: m outer, n inner, both from -M to M.
    PerturbedLattice(const LatticeSpec& lat, double Q, std::vector<cplx> pts)
        : lat_(lat), Q_(Q), pts_(std::move(pts)) {
        if (pts_.size() != static_cast<std::size_t>(lat.side() * lat.side())) {
            throw DomainError("PerturbedLattice: point count does not match the lattice truncation");
        }
        const int M = lat.trunc_M;
        for (int m = -M; m <= M; ++m) {
            for (int n = -M; n <= M; ++n) {
                if (!(std::abs(at(m, n) - lat.point(m, n)) < Q_)) {
                    throw DomainError("PerturbedLattice: point (" + std::to_string(m) + "," + std::to_string(n) +
                                      ") is not within Q of its lattice site");
                }
            }
        }
        q_ = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts_.size(); ++i)
            for (std::size_t j = i + 1; j < pts_.size(); ++j) q_ = std::min(q_, std::abs(pts_[i] - pts_[j]));
        if (!(q_ > 0.0)) throw DomainError("PerturbedLattice: coincident points (separation q = 0)");
    }

    const LatticeSpec& lattice() const { return lat_; }
    double Q() const { return Q_; }
    double q() const { return q_; }
    cplx at(int m, int n) const {
        const int M = lat_.trunc_M;
        return pts_[static_cast<std::size_t>((m + M) * lat_.side() + (n + M))];
    }
    const std::vector<cplx>& points() const { return pts_; }

    /// Distance from z to the nearest stored point.
    double distance(cplx z) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : pts_) best = std::min(best, std::abs(z - p));
        return best;
    }

private:
    LatticeSpec lat_;
    double Q_;
    double q_ = 0.0;
    std::vector<cplx> pts_;
};

struct ProductValue {
    cplx value;
    double rel_change = 0.0;  // |P_M - P_{M-1}| / |P_M|
};

/// sigma(z) = z prod_{0 < max(|m|,|n|) <= M} (1 - z/lambda_mn) phi(psi1 z/lambda_mn + psi2 z^2/lambda_mn^2).
inline ProductValue sigma_fn(const PhiDescriptor& d, cplx z, const LatticeSpec& lat, int N) {
    const auto psi = psi_pair(d);
    const PhiPoly phi(d, N);
    const int M = lat.trunc_M;
    cplx inner = 1.0;  // rings 1..M-1
    cplx ring = 1.0;   // ring M
    for (int m = -M; m <= M; ++m) {
        for (int n = -M; n <= M; ++n) {
            const int r = std::max(std::abs(m), std::abs(n));
            if (r == 0) continue;
            const cplx lam = lat.point(m, n);
            const cplx t = z / lam;
            const cplx f = (1.0 - t) * phi(psi.psi1 * t + psi.psi2 * t * t);
            (r == M ? ring : inner) *= f;
        }
    }
    ProductValue out;
    const cplx prev = z * inner;
    out.value = prev * ring;
    out.rel_change = out.value == cplx(0.0) ? 0.0 : std::abs(out.value - prev) / std::abs(out.value);
    return out;
}

enum class GVariant { Printed, AllGamma };

namespace detail {

// One factor of g: (1 - z/z_mn) phi(psi1 z/z_mn + psi2 z^2/den^2) with den
// = lambda_mn (printed) or z_mn (all_gamma).
inline cplx g_factor(const PhiPoly& phi, const PsiPair& psi, cplx z, cplx zmn, cplx lam, GVariant v) {
    const cplx t = z / zmn;
    const cplx den = v == GVariant::Printed ? lam : zmn;
    return (1.0 - t) * phi(psi.psi1 * t + psi.psi2 * (z * z) / (den * den));
}

inline cplx g_phi_only(const PhiPoly& phi, const PsiPair& psi, cplx z, cplx zmn, cplx lam, GVariant v) {
    const cplx den = v == GVariant::Printed ? lam : zmn;
    return phi(psi.psi1 * z / zmn + psi.psi2 * (z * z) / (den * den));
}

}  // namespace detail

/// g(z) = (z - z_00) prod_{(m,n) != 0} (1 - z/z_mn) phi(psi1 z/z_mn + psi2 z^2/lambda_mn^2).
/// The second slot divides by lambda_mn^2 as printed; GVariant::AllGamma
/// uses z_mn^2 there instead.
inline cplx g_fn(const PhiDescriptor& d, cplx z, const PerturbedLattice& gamma, int N,
                 GVariant variant = GVariant::Printed) {
    const auto psi = psi_pair(d);
    const PhiPoly phi(d, N);
    const auto& lat = gamma.lattice();
    const int M = lat.trunc_M;
    cplx acc = z - gamma.at(0, 0);
    for (int m = -M; m <= M; ++m) {
        for (int n = -M; n <= M; ++n) {
            if (m == 0 && n == 0) continue;
            acc *= detail::g_factor(phi, psi, z, gamma.at(m, n), lat.point(m, n), variant);
        }
    }
    return acc;
}

/// g'(z_kl) from the product rule: at a zero of one factor, only the
/// derivative of that factor survives.
inline cplx g_derivative_at_node(const PhiDescriptor& d, int k, int l, const PerturbedLattice& gamma, int N,
                                 GVariant variant = GVariant::Printed) {
    const auto psi = psi_pair(d);
    const PhiPoly phi(d, N);
    const auto& lat = gamma.lattice();
    const int M = lat.trunc_M;
    const cplx z = gamma.at(k, l);
    cplx acc = 1.0;
    if (k == 0 && l == 0) {
        for (int m = -M; m <= M; ++m)
            for (int n = -M; n <= M; ++n)
                if (m != 0 || n != 0) acc *= detail::g_factor(phi, psi, z, gamma.at(m, n), lat.point(m, n), variant);
        return acc;
    }
    acc = z - gamma.at(0, 0);
    for (int m = -M; m <= M; ++m) {
        for (int n = -M; n <= M; ++n) {
            if ((m == 0 && n == 0) || (m == k && n == l)) continue;
            acc *= detail::g_factor(phi, psi, z, gamma.at(m, n), lat.point(m, n), variant);
        }
    }
    // d/dz (1 - z/z_kl) = -1/z_kl
    return acc * (-1.0 / z) * detail::g_phi_only(phi, psi, z, z, lat.point(k, l), variant);
}

/// Winding number of f around |z| = radius (argument principle), with the
/// contour refined wherever the phase jumps by more than 0.3 rad.
struct ZeroCount {
    int count = 0;
    double raw = 0.0;        // unrounded winding number
    int evaluations = 0;
};

inline ZeroCount count_zeros(const std::function<cplx(cplx)>& f, double radius, int base_points = 256,
                             int max_depth = 30) {
    ZeroCount out;
    auto at = [&](double t) {
        ++out.evaluations;
        const cplx v = f(std::polar(radius, t));
        if (v == cplx(0.0) || !std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw ConvergenceError("count_zeros: function vanishes or overflows on the contour");
        }
        return v;
    };
    std::function<double(double, cplx, double, cplx, int)> seg = [&](double t0, cplx f0, double t1, cplx f1,
                                                                       int depth) -> double {
        const double dphi = std::arg(f1 / f0);
        if (std::abs(dphi) <= 0.3) return dphi;
        if (depth >= max_depth) throw ConvergenceError("count_zeros: contour refinement exhausted");
        const double tm = 0.5 * (t0 + t1);
        const cplx fm = at(tm);
        return seg(t0, f0, tm, fm, depth + 1) + seg(tm, fm, t1, f1, depth + 1);
    };
    const double step = 2.0 * std::numbers::pi / base_points;
    const cplx first = at(0.0);
    cplx prev = first;
    double total = 0.0;
    for (int j = 1; j <= base_points; ++j) {
        const double t = j * step;
        const cplx cur = j == base_points ? first : at(t);
        total += seg(t - step, prev, t, cur, 0);
        prev = cur;
    }
    out.raw = total / (2.0 * std::numbers::pi);
    out.count = static_cast<int>(std::lround(out.raw));
    return out;
}

/// Number of truncated lattice points with |lambda_mn| <= radius.
inline int lattice_points_in_disk(const LatticeSpec& lat, double radius) {
    int c = 0;
    for (int m = -lat.trunc_M; m <= lat.trunc_M; ++m)
        for (int n = -lat.trunc_M; n <= lat.trunc_M; ++n)
            if (std::abs(lat.point(m, n)) <= radius) ++c;
    return c;
}

struct DiagRow {
    cplx z;
    double lhs = 0.0;   // weighted |sigma| or |g|
    double rhs = 0.0;   // distance term
    double ratio = 0.0;
};

struct SigmaLowerReport {
    std::vector<DiagRow> rows;
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    bool passed() const { return min_ratio > 0.0 && std::isfinite(min_ratio); }
};

/// Distance to the nearest truncated lattice point.
inline double lattice_distance(const LatticeSpec& lat, cplx z) {
    double best = std::numeric_limits<double>::infinity();
    for (int m = -lat.trunc_M; m <= lat.trunc_M; ++m)
        for (int n = -lat.trunc_M; n <= lat.trunc_M; ++n) best = std::min(best, std::abs(z - lat.point(m, n)));
    return best;
}

/// Per grid point K(-|z|^2)|sigma(z)| / d(z, Lambda); the minimum is an
/// empirical lower constant.
inline SigmaLowerReport sigma_lower_diag(const VerifiedWeight& vw, const LatticeSpec& lat,
                                         const std::vector<cplx>& grid, int N) {
    SigmaLowerReport rep;
    for (const auto& z : grid) {
        DiagRow row;
        row.z = z;
        const double dist = lattice_distance(lat, z);
        if (dist == 0.0) throw DomainError("sigma_lower_diag: grid point lies on the lattice");
        row.lhs = vw(std::norm(z)) * std::abs(sigma_fn(vw.desc(), z, lat, N).value);
        row.rhs = dist;
        row.ratio = row.lhs / row.rhs;
        rep.min_ratio = std::min(rep.min_ratio, row.ratio);
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
        rep.rows.push_back(row);
    }
    return rep;
}

/// gamma(z) of the two-sided estimate: 1 when the weight grows no faster
/// than e^z, |K(z)| otherwise. ExpWeight is the tie and takes 1.
inline double growth_selector(const WeightKernel& wk, cplx z) {
    switch (wk.form()) {
        case WeightForm::StretchedExp:
            if (wk.param2() > 1.0) return std::exp((-wk.param1() * std::pow(-z, wk.param2())).real());
            return 1.0;
        case WeightForm::MLWeight:
            if (wk.param1() > 1.0) {
                const double r = wk.param1(), m = wk.param2();
                return std::abs(r * std::pow(-z, r * m - 1.0) * std::exp(-std::pow(-z, r)));
            }
            return 1.0;
        default:
            return 1.0;
    }
}

struct TwoSidedRow {
    cplx z;
    double value = 0.0;   // |K(-|z|^2) g(z)|
    double dist = 0.0;    // dist(z, Gamma)
    double gamma = 1.0;
    double lower = 0.0;   // c1 gamma e^{-c |z| log|z|} dist
    double upper = 0.0;   // c2 gamma e^{c |z| log|z|}
};

struct TwoSidedReport {
    std::vector<TwoSidedRow> rows;
    double c = 0.0;
    double log_c1 = 0.0;
    double log_c2 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    bool feasible = false;
    std::string reason;
};

/// Fits c, c1, c2 so both sides of
///   c1 gamma e^{-c|z|log|z|} dist(z,Gamma) <= |K(-|z|^2) g(z)| <= c2 gamma e^{c|z|log|z|}
/// hold on the grid. For fixed c the tightest c1, c2 are a min and a max on
/// the log scale; c is the minimizer of log(c2/c1) over [0, 50].
inline TwoSidedReport two_sided_diag(const VerifiedWeight& vw, const PerturbedLattice& gamma,
                                     const std::vector<cplx>& grid, int N, GVariant variant = GVariant::Printed) {
    TwoSidedReport rep;
    struct P {
        double L, D, G, ell;
    };
    std::vector<P> pts;
    for (const auto& z : grid) {
        TwoSidedRow row;
        row.z = z;
        row.value = vw(std::norm(z)) * std::abs(g_fn(vw.desc(), z, gamma, N, variant));
        row.dist = gamma.distance(z);
        row.gamma = growth_selector(vw.kernel(), z);
        const double az = std::abs(z);
        const double ell = az > 0.0 ? az * std::log(az) : 0.0;
        if (!(row.value > 0.0) || !std::isfinite(row.value) || !(row.dist > 0.0) || !(row.gamma > 0.0) ||
            !std::isfinite(row.gamma)) {
            rep.reason = "non-finite or vanishing value at z = (" + std::to_string(z.real()) + ", " +
                         std::to_string(z.imag()) + ")";
            rep.rows.push_back(row);
            return rep;
        }
        pts.push_back({std::log(row.value), std::log(row.dist), std::log(row.gamma), ell});
        rep.rows.push_back(row);
    }
    if (pts.empty()) {
        rep.reason = "empty grid";
        return rep;
    }
    auto fit = [&](double c, double& lc1, double& lc2) {
        lc1 = std::numeric_limits<double>::infinity();
        lc2 = -std::numeric_limits<double>::infinity();
        for (const auto& p : pts) {
            lc1 = std::min(lc1, p.L - p.G + c * p.ell - p.D);
            lc2 = std::max(lc2, p.L - p.G - c * p.ell);
        }
        return lc2 - lc1;
    };
    double lo = 0.0, hi = 50.0, l1, l2;
    for (int it = 0; it < 200; ++it) {
        const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
        if (fit(a, l1, l2) <= fit(b, l1, l2)) hi = b; else lo = a;
    }
    rep.c = 0.5 * (lo + hi);
    fit(rep.c, rep.log_c1, rep.log_c2);
    rep.c1 = std::exp(rep.log_c1);
    rep.c2 = std::exp(rep.log_c2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        rep.rows[i].lower = std::exp(rep.log_c1 + p.G - rep.c * p.ell + p.D);
        rep.rows[i].upper = std::exp(rep.log_c2 + p.G + rep.c * p.ell);
    }
    rep.feasible = std::isfinite(rep.log_c1) && std::isfinite(rep.log_c2) && std::isfinite(rep.c);
    if (!rep.feasible) rep.reason = "constants diverged";
    return rep;
}

enum class NodeDerivative { Exact, FiniteDifference };

struct LagrangeOptions {
    int N = 40;                     // phi truncation inside g
    GVariant variant = GVariant::Printed;
    NodeDerivative derivative = NodeDerivative::Exact;
    double fd_step_factor = 1e-5;   // h = factor * q(Gamma) for finite differences
};

/// Precomputed Lagrange data: node derivatives g'(z_mn) for |m|,|n| <= M_sum.
class LagrangeInterpolator {
public:
    LagrangeInterpolator(PhiDescriptor d, const PerturbedLattice& gamma, int M_sum, LagrangeOptions opt = {})
        : d_(std::move(d)), gamma_(gamma), M_sum_(std::min(M_sum, gamma.lattice().trunc_M)), opt_(opt) {
        for (int m = -M_sum_; m <= M_sum_; ++m) {
            for (int n = -M_sum_; n <= M_sum_; ++n) {
                cplx gp;
                if (opt_.derivative == NodeDerivative::Exact) {
                    gp = g_derivative_at_node(d_, m, n, gamma_, opt_.N, opt_.variant);
                } else {
                    const double h = opt_.fd_step_factor * gamma_.q();
                    const cplx z = gamma_.at(m, n);
                    gp = (g_fn(d_, z + h, gamma_, opt_.N, opt_.variant) - g_fn(d_, z - h, gamma_, opt_.N, opt_.variant)) /
                         (2.0 * h);
                }
                if (std::abs(gp) < 1e-300) {
                    throw SingularMatrixError("lagrange_interp: g' vanishes at node (" + std::to_string(m) + "," +
                                              std::to_string(n) + ")");
                }
                derivs_.push_back(gp);
            }
        }
    }

    cplx node_derivative(int m, int n) const {
        return derivs_[static_cast<std::size_t>((m + M_sum_) * (2 * M_sum_ + 1) + (n + M_sum_))];
    }
    int M_sum() const { return M_sum_; }

    /// f(z) = sum f(z_mn) / g'(z_mn) * g(z) / (z - z_mn), with samples given
    /// in the same (m outer, n inner) order as the nodes.
    cplx operator()(const std::vector<cplx>& samples, cplx z) const {
        const std::size_t count = static_cast<std::size_t>((2 * M_sum_ + 1) * (2 * M_sum_ + 1));
        if (samples.size() != count) throw DomainError("lagrange_interp: sample count does not match M_sum");
        const double snap = 1e-9 * gamma_.q();
        for (int m = -M_sum_; m <= M_sum_; ++m) {
            for (int n = -M_sum_; n <= M_sum_; ++n) {
                if (std::abs(z - gamma_.at(m, n)) < snap) return samples[index(m, n)];
            }
        }
        const cplx gz = g_fn(d_, z, gamma_, opt_.N, opt_.variant);
        cplx acc = 0.0;
        for (int m = -M_sum_; m <= M_sum_; ++m) {
            for (int n = -M_sum_; n <= M_sum_; ++n) {
                const auto i = index(m, n);
                if (samples[i] == cplx(0.0)) continue;
                acc += samples[i] / derivs_[i] * gz / (z - gamma_.at(m, n));
            }
        }
        return acc;
    }

private:
    std::size_t index(int m, int n) const {
        return static_cast<std::size_t>((m + M_sum_) * (2 * M_sum_ + 1) + (n + M_sum_));
    }

    PhiDescriptor d_;
    PerturbedLattice gamma_;
    int M_sum_;
    LagrangeOptions opt_;
    std::vector<cplx> derivs_;
};

/// One-shot Lagrange interpolation: samples[(m,n)] = f(z_mn) for |m|,|n| <= M_sum.
inline cplx lagrange_interp(const PhiDescriptor& d, const PerturbedLattice& gamma, const std::vector<cplx>& samples,
                            cplx z, int M_sum, LagrangeOptions opt = {}) {
    return LagrangeInterpolator(d, gamma, M_sum, opt)(samples, z);
}

}  // namespace glfock
