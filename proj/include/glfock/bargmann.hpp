#pragma once

// Modified Bargmann transform h_n -> sqrt(phi_n) z^n, on coefficients first
// and on sampled functions through Gauss-Hermite quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "glfock/errors.hpp"
#include "glfock/fock_space.hpp"
#include "glfock/gl_core.hpp"
#include "glfock/quadrature.hpp"
#include "glfock/special_functions.hpp"

namespace glfock {

/// Coefficients f_n = <h_n, f> against the orthonormal Hermite functions.
using HermiteCoeffs = std::vector<cplx>;

namespace detail {
inline void require_entire(const PhiDescriptor& d, const char* op) {
    if (!d.entire()) throw NonEntireError(std::string(op) + ": " + d.name() + " is not entire");
}

// sqrt(phi_{n-1} / phi_n); the backward shift has ratio 1 and is allowed
// for the ladder operators.
inline double ladder_ratio(const PhiDescriptor& d, int n) { return std::sqrt(d.ratio(n)); }
}  // namespace detail

inline TruncatedSeries bargmann_forward(const PhiDescriptor& d, const HermiteCoeffs& f) {
    detail::require_entire(d, "bargmann_forward");
    auto out = TruncatedSeries::zero(static_cast<int>(f.size()) - 1);
    for (std::size_t n = 0; n < f.size(); ++n) {
        out.at(static_cast<int>(n)) = f[n] * orthonormal_basis_coeff(d, static_cast<int>(n));
    }
    return out;
}

inline HermiteCoeffs bargmann_inverse(const PhiDescriptor& d, const TruncatedSeries& F) {
    detail::require_entire(d, "bargmann_inverse");
    HermiteCoeffs out(F.size());
    for (std::size_t n = 0; n < F.size(); ++n) {
        out[n] = F[static_cast<int>(n)] / orthonormal_basis_coeff(d, static_cast<int>(n));
    }
    return out;
}

/// f_n = int h_n(x) f(x) dx for n <= N by an n_quad-point Gauss-Hermite rule
/// (integrand f(x) h_n(x) e^{x^2} against e^{-x^2}), then the forward map.
/// f should decay like a Hermite function for the rule to be accurate.
inline TruncatedSeries bargmann_sample(const PhiDescriptor& d, const std::function<double(double)>& f, int N,
                                       int n_quad = 0) {
    detail::require_entire(d, "bargmann_sample");
    if (N < 0) throw DomainError("bargmann_sample: N must be non-negative");
    if (N > 200) throw DomainError("bargmann_sample: N above the Hermite stability budget of 200");
    if (n_quad == 0) n_quad = std::max(2 * N + 40, 80);
    const auto rule = quad::gauss_hermite(n_quad);
    HermiteCoeffs coeffs(static_cast<std::size_t>(N) + 1, 0.0);
    std::vector<double> h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        const double fx = f(x);
        if (fx == 0.0) continue;
        // scaled weight = w_i e^{x_i^2}, so the sum needs only h_n(x_i) f(x_i).
        quad::detail::hermite_functions(N, x, h);
        const double w = rule.scaled_weights[i] * fx;
        for (int n = 0; n <= N; ++n) coeffs[static_cast<std::size_t>(n)] += w * h[static_cast<std::size_t>(n)];
    }
    return bargmann_forward(d, coeffs);
}

/// Raising operator: (a* f)_n = sqrt(phi_{n-1}/phi_n) f_{n-1}.
inline HermiteCoeffs raise(const PhiDescriptor& d, const HermiteCoeffs& f) {
    HermiteCoeffs out(f.size() + 1, 0.0);
    for (std::size_t n = 1; n <= f.size(); ++n) out[n] = detail::ladder_ratio(d, static_cast<int>(n)) * f[n - 1];
    return out;
}

/// Lowering operator: (a f)_{n-1} = sqrt(phi_{n-1}/phi_n) f_n.
inline HermiteCoeffs lower(const PhiDescriptor& d, const HermiteCoeffs& f) {
    if (f.empty()) return {};
    HermiteCoeffs out(f.size() - 1, 0.0);
    for (std::size_t n = 1; n < f.size(); ++n) out[n - 1] = detail::ladder_ratio(d, static_cast<int>(n)) * f[n];
    return out;
}

struct IntertwineResiduals {
    double r_lower = 0.0;  // max |B(a f) - D_phi B f|
    double r_raise = 0.0;  // max |B(a* f) - z B f|
};

inline IntertwineResiduals intertwine_residuals(const PhiDescriptor& d, const HermiteCoeffs& f) {
    detail::require_entire(d, "intertwine_residuals");
    const auto Bf = bargmann_forward(d, f);
    IntertwineResiduals out;
    const auto lhs_l = bargmann_forward(d, lower(d, f));
    const auto rhs_l = gl_derivative(d, Bf);
    for (int k = 0; k <= std::max(lhs_l.degree_cap(), rhs_l.degree_cap()); ++k) {
        out.r_lower = std::max(out.r_lower, std::abs(lhs_l[k] - rhs_l[k]));
    }
    const auto lhs_r = bargmann_forward(d, raise(d, f));
    const auto rhs_r = multiply_z(Bf);
    for (int k = 0; k <= std::max(lhs_r.degree_cap(), rhs_r.degree_cap()); ++k) {
        out.r_raise = std::max(out.r_raise, std::abs(lhs_r[k] - rhs_r[k]));
    }
    return out;
}

/// The commutator [a, a*] on delta_n: returns the single diagonal entry
/// phi_n/phi_{n+1} - phi_{n-1}/phi_n (the second term absent at n = 0).
inline double ladder_commutator(const PhiDescriptor& d, int n) {
    const double up = d.ratio(n + 1);
    const double down = n == 0 ? 0.0 : d.ratio(n);
    return up - down;
}

inline cplx inner_product_l2(const HermiteCoeffs& f, const HermiteCoeffs& g) {
    cplx acc = 0.0;
    for (std::size_t n = 0; n < std::min(f.size(), g.size()); ++n) acc += std::conj(f[n]) * g[n];
    return acc;
}

}  // namespace glfock
