#pragma once

// Numerical integration kernels shared by the special functions, the Fock
// inner products and the Bargmann sampling route.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "glfock/errors.hpp"

namespace glfock::quad {

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    double absval;  // Kronrod estimate of int |f|, for the rounding floor
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F, class T>
Segment<T> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T kron = fc * kWgk[7];
    T gauss = fc * kWg[3];
    double absval = magnitude(fc) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        kron += (f1 + f2) * kWgk[j];
        absval += (magnitude(f1) + magnitude(f2)) * kWgk[j];
        if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, magnitude(kron - gauss), absval * h};
}

inline std::string fmt_err(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b], bisecting the
/// worst segment until the summed error estimate drops below
/// max(abs_tol, rel_tol * |I|), or below the rounding floor 50 eps int |f|
/// when cancellation makes the relative target unreachable. Throws
/// ConvergenceError after max_segments.
template <class F>
auto integrate(F f, double a, double b, double abs_tol, double rel_tol, int max_segments = 4000)
    -> Result<std::decay_t<std::invoke_result_t<F&, double>>> {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    Result<T> out;
    if (a == b) return out;
    std::priority_queue<detail::Segment<T>> heap;
    auto first = detail::gk15<F, T>(f, a, b);
    heap.push(first);
    T total = first.value;
    double err = first.error;
    double absval = first.absval;
    int segments = 1;
    constexpr double kFloor = 50.0 * std::numeric_limits<double>::epsilon();
    while (err > std::max({abs_tol, rel_tol * detail::magnitude(total), kFloor * absval})) {
        if (segments >= max_segments) {
            throw ConvergenceError("adaptive quadrature did not converge on [" + std::to_string(a) +
                                   ", " + std::to_string(b) + "], error estimate " +
                                   detail::fmt_err(err) + ", integral " + detail::fmt_err(detail::magnitude(total)));
        }
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::gk15<F, T>(f, worst.a, mid);
        auto right = detail::gk15<F, T>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        absval += left.absval + right.absval - worst.absval;
        heap.push(left);
        heap.push(right);
        ++segments;
        // Recompute the sums occasionally to shed accumulated rounding.
        if (segments % 64 == 0) {
            auto copy = heap;
            total = T{};
            err = 0.0;
            absval = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                absval += copy.top().absval;
                copy.pop();
            }
        }
    }
    out.value = total;
    out.error = err;
    out.evaluations = 15 * (2 * segments - 1);
    return out;
}

/// Integral over [a, inf) via t = a + u / (1 - u).
template <class F>
auto integrate_to_infinity(F f, double a, double abs_tol, double rel_tol, int max_segments = 4000) {
    auto mapped = [&f, a](double u) {
        using T = std::decay_t<std::invoke_result_t<F&, double>>;
        if (u >= 1.0) return T{};
        const double one_minus = 1.0 - u;
        const double t = a + u / one_minus;
        return f(t) * (1.0 / (one_minus * one_minus));
    };
    return integrate(mapped, 0.0, 1.0, abs_tol, rel_tol, max_segments);
}

/// Nodes and weights of an n-point Gauss rule. `scaled_weights` are
/// weights / w(x_i): multiply by the integrand without its weight factor.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> scaled_weights;
};

namespace detail {

// Orthonormal Hermite functions h_0..h_{n-1} at x, and h_n.
inline void hermite_functions(int n, double x, std::vector<double>& h) {
    h.assign(static_cast<std::size_t>(n) + 1, 0.0);
    h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (n >= 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (int k = 1; k < n; ++k) {
        h[k + 1] = std::sqrt(2.0 / (k + 1)) * x * h[k] - std::sqrt(static_cast<double>(k) / (k + 1)) * h[k - 1];
    }
}

inline std::vector<double> jacobi_eigenvalues(const Eigen::VectorXd& diag, const Eigen::VectorXd& off) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceError("Jacobi matrix eigen-solve failed");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace detail

/// Gauss-Hermite rule for weight e^{-x^2}. Nodes from Golub-Welsch polished
/// by Newton on the orthonormal Hermite recurrence; weights from the
/// Christoffel formula 1 / sum_k h_k(x)^2 so no e^{x^2} is ever formed.
inline GaussRule gauss_hermite(int n) {
    if (n < 1) throw DomainError("gauss_hermite: n must be positive");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd off(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * k);
    auto nodes = detail::jacobi_eigenvalues(diag, off);

    GaussRule rule;
    std::vector<double> h;
    for (double x : nodes) {
        for (int it = 0; it < 3; ++it) {
            detail::hermite_functions(n, x, h);
            // h_n'(x) = sqrt(2n) h_{n-1}(x) - x h_n(x)
            const double deriv = std::sqrt(2.0 * n) * h[n - 1] - x * h[n];
            if (deriv == 0.0) break;
            const double step = h[n] / deriv;
            x -= step;
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        detail::hermite_functions(n, x, h);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += h[k] * h[k];
        rule.nodes.push_back(x);
        rule.scaled_weights.push_back(1.0 / s);
        rule.weights.push_back(std::exp(-x * x) / s);
    }
    return rule;
}

/// Gauss-Laguerre rule for weight e^{-x} on [0, inf).
inline GaussRule gauss_laguerre(int n) {
    if (n < 1 || n > 150) throw DomainError("gauss_laguerre: n must lie in [1, 150]");
    Eigen::VectorXd diag(n);
    Eigen::VectorXd off(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + 1.0;
    for (int k = 1; k < n; ++k) off[k - 1] = k;
    auto nodes = detail::jacobi_eigenvalues(diag, off);

    auto laguerre = [n](double x, std::vector<double>& L) {
        L.assign(static_cast<std::size_t>(n) + 1, 0.0);
        L[0] = 1.0;
        if (n >= 1) L[1] = 1.0 - x;
        for (int k = 1; k < n; ++k) L[k + 1] = ((2.0 * k + 1.0 - x) * L[k] - k * L[k - 1]) / (k + 1.0);
    };
    GaussRule rule;
    std::vector<double> L;
    for (double x : nodes) {
        for (int it = 0; it < 3; ++it) {
            laguerre(x, L);
            // x L_n'(x) = n (L_n(x) - L_{n-1}(x))
            const double deriv = n * (L[n] - L[n - 1]) / x;
            if (deriv == 0.0) break;
            const double step = L[n] / deriv;
            x -= step;
            if (std::abs(step) < 1e-15 * std::max(1.0, x)) break;
        }
        laguerre(x, L);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += L[k] * L[k];
        rule.nodes.push_back(x);
        rule.weights.push_back(1.0 / s);
        rule.scaled_weights.push_back(std::exp(x) / s);
    }
    return rule;
}

}  // namespace glfock::quad
