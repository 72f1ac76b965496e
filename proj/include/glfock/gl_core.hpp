#pragma once

// Truncated power series and the two operators that drive everything else:
// the Gelfond-Leontiev derivative D_phi and multiplication by z.

#include <algorithm>
#include <complex>
#include <initializer_list>
#include <vector>

#include "glfock/errors.hpp"
#include "glfock/phi_descriptor.hpp"

namespace glfock {

/// a_0 + a_1 z + ... + a_N z^N with an explicit degree cap N. The zero
/// series with no coefficients has cap -1.
class TruncatedSeries {
public:
    TruncatedSeries() = default;
    TruncatedSeries(std::initializer_list<cplx> c) : coeffs_(c) {}
    explicit TruncatedSeries(std::vector<cplx> c) : coeffs_(std::move(c)) {}

    static TruncatedSeries zero(int cap) {
        return TruncatedSeries(std::vector<cplx>(static_cast<std::size_t>(std::max(cap + 1, 0))));
    }
    static TruncatedSeries monomial(int n, cplx c = 1.0) {
        auto s = zero(n);
        s.coeffs_[static_cast<std::size_t>(n)] = c;
        return s;
    }

    int degree_cap() const { return static_cast<int>(coeffs_.size()) - 1; }
    std::size_t size() const { return coeffs_.size(); }
    bool empty() const { return coeffs_.empty(); }

    /// Coefficient k; zero beyond the cap.
    cplx operator[](int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[static_cast<std::size_t>(k)] : cplx(0.0);
    }
    cplx& at(int k) { return coeffs_.at(static_cast<std::size_t>(k)); }
    const std::vector<cplx>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx(0.0); });
    }

    cplx evaluate(cplx z) const {
        cplx acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    /// Largest |a_k|.
    double max_abs() const {
        double m = 0.0;
        for (auto c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        auto out = zero(std::max(a.degree_cap(), b.degree_cap()));
        for (int k = 0; k <= out.degree_cap(); ++k) out.coeffs_[static_cast<std::size_t>(k)] = a[k] + b[k];
        return out;
    }
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a + (-1.0) * b;
    }
    friend TruncatedSeries operator*(cplx s, const TruncatedSeries& a) {
        auto out = a;
        for (auto& c : out.coeffs_) c *= s;
        return out;
    }
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.coeffs_ == b.coeffs_; }

private:
    std::vector<cplx> coeffs_;
};

/// D_phi: a_k z^k -> a_k (phi_{k-1}/phi_k) z^{k-1}; output cap N - 1.
inline TruncatedSeries gl_derivative(const PhiDescriptor& d, const TruncatedSeries& f) {
    auto out = TruncatedSeries::zero(f.degree_cap() - 1);
    for (int k = 1; k <= f.degree_cap(); ++k) out.at(k - 1) = f[k] * d.ratio(k);
    return out;
}

/// D_phi applied k times. Caps below zero yield the empty series.
inline TruncatedSeries gl_derivative_pow(const PhiDescriptor& d, const TruncatedSeries& f, int k) {
    if (k < 0) throw DomainError("gl_derivative_pow: k must be non-negative");
    TruncatedSeries out = f;
    for (int i = 0; i < k && !out.empty(); ++i) out = gl_derivative(d, out);
    return out;
}

/// M_z: shifts coefficients up one degree; output cap N + 1.
inline TruncatedSeries multiply_z(const TruncatedSeries& f) {
    auto out = TruncatedSeries::zero(f.degree_cap() + 1);
    for (int k = 0; k <= f.degree_cap(); ++k) out.at(k + 1) = f[k];
    return out;
}

/// Degree-N truncation of phi itself.
inline TruncatedSeries phi_series(const PhiDescriptor& d, int N) {
    auto out = TruncatedSeries::zero(N);
    for (int k = 0; k <= N; ++k) out.at(k) = std::exp(d.log_coeff(k));
    return out;
}

/// Coefficients of p(q(z)) through degree N, where p and q are given by
/// their coefficient vectors (real, truncated).
inline std::vector<double> compose_series(const std::vector<double>& p, const std::vector<double>& q, int N) {
    std::vector<double> out(static_cast<std::size_t>(N) + 1, 0.0);
    std::vector<double> power(static_cast<std::size_t>(N) + 1, 0.0);
    power[0] = 1.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        for (int k = 0; k <= N; ++k) out[static_cast<std::size_t>(k)] += p[j] * power[static_cast<std::size_t>(k)];
        std::vector<double> next(static_cast<std::size_t>(N) + 1, 0.0);
        for (int a = 0; a <= N; ++a) {
            if (power[static_cast<std::size_t>(a)] == 0.0) continue;
            for (std::size_t b = 0; b < q.size() && a + static_cast<int>(b) <= N; ++b) {
                next[static_cast<std::size_t>(a) + b] += power[static_cast<std::size_t>(a)] * q[b];
            }
        }
        power = std::move(next);
    }
    return out;
}

}  // namespace glfock
