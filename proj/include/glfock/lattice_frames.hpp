#pragma once

// Point-set densities, translation, Gabor-type transforms and empirical
// frame bounds on truncated Fock spaces.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "glfock/bargmann.hpp"
#include "glfock/errors.hpp"
#include "glfock/fock_space.hpp"
#include "glfock/gl_core.hpp"
#include "glfock/phi_descriptor.hpp"
#include "glfock/weierstrass.hpp"

namespace glfock {

// ---------------------------------------------------------------- density

enum class DensityNorm { TwoPi, Lebesgue };  // n / (2 pi r^2) or n / r^2

struct DensityOptions {
    DensityNorm norm = DensityNorm::TwoPi;
    cplx center = 0.0;
    double half_width = 0.0;  // scan box [c - W, c + W]^2; 0 = derived from the points
    int shifts = 21;          // translate origins per axis
    double margin = 1.0;      // allowed gap between the scan box and the point hull
};

struct DensityReport {
    double d_plus = 0.0;
    double d_minus = 0.0;
    std::vector<double> r_sequence;
    std::vector<std::pair<int, int>> counts;  // (n_min, n_max) per radius
};

/// Smallest and largest number of points in translates x0 + [0, r)^2 of the
/// unit square scaled by r, with origins on a grid inside the scan box.
inline DensityReport density(const std::vector<cplx>& points, const std::vector<double>& radii,
                             const DensityOptions& opt = {}) {
    DensityReport rep;
    rep.r_sequence = radii;
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (!(radii[i] > radii[i - 1])) throw DomainError("density: radii must be increasing");
    }
    if (points.empty() || radii.empty()) {
        rep.counts.assign(radii.size(), {0, 0});
        return rep;
    }
    double xmin = points[0].real(), xmax = xmin, ymin = points[0].imag(), ymax = ymin;
    for (const auto& p : points) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    const double cx = opt.center.real(), cy = opt.center.imag();
    double W = opt.half_width;
    if (W <= 0.0) W = std::min({cx - xmin, xmax - cx, cy - ymin, ymax - cy});
    if (cx - W < xmin - opt.margin || cx + W > xmax + opt.margin || cy - W < ymin - opt.margin ||
        cy + W > ymax + opt.margin) {
        throw MarginError("density: scan box exceeds the region covered by the points");
    }
    if (radii.back() > 2.0 * W) throw MarginError("density: largest radius does not fit in the scan box");

    std::vector<cplx> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    auto count_in = [&](double x0, double y0, double r) {
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), x0, [](cplx p, double v) { return p.real() < v; });
        int c = 0;
        for (auto it = lo; it != sorted.end() && it->real() < x0 + r; ++it) {
            if (it->imag() >= y0 && it->imag() < y0 + r) ++c;
        }
        return c;
    };
    for (double r : radii) {
        int nmin = std::numeric_limits<int>::max(), nmax = 0;
        const double span = 2.0 * W - r;
        for (int a = 0; a < opt.shifts; ++a) {
            for (int b = 0; b < opt.shifts; ++b) {
                const double fa = opt.shifts == 1 ? 0.0 : static_cast<double>(a) / (opt.shifts - 1);
                const double fb = opt.shifts == 1 ? 0.0 : static_cast<double>(b) / (opt.shifts - 1);
                const int c = count_in(cx - W + fa * span, cy - W + fb * span, r);
                nmin = std::min(nmin, c);
                nmax = std::max(nmax, c);
            }
        }
        rep.counts.emplace_back(nmin, nmax);
    }
    const double r = radii.back();
    const double denom = opt.norm == DensityNorm::TwoPi ? 2.0 * std::numbers::pi * r * r : r * r;
    rep.d_minus = rep.counts.back().first / denom;
    rep.d_plus = rep.counts.back().second / denom;
    return rep;
}

/// Truncated square lattice as a flat point list.
inline std::vector<cplx> lattice_points(const LatticeSpec& lat) {
    std::vector<cplx> out;
    for (int m = -lat.trunc_M; m <= lat.trunc_M; ++m)
        for (int n = -lat.trunc_M; n <= lat.trunc_M; ++n) out.push_back(lat.point(m, n));
    return out;
}

// ------------------------------------------------------------ translation

/// (T_a f)(z) = sqrt(K(-|z-a|^2) / K(-|z|^2)) f(z - a).
inline cplx translation_apply(const WeightKernel& wk, cplx a, const std::function<cplx(cplx)>& f, cplx z) {
    const double lden = wk.log_value(std::norm(z));
    if (!std::isfinite(lden)) throw DomainError("translation_apply: weight vanishes at z");
    const double lnum = wk.log_value(std::norm(z - a));
    return std::exp(0.5 * (lnum - lden)) * f(z - a);
}

// ---------------------------------------------------------- frame bounds

struct FrameReport {
    double A = 0.0;
    double B = 0.0;
    int basis_dim = 0;   // truncation N of {e_0..e_N}
    int n_points = 0;
    double condition = 0.0;
    double stability = 0.0;  // max relative change of (A, B) from N-1 to N
    double A_prev = 0.0;
    double B_prev = 0.0;
    std::string status = "ok";
};

namespace detail {

inline std::pair<double, double> extreme_eigs(const Eigen::MatrixXcd& S) {
    if (S.rows() == 0) return {0.0, 0.0};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("frame_bounds: eigen-solver failed");
    const auto& ev = es.eigenvalues();
    return {std::max(ev[0], 0.0), std::max(ev[ev.size() - 1], 0.0)};
}

inline double rel_change(double now, double before) {
    if (now == before) return 0.0;
    const double scale = std::max(std::abs(now), std::abs(before));
    return std::abs(now - before) / scale;
}

inline FrameReport report_from_matrix(const Eigen::MatrixXcd& S, int N, int n_points) {
    FrameReport rep;
    rep.basis_dim = N;
    rep.n_points = n_points;
    std::tie(rep.A, rep.B) = extreme_eigs(S);
    if (N >= 1) {
        std::tie(rep.A_prev, rep.B_prev) = extreme_eigs(S.topLeftCorner(N, N));
        rep.stability = std::max(rel_change(rep.A, rep.A_prev), rel_change(rep.B, rep.B_prev));
    }
    rep.condition = rep.A > 0.0 ? rep.B / rep.A : std::numeric_limits<double>::infinity();
    return rep;
}

}  // namespace detail

/// Frame matrix S_mn = sum_j w_j K(-|z_j|^2) conj(e_m(z_j)) e_n(z_j) over the
/// orthonormal basis e_n = sqrt(phi_n) z^n, n <= N. Per-point weights w_j
/// default to 1. Entries are built in log space and summed in point order.
inline Eigen::MatrixXcd frame_matrix(const VerifiedWeight& vw, const std::vector<cplx>& points, int N,
                                     const std::vector<double>& point_weights = {}) {
    if (!vw.kernel().pointwise_nonnegative()) {
        throw SignedMeasureError("frame_bounds: weight is not pointwise non-negative");
    }
    if (!point_weights.empty() && point_weights.size() != points.size()) {
        throw DomainError("frame_bounds: point weight count does not match the point count");
    }
    const auto& d = vw.desc();
    const int dim = N + 1;
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<double> half_log_phi(static_cast<std::size_t>(dim));
    for (int n = 0; n < dim; ++n) half_log_phi[static_cast<std::size_t>(n)] = 0.5 * d.log_coeff(n);
    Eigen::VectorXcd v(dim);
    for (std::size_t j = 0; j < points.size(); ++j) {
        const cplx z = points[j];
        const double wj = point_weights.empty() ? 1.0 : point_weights[j];
        if (wj < 0.0) throw SignedMeasureError("frame_bounds: negative point weight");
        const double base = 0.5 * (vw.kernel().log_value(std::norm(z)) + std::log(wj));
        const double r = std::abs(z);
        const double th = std::arg(z);
        for (int n = 0; n < dim; ++n) {
            if (r == 0.0) {
                v[n] = n == 0 ? std::exp(base + half_log_phi[0]) : 0.0;
            } else {
                v[n] = std::polar(std::exp(base + half_log_phi[static_cast<std::size_t>(n)] + n * std::log(r)), n * th);
            }
        }
        S.noalias() += v.conjugate() * v.transpose();
    }
    return S;
}

/// A and B as the extreme eigenvalues of the frame matrix, with the N - 1
/// leading block giving the stability figure.
inline FrameReport frame_bounds(const VerifiedWeight& vw, const std::vector<cplx>& points, int N,
                                const std::vector<double>& point_weights = {}) {
    if (N < 0) throw DomainError("frame_bounds: N must be non-negative");
    const auto S = frame_matrix(vw, points, N, point_weights);
    return detail::report_from_matrix(S, N, static_cast<int>(points.size()));
}

// ------------------------------------------------------ interpolation

struct InterpolationResult {
    TruncatedSeries f;
    double residual = 0.0;      // sqrt(sum K_j |f(z_j) - a_j|^2)
    int rank = 0;
    bool rank_deficient = false;
};

/// Regularized least squares in the orthonormal coordinates c_n:
/// minimize sum_j K_j |f(z_j) - a_j|^2 + mu ||f||^2, mu = 1e-12 trace(V V^H) / n_points.
inline InterpolationResult interpolate_ls(const VerifiedWeight& vw, const std::vector<cplx>& points,
                                          const std::vector<cplx>& values, int N) {
    if (points.empty()) throw DomainError("interpolate_ls: need at least one point");
    if (points.size() != values.size()) throw DomainError("interpolate_ls: value count does not match point count");
    const auto& d = vw.desc();
    const int P = static_cast<int>(points.size());
    const int dim = N + 1;
    Eigen::MatrixXcd V(P, dim);
    Eigen::VectorXcd b(P);
    for (int j = 0; j < P; ++j) {
        const cplx z = points[static_cast<std::size_t>(j)];
        const double half_lk = 0.5 * vw.kernel().log_value(std::norm(z));
        for (int n = 0; n < dim; ++n) {
            V(j, n) = z == cplx(0.0) ? (n == 0 ? std::exp(half_lk + 0.5 * d.log_coeff(0)) : 0.0)
                                     : std::exp(half_lk + 0.5 * d.log_coeff(n)) * std::pow(z, n);
        }
        b[j] = std::exp(half_lk) * values[static_cast<std::size_t>(j)];
    }
    Eigen::MatrixXcd G = V * V.adjoint();
    const double mu = 1e-12 * G.trace().real() / P;
    G.diagonal().array() += mu;
    const Eigen::VectorXcd y = G.ldlt().solve(b);
    const Eigen::VectorXcd c = V.adjoint() * y;

    InterpolationResult out;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(V);
    qr.setThreshold(1e-12);
    out.rank = static_cast<int>(qr.rank());
    out.rank_deficient = out.rank < std::min(P, dim);
    out.f = TruncatedSeries::zero(N);
    for (int n = 0; n < dim; ++n) out.f.at(n) = c[n] * orthonormal_basis_coeff(d, n);
    out.residual = (V * c - b).norm();
    return out;
}

// ------------------------------------------------------ Gabor-type maps

inline double binomial(int n, int k) {
    return std::exp(log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0));
}

/// e^{i pi x y} / sqrt(pi^n phi_n) * 1/phi(|z|^2/2) * sum_k C(n,k) (-pi conj z)^k D_phi^k F(z).
inline cplx gabor_transform(const PhiDescriptor& d, int n, const TruncatedSeries& F, cplx z) {
    if (!d.entire()) throw NonEntireError("gabor_transform: descriptor is not entire");
    if (n < 0) throw DomainError("gabor_transform: window index must be non-negative");
    cplx sum = 0.0;
    TruncatedSeries Dk = F;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) Dk = gl_derivative(d, Dk);
        if (Dk.empty()) break;
        sum += std::round(binomial(n, k)) * std::pow(-std::numbers::pi * std::conj(z), k) * Dk.evaluate(z);
    }
    const double x = z.real(), y = z.imag();
    const double lpre = -0.5 * (n * std::log(std::numbers::pi) + d.log_coeff(n)) - log_phi_real(d, 0.5 * std::norm(z));
    return std::polar(std::exp(lpre), std::numbers::pi * x * y) * sum;
}

/// Coefficients a_m = conj(l_zeta(e_m)), m <= N, of the atom whose inner
/// product with F in the orthonormal basis is the Gabor transform at zeta.
/// Built in log space so large |zeta| does not overflow.
inline Eigen::VectorXcd gabor_atom(const PhiDescriptor& d, int n, cplx zeta, int N) {
    if (!d.entire()) throw NonEntireError("gabor_atom: descriptor is not entire");
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(N + 1);
    const double r = std::abs(zeta);
    const double th = std::arg(zeta);
    const double lpre = -0.5 * (n * std::log(std::numbers::pi) + d.log_coeff(n)) - log_phi_real(d, 0.5 * r * r);
    const double phase0 = std::numbers::pi * zeta.real() * zeta.imag();
    for (int m = 0; m <= N; ++m) {
        // D^k e_m = sqrt(phi_m) (phi_{m-k} / phi_m) w^{m-k}
        cplx s = 0.0;
        for (int k = 0; k <= std::min(n, m); ++k) {
            if (r == 0.0 && (k > 0 || m > 0)) continue;
            const double lmag = std::log(binomial(n, k)) + k * std::log(std::numbers::pi) +
                                d.log_coeff(m - k) - 0.5 * d.log_coeff(m) +
                                (r == 0.0 ? 0.0 : (m * std::log(r)));
            // (-pi conj zeta)^k zeta^{m-k}: phase (m - 2k) th, sign (-1)^k
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            s += sign * std::polar(std::exp(lmag), (m - 2 * k) * th);
        }
        a[m] = std::conj(std::polar(std::exp(lpre), phase0) * s);
    }
    return a;
}

/// Frame matrix sum_zeta a a^H of Gabor atoms at the given Fock-side points.
inline Eigen::MatrixXcd gabor_frame_matrix(const PhiDescriptor& d, int n, const std::vector<cplx>& points, int N) {
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    for (const auto& z : points) {
        const auto a = gabor_atom(d, n, z, N);
        S.noalias() += a * a.adjoint();
    }
    return S;
}

/// Fock-side sample points of the square time-frequency lattice of cell
/// area s: zeta = sqrt(pi s) (m + i n), |m|, |n| <= M.
inline std::vector<cplx> gabor_lattice_points(double s, int M) {
    return lattice_points(LatticeSpec{std::sqrt(std::numbers::pi * s), M});
}

/// Sum_j c_j (conj(z) M_w + z D_phi)^j 1, applied word by word.
inline TruncatedSeries general_kernel_fockside(const PhiDescriptor& d, const std::vector<cplx>& c, cplx z, int N) {
    const int J = static_cast<int>(c.size()) - 1;
    if (2 * J > N) throw DegreeCapError("general_kernel_fockside: need 2 J <= N");
    TruncatedSeries term{1.0};
    TruncatedSeries acc = TruncatedSeries::zero(N);
    for (int j = 0; j <= J; ++j) {
        if (j > 0) term = std::conj(z) * multiply_z(term) + z * gl_derivative(d, term);
        acc = acc + c[static_cast<std::size_t>(j)] * term;
    }
    return acc;
}

/// Coefficient of (conj(z) w)^j in A* phi(conj(z) w):
/// sum_{k=0}^n C(n,k) (-pi)^k phi_j^2 / phi_{j+k}, j = 0..J.
inline std::vector<double> adjoint_kernel_coeffs(const PhiDescriptor& d, int n, int J) {
    if (!d.entire()) throw NonEntireError("adjoint_kernel_coeffs: descriptor is not entire");
    std::vector<double> out;
    for (int j = 0; j <= J; ++j) {
        double s = 0.0;
        for (int k = 0; k <= n; ++k) {
            s += std::round(binomial(n, k)) * std::pow(-std::numbers::pi, k) *
                 std::exp(2.0 * d.log_coeff(j) - d.log_coeff(j + k));
        }
        out.push_back(s);
    }
    return out;
}

struct LatticeSize {
    double s = 0.0;
    double adjoint_scale = 0.0;
    double density = 0.0;
};

/// s = |det C| of a generator matrix, adjoint lattice scale 1/s, density 1/s.
inline LatticeSize lattice_size(const std::array<std::array<double, 2>, 2>& C) {
    const double det = C[0][0] * C[1][1] - C[0][1] * C[1][0];
    if (det == 0.0) throw SingularMatrixError("lattice_size: generator matrix is singular");
    const double s = std::abs(det);
    return {s, 1.0 / s, 1.0 / s};
}

/// For each lattice size s: frame bounds of the window-n Gabor system on the
/// square lattice of cell area s, truncated to |m|,|n| <= M and basis
/// degree N. Sizes run concurrently; reports come back in input order.
inline std::vector<FrameReport> frame_sweep(const VerifiedWeight& vw, int window_n, const std::vector<double>& s_values,
                                            int N, int M) {
    if (!vw.kernel().pointwise_nonnegative()) throw SignedMeasureError("frame_sweep: weight is signed");
    const PhiDescriptor d = vw.desc();
    auto one = [d, window_n, N, M](double s) {
        FrameReport rep;
        try {
            if (!(s > 0.0)) throw DomainError("frame_sweep: lattice size must be positive");
            const auto pts = gabor_lattice_points(s, M);
            rep = detail::report_from_matrix(gabor_frame_matrix(d, window_n, pts, N), N, static_cast<int>(pts.size()));
        } catch (const Error& e) {
            rep.basis_dim = N;
            rep.status = e.what();
            rep.A = rep.B = std::numeric_limits<double>::quiet_NaN();
        }
        return rep;
    };
    std::vector<std::future<FrameReport>> jobs;
    for (double s : s_values) jobs.push_back(std::async(std::launch::async, one, s));
    std::vector<FrameReport> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

/// Canonical dual window in Hermite coefficients, divided by the lattice
/// size: gamma = S^{-1} g / s, g the window-n atom at the origin.
inline HermiteCoeffs canonical_dual(const PhiDescriptor& d, int window_n, double s, int N, int M) {
    const auto pts = gabor_lattice_points(s, M);
    const auto S = gabor_frame_matrix(d, window_n, pts, N);
    const auto g = gabor_atom(d, window_n, 0.0, N);
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(S);
    if (ldlt.info() != Eigen::Success) throw SingularMatrixError("canonical_dual: frame matrix factorization failed");
    const Eigen::VectorXcd gam = ldlt.solve(g) / s;
    return HermiteCoeffs(gam.data(), gam.data() + gam.size());
}

/// Adjoint-lattice points (Fock coordinates) with time-frequency radius <= R:
/// zeta = sqrt(pi / s) (k + i l).
inline std::vector<cplx> adjoint_points(double s, double R) {
    std::vector<cplx> out;
    const int K = static_cast<int>(std::ceil(R * std::sqrt(s))) + 1;
    for (int k = -K; k <= K; ++k)
        for (int l = -K; l <= K; ++l)
            if (std::abs(cplx(k, l)) / std::sqrt(s) <= R + 1e-12) out.push_back(std::sqrt(std::numbers::pi / s) * cplx(k, l));
    return out;
}

struct BiorthogonalityReport {
    std::vector<cplx> points;
    std::vector<cplx> values;   // <k(mu, .), gamma>
    double max_residual = 0.0;  // max |value - delta_{mu,0}|
};

/// <k(mu, .), gamma> at each adjoint point mu, against delta_{mu, 0}.
inline BiorthogonalityReport biorthogonality_check(const PhiDescriptor& d, int window_n, const HermiteCoeffs& dual,
                                                   const std::vector<cplx>& adjoint_pts) {
    BiorthogonalityReport rep;
    const int N = static_cast<int>(dual.size()) - 1;
    Eigen::Map<const Eigen::VectorXcd> gam(dual.data(), static_cast<Eigen::Index>(dual.size()));
    for (const auto& mu : adjoint_pts) {
        const auto a = gabor_atom(d, window_n, mu, N);
        const cplx v = a.dot(gam);  // conjugates a
        rep.points.push_back(mu);
        rep.values.push_back(v);
        const double target = std::abs(mu) < 1e-12 ? 1.0 : 0.0;
        rep.max_residual = std::max(rep.max_residual, std::abs(v - target));
    }
    return rep;
}

}  // namespace glfock
