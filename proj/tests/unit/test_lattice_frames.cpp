#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "glfock/lattice_frames.hpp"
#include "glfock/random.hpp"
#include "oracles.hpp"

using Catch::Approx;
using namespace glfock;

namespace {

const VerifiedWeight& exp_weight() {
    static const auto vw = verify_weight(WeightKernel::registered_for(PhiDescriptor::exponential()), 15, 1e-8);
    return vw;
}

std::vector<cplx> shifted(std::vector<cplx> pts, cplx a) {
    for (auto& z : pts) z += a;
    return pts;
}

}  // namespace

TEST_CASE("density of square lattices") {
    const double inv2pi = 1.0 / (2.0 * std::numbers::pi);
    const auto r1 = density(lattice_points(LatticeSpec{1.0, 20}), {5, 10, 20});
    CHECK(r1.d_minus == Approx(inv2pi).epsilon(1e-3));
    CHECK(r1.d_plus == Approx(inv2pi).epsilon(1e-3));

    const auto r2 = density(lattice_points(LatticeSpec{2.0, 20}), {5, 10, 20, 40});
    CHECK(r2.d_minus == Approx(inv2pi / 4.0).epsilon(1e-3));
    CHECK(r2.d_plus == Approx(inv2pi / 4.0).epsilon(1e-3));

    DensityOptions leb;
    leb.norm = DensityNorm::Lebesgue;
    const auto r3 = density(lattice_points(LatticeSpec{1.0, 20}), {20}, leb);
    CHECK(r3.d_minus == Approx(1.0).epsilon(1e-3));
}

TEST_CASE("density of an empty set is zero") {
    const auto r = density({}, {1.0, 2.0});
    CHECK(r.d_plus == 0.0);
    CHECK(r.d_minus == 0.0);
}

TEST_CASE("density refuses radii the point set cannot support") {
    CHECK_THROWS_AS(density(lattice_points(LatticeSpec{1.0, 4}), {50.0}), MarginError);
}

TEST_CASE("density scales as 1 / c^2 under dilation") {
    const auto base_pts = PerturbedLattice::random(LatticeSpec{1.0, 20}, 0.2, 5).points();
    const auto base = density(base_pts, {4, 8, 16});
    for (double c : {0.5, 2.0}) {
        auto pts = base_pts;
        for (auto& z : pts) z *= c;
        const auto sc = density(pts, {4 * c, 8 * c, 16 * c});
        CHECK(sc.d_minus * c * c == Approx(base.d_minus).epsilon(1e-12));
        CHECK(sc.d_plus * c * c == Approx(base.d_plus).epsilon(1e-12));
    }
}

TEST_CASE("translation operator") {
    const auto& wk = exp_weight().kernel();
    auto one = [](cplx) { return cplx(1.0); };
    CHECK(translation_apply(wk, 0.0, one, cplx(0.3, 0.4)) == cplx(1.0));
    CHECK(std::abs(translation_apply(wk, 1.0, one, 0.0) - std::exp(-0.5)) < 1e-15);

    // Isometry: integrate |T_a f|^2 e^{-|z|^2} / pi on a grid wide enough that
    // the trapezoid rule is spectrally accurate for the Gaussian integrand.
    auto f = [](cplx z) { return std::exp(-0.25 * z * z) + 0.5 * z; };
    const cplx a(0.7, -0.4);
    const double h = 0.05, L = 10.0;
    double lhs = 0.0, rhs = 0.0;
    for (double x = -L; x <= L + 1e-12; x += h) {
        for (double y = -L; y <= L + 1e-12; y += h) {
            const cplx z(x, y);
            const double w = std::exp(-std::norm(z)) / std::numbers::pi * h * h;
            lhs += std::norm(translation_apply(wk, a, f, z)) * w;
            rhs += std::norm(f(z)) * w;
        }
    }
    CHECK(lhs == Approx(rhs).epsilon(1e-10));
}

TEST_CASE("frame bounds of an empty point set vanish") {
    const auto r = frame_bounds(exp_weight(), {}, 6);
    CHECK(r.A == 0.0);
    CHECK(r.B == 0.0);
}

TEST_CASE("adding points never lowers frame bounds") {
    Rng rng(3);
    std::vector<cplx> pts;
    double A = 0.0, B = 0.0;
    for (int i = 0; i < 40; ++i) {
        pts.push_back(2.0 * uniform_box(rng));
        const auto r = frame_bounds(exp_weight(), pts, 10);
        CHECK(r.A >= A - 1e-14);
        CHECK(r.B >= B - 1e-14);
        A = r.A;
        B = r.B;
    }
}

TEST_CASE("dense lattice gives a stable lower bound") {
    const auto pts = lattice_points(LatticeSpec{1.0, 12});
    const auto r = frame_bounds(exp_weight(), pts, 12);
    CHECK(r.A > 0.0);
    CHECK(r.stability < 0.05);
    for (cplx a : {cplx(0.3, 0.2), cplx(0.5, 0.5)}) {
        const auto t = frame_bounds(exp_weight(), shifted(pts, a), 12);
        CHECK(t.A == Approx(r.A).epsilon(0.02));
        CHECK(t.B == Approx(r.B).epsilon(0.02));
    }
}

TEST_CASE("quadrature nodes with their weights reproduce the identity") {
    // (1/pi) int |f|^2 e^{-|z|^2} dA = (1/2pi) int int |f|^2 e^{-x} dx dtheta, x = r^2.
    const int N = 10, T = 32;
    const auto gl = quad::gauss_laguerre(20);
    std::vector<cplx> pts;
    std::vector<double> w;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        for (int j = 0; j < T; ++j) {
            pts.push_back(std::polar(std::sqrt(gl.nodes[i]), 2.0 * std::numbers::pi * j / T));
            w.push_back(gl.scaled_weights[i] / T);
        }
    }
    const auto S = frame_matrix(exp_weight(), pts, N, w);
    const double dev = (S - Eigen::MatrixXcd::Identity(N + 1, N + 1)).cwiseAbs().maxCoeff();
    CHECK(dev < 1e-4);
    CHECK_THROWS_AS(frame_matrix(exp_weight(), pts, N, {1.0}), DomainError);
}

TEST_CASE("least-squares interpolation") {
    const auto& vw = exp_weight();
    const cplx z0(0.4, -0.3), v(1.5, 0.5);
    const int N = 12;
    const auto one = interpolate_ls(vw, {z0}, {v}, N);
    // Expect v k_N(z0, .) / k_N(z0, z0) with k_N(z, w) = sum_n (conj z w)^n / n!.
    double kzz = 0.0;
    for (int n = 0; n <= N; ++n) kzz += std::pow(std::norm(z0), n) / std::tgamma(n + 1.0);
    for (int n = 0; n <= N; ++n) {
        const cplx want = v * std::pow(std::conj(z0), n) / std::tgamma(n + 1.0) / kzz;
        CHECK(std::abs(one.f[n] - want) < 1e-8);
    }

    const auto zero = interpolate_ls(vw, {0.1, cplx(0, 1)}, {0.0, 0.0}, 6);
    CHECK(zero.f.is_zero());

    Rng rng(7);
    std::vector<cplx> pts, vals;
    for (int i = 0; i < 5; ++i) {
        pts.push_back(1.5 * uniform_box(rng));
        vals.push_back(uniform_box(rng));
    }
    const auto r = interpolate_ls(vw, pts, vals, 10);
    CHECK(r.residual <= 1e-8);
    CHECK(r.rank == 5);
    CHECK_FALSE(r.rank_deficient);
    for (std::size_t j = 0; j < pts.size(); ++j) CHECK(std::abs(r.f.evaluate(pts[j]) - vals[j]) < 1e-8);

    CHECK_THROWS_AS(interpolate_ls(vw, {}, {}, 4), DomainError);
    CHECK_THROWS_AS(interpolate_ls(vw, {0.1}, {1.0, 2.0}, 4), DomainError);
}

TEST_CASE("Gabor transform values") {
    const auto e = PhiDescriptor::exponential();
    const double pi = std::numbers::pi;
    CHECK(std::abs(gabor_transform(e, 0, TruncatedSeries{1.0}, 0.0) - 1.0) < 1e-15);
    // Window 0, F = 1: e^{i pi x y} e^{-|z|^2 / 2}
    const cplx z(0.6, 0.8);
    const cplx want0 = std::polar(std::exp(-0.5), pi * 0.48);
    CHECK(std::abs(gabor_transform(e, 0, TruncatedSeries{1.0}, z) - want0) < 1e-15);
    // Window 1, F = z at z = 0.5: (z - pi z) e^{-1/8} / sqrt(pi)
    const cplx g1 = gabor_transform(e, 1, TruncatedSeries{0.0, 1.0}, 0.5);
    CHECK(g1.real() == Approx(0.5 * (1.0 - pi) * std::exp(-0.125) / std::sqrt(pi)).epsilon(1e-14));
    CHECK(std::abs(g1.imag()) < 1e-15);
}

TEST_CASE("Gabor atom reproduces the transform") {
    const auto d = PhiDescriptor::mittag_leffler(2, 1);
    Rng rng(9);
    const int N = 10;
    TruncatedSeries F = TruncatedSeries::zero(N);
    Eigen::VectorXcd c(N + 1);
    for (int m = 0; m <= N; ++m) {
        c[m] = uniform_box(rng);
        F.at(m) = c[m] * orthonormal_basis_coeff(d, m);
    }
    for (int n : {0, 1, 2}) {
        const cplx zeta(0.7, -0.2);
        const cplx direct = gabor_transform(d, n, F, zeta);
        const cplx via_atom = gabor_atom(d, n, zeta, N).dot(c);
        CHECK(std::abs(direct - via_atom) < 1e-12 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("window-0 frame matrix matches the classic Gaussian system") {
    const auto pts = gabor_lattice_points(0.5, 6);
    const auto S = gabor_frame_matrix(PhiDescriptor::exponential(), 0, pts, 10);
    const auto ref = oracle::gaussian_gabor_gram(pts, 10);
    CHECK((S - ref).cwiseAbs().maxCoeff() < 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST_CASE("Fock-side general kernel") {
    const auto e = PhiDescriptor::exponential();
    const cplx z(0.3, 0.7);
    const auto k0 = general_kernel_fockside(e, {1.0}, z, 4);
    CHECK(k0[0] == cplx(1.0));
    const auto k1 = general_kernel_fockside(e, {0.0, 1.0}, z, 4);
    CHECK(std::abs(k1[1] - std::conj(z)) < 1e-15);
    CHECK(std::abs(k1[0]) == 0.0);
    // (conj z w + z D)^2 1 at z = 1: w^2 + 1
    const auto k2 = general_kernel_fockside(e, {0.0, 0.0, 1.0}, 1.0, 4);
    CHECK(std::abs(k2[2] - 1.0) < 1e-15);
    CHECK(std::abs(k2[0] - 1.0) < 1e-15);
    CHECK(std::abs(k2[1]) < 1e-15);
    CHECK_THROWS_AS(general_kernel_fockside(e, {0.0, 0.0, 1.0}, z, 3), DegreeCapError);
}

TEST_CASE("adjoint kernel coefficients") {
    const auto e = PhiDescriptor::exponential();
    const auto c0 = adjoint_kernel_coeffs(e, 0, 5);
    for (int j = 0; j <= 5; ++j) CHECK(c0[static_cast<std::size_t>(j)] == Approx(e.coeff(j)).epsilon(1e-14));
    const auto c1 = adjoint_kernel_coeffs(e, 1, 2);
    CHECK(c1[0] == Approx(1.0 - std::numbers::pi).epsilon(1e-14));

    const auto dk = PhiDescriptor::dunkl_rank_one(0.5);
    const auto cd = adjoint_kernel_coeffs(dk, 1, 2);
    const double want = dk.coeff(2) - std::numbers::pi * dk.coeff(2) * dk.coeff(2) / dk.coeff(3);
    CHECK(cd[2] == Approx(want).epsilon(1e-13));
    CHECK_THROWS_AS(adjoint_kernel_coeffs(PhiDescriptor::backward_shift(), 0, 2), NonEntireError);
}

TEST_CASE("lattice size from a generator matrix") {
    const auto ls = lattice_size({{{0.5, 0.0}, {0.0, 0.4}}});
    CHECK(ls.s == Approx(0.2).epsilon(1e-15));
    CHECK(ls.adjoint_scale == Approx(5.0).epsilon(1e-15));
    CHECK_THROWS_AS(lattice_size({{{1.0, 2.0}, {0.5, 1.0}}}), SingularMatrixError);
}

TEST_CASE("frame sweep") {
    CHECK(frame_sweep(exp_weight(), 0, {}, 10, 6).empty());

    const auto reps = frame_sweep(exp_weight(), 0, {0.5, 2.0, -1.0}, 12, 8);
    REQUIRE(reps.size() == 3);
    const auto ref = oracle::gaussian_gabor_gram(gabor_lattice_points(0.5, 8), 12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ref);
    CHECK(reps[0].A == Approx(es.eigenvalues().minCoeff()).epsilon(1e-10));
    CHECK(reps[0].B == Approx(es.eigenvalues().maxCoeff()).epsilon(1e-10));
    CHECK(reps[0].status == "ok");
    CHECK(reps[1].A < reps[0].A);
    CHECK(std::isnan(reps[2].A));
    CHECK(reps[2].status != "ok");
}

TEST_CASE("canonical dual is biorthogonal on the adjoint lattice") {
    const auto e = PhiDescriptor::exponential();
    const double s = 0.5;
    const auto dual = canonical_dual(e, 0, s, 30, 10);
    const auto rep = biorthogonality_check(e, 0, dual, adjoint_points(s, 3.0));
    CHECK(rep.max_residual <= 1e-3);
    CHECK(rep.points.size() == rep.values.size());

    const HermiteCoeffs zero(dual.size(), 0.0);
    CHECK(biorthogonality_check(e, 0, zero, adjoint_points(s, 3.0)).max_residual == Approx(1.0));
}
