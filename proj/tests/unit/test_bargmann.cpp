#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "glfock/bargmann.hpp"
#include "glfock/random.hpp"

using Catch::Approx;
using namespace glfock;

namespace {

std::vector<PhiDescriptor> entire_families() {
    return {PhiDescriptor::exponential(),     PhiDescriptor::mittag_leffler(2, 1),
            PhiDescriptor::stretched_gamma(2, 3), PhiDescriptor::gamma_deriv(1),
            PhiDescriptor::gamma_deriv(3, true),  PhiDescriptor::dunkl_rank_one(0.7)};
}

HermiteCoeffs random_coeffs(Rng& rng, int deg) {
    HermiteCoeffs f(static_cast<std::size_t>(deg) + 1);
    for (auto& c : f) c = uniform_box(rng);
    return f;
}

}  // namespace

TEST_CASE("forward transform sends h_n to sqrt(phi_n) z^n") {
    const auto e = PhiDescriptor::exponential();
    HermiteCoeffs d3(4, 0.0);
    d3[3] = 1.0;
    const auto F = bargmann_forward(e, d3);
    CHECK(F[3].real() == Approx(1.0 / std::sqrt(6.0)).epsilon(1e-15));
    CHECK(F[0] == cplx(0.0));
    CHECK(bargmann_forward(e, {}).empty());
    CHECK_THROWS_AS(bargmann_forward(PhiDescriptor::backward_shift(), d3), NonEntireError);
}

TEST_CASE("coefficient unitarity and inversion") {
    Rng rng(11);
    for (const auto& d : entire_families()) {
        CAPTURE(d.name());
        for (int i = 0; i < 10; ++i) {
            const auto f = random_coeffs(rng, 15), g = random_coeffs(rng, 15);
            const cplx lhs = inner_product_l2(f, g);
            const cplx rhs = inner_product_l2phi(d, bargmann_forward(d, f), bargmann_forward(d, g));
            CHECK(std::abs(lhs - rhs) <= 1e-13 * (1.0 + std::abs(lhs)));
            const auto back = bargmann_inverse(d, bargmann_forward(d, f));
            for (std::size_t n = 0; n < f.size(); ++n) {
                CHECK(std::abs(back[n] - f[n]) <= 2 * std::numeric_limits<double>::epsilon() * std::abs(f[n]));
            }
        }
    }
}

TEST_CASE("intertwining with the ladder operators") {
    Rng rng(12);
    for (const auto& d : entire_families()) {
        CAPTURE(d.name());
        for (int i = 0; i < 10; ++i) {
            const auto r = intertwine_residuals(d, random_coeffs(rng, 15));
            CHECK(r.r_lower <= 1e-13);
            CHECK(r.r_raise <= 1e-13);
        }
        const auto z = intertwine_residuals(d, HermiteCoeffs(6, 0.0));
        CHECK(z.r_lower == 0.0);
        CHECK(z.r_raise == 0.0);
    }
    HermiteCoeffs d4(5, 0.0);
    d4[4] = 1.0;
    const auto r = intertwine_residuals(PhiDescriptor::dunkl_rank_one(0.7), d4);
    CHECK(r.r_lower <= 1e-15);
    CHECK(r.r_raise <= 1e-15);
}

TEST_CASE("raising and lowering are adjoint") {
    Rng rng(13);
    for (const auto& d : entire_families()) {
        const auto f = random_coeffs(rng, 12), g = random_coeffs(rng, 13);
        const cplx lhs = inner_product_l2(raise(d, f), g);
        const cplx rhs = inner_product_l2(f, lower(d, g));
        CHECK(std::abs(lhs - rhs) <= 1e-13 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("ladder commutator") {
    const auto e = PhiDescriptor::exponential();
    for (int n = 0; n < 30; ++n) CHECK(ladder_commutator(e, n) == Approx(1.0).epsilon(1e-12));
    // For other families the diagonal is ratio-dependent; check it against
    // the commutator applied to delta_n directly.
    const auto ml = PhiDescriptor::mittag_leffler(2, 1);
    for (int n = 0; n < 10; ++n) {
        HermiteCoeffs dn(static_cast<std::size_t>(n) + 2, 0.0);
        dn[static_cast<std::size_t>(n)] = 1.0;
        const auto lr = lower(ml, raise(ml, dn));
        const auto rl = raise(ml, lower(ml, dn));
        const cplx diag = lr[static_cast<std::size_t>(n)] - (static_cast<std::size_t>(n) < rl.size() ? rl[static_cast<std::size_t>(n)] : 0.0);
        CHECK(diag.real() == Approx(ladder_commutator(ml, n)).epsilon(1e-13));
    }
}

TEST_CASE("sampled Hermite functions transform to single monomials") {
    for (const auto& d : {PhiDescriptor::exponential(), PhiDescriptor::mittag_leffler(2, 1)}) {
        for (int n = 0; n <= 12; ++n) {
            const auto F = bargmann_sample(
                d, [n](double x) { return hermite_fn(static_cast<unsigned>(n), x); }, 16);
            for (int k = 0; k <= 16; ++k) {
                const double target = k == n ? orthonormal_basis_coeff(d, n) : 0.0;
                CAPTURE(d.name(), n, k);
                CHECK(std::abs(F[k] - target) <= 1e-8);
            }
        }
    }
    CHECK_THROWS_AS(bargmann_sample(PhiDescriptor::exponential(), [](double) { return 0.0; }, 201), DomainError);
}

TEST_CASE("classic Bargmann kernel cross-check") {
    // With orthonormal h_n and the weight e^{-|z|^2}, the classic transform is
    // B f(z) = pi^{-1/4} int exp(-z^2/2 + sqrt(2) x z - x^2/2) f(x) dx.
    auto f = [](double x) { return std::exp(-0.5 * (x - 0.5) * (x - 0.5)) * (1.0 + 0.3 * x); };
    const auto F = bargmann_sample(PhiDescriptor::exponential(), f, 60);
    for (const cplx z : {cplx(0.3, 0.2), cplx(-1.0, 0.5), cplx(0.0, -1.2)}) {
        // Trapezoid sum; spectrally accurate for this smooth decaying integrand.
        const double h = 1e-3;
        cplx acc = 0.0;
        for (double x = -14.0; x <= 14.0; x += h) {
            acc += std::exp(-0.5 * z * z + std::sqrt(2.0) * x * z - 0.5 * x * x) * f(x);
        }
        const cplx direct = acc * h * std::pow(std::numbers::pi, -0.25);
        CHECK(std::abs(F.evaluate(z) - direct) < 1e-10);
    }
}
