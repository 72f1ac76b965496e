#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "glfock/special_functions.hpp"
#include "oracles.hpp"

using Catch::Approx;
using glfock::cplx;

TEST_CASE("gamma at integers and one half") {
    CHECK(glfock::gamma(5.0) == Approx(24.0).epsilon(1e-15));
    CHECK(glfock::gamma(1.0) == 1.0);
    CHECK(glfock::gamma(0.5) == Approx(oracle::gamma(0.5)).epsilon(1e-15));
    CHECK(glfock::gamma(0.5) == Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("gamma rejects non-positive arguments and overflow") {
    CHECK_THROWS_AS(glfock::gamma(0.0), glfock::DomainError);
    CHECK_THROWS_AS(glfock::gamma(-3.0), glfock::DomainError);
    CHECK_THROWS_AS(glfock::gamma(172.0), glfock::OverflowError);
}

TEST_CASE("log_gamma agrees with the high precision oracle") {
    for (double x : {0.3, 1.0, 2.5, 14.9, 15.0, 15.1, 40.0, 170.5, 1000.0}) {
        CAPTURE(x);
        CHECK(glfock::log_gamma(x) == Approx(oracle::log_gamma(x)).epsilon(2e-15));
    }
}

TEST_CASE("digamma") {
    CHECK(glfock::digamma(1.0) == Approx(-0.57721566490153286).epsilon(1e-15));
    CHECK(glfock::digamma(2.0) == Approx(1.0 - glfock::kEulerGamma).epsilon(1e-15));
    // psi(10) from psi(1) by the recurrence psi(x + 1) = psi(x) + 1/x.
    double rec = -glfock::kEulerGamma;
    for (int k = 1; k < 10; ++k) rec += 1.0 / k;
    CHECK(glfock::digamma(10.0) == Approx(rec).epsilon(1e-15));
    for (double x : {0.1, 0.7, 3.3, 9.99, 25.0}) {
        CAPTURE(x);
        CHECK(glfock::digamma(x) == Approx(oracle::digamma(x)).epsilon(1e-14));
    }
}

TEST_CASE("harmonic numbers start from an empty sum") {
    CHECK(glfock::harmonic(0) == 0.0);
    CHECK(glfock::harmonic(1) == 1.0);
    CHECK(glfock::harmonic(4) == Approx(25.0 / 12.0).epsilon(1e-15));
    // digamma(n + 1) = -gamma + H_n
    for (unsigned n = 0; n < 8; ++n) {
        CHECK(glfock::digamma(n + 1.0) == Approx(-glfock::kEulerGamma + glfock::harmonic(n)).margin(1e-15));
    }
}

TEST_CASE("gamma derivatives") {
    CHECK(glfock::gamma_deriv(0, 3.0) == Approx(2.0).epsilon(1e-15));
    CHECK(glfock::gamma_deriv(1, 2.0) == Approx(1.0 - glfock::kEulerGamma).epsilon(1e-13));
    const double g = glfock::kEulerGamma;
    CHECK(glfock::gamma_deriv(2, 1.0) == Approx(g * g + std::numbers::pi * std::numbers::pi / 6).epsilon(1e-13));
    for (unsigned n : {1u, 2u, 3u}) {
        for (double x : {0.5, 1.0, 2.0, 4.5, 11.0}) {
            CAPTURE(n, x);
            CHECK(glfock::gamma_deriv(n, x) == Approx(oracle::gamma_deriv(n, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("gamma derivative identity at integers") {
    // Gamma'(n + 1) = Gamma(n + 1) (-gamma + H_n)
    for (unsigned n = 0; n < 10; ++n) {
        const double expect = std::tgamma(n + 1.0) * (-glfock::kEulerGamma + glfock::harmonic(n));
        CHECK(glfock::gamma_deriv(1, n + 1.0) == Approx(expect).epsilon(1e-12).margin(1e-15));
    }
}

TEST_CASE("log_abs_gamma_deriv keeps the sign") {
    const auto s = glfock::log_abs_gamma_deriv(1, 1.0);
    CHECK(s.sign == -1);
    CHECK(std::exp(s.log_abs) == Approx(glfock::kEulerGamma).epsilon(1e-13));
    // Large argument stays finite in log form.
    const auto big = glfock::log_abs_gamma_deriv(2, 300.0);
    CHECK(std::isfinite(big.log_abs));
    CHECK(big.sign == 1);
}

TEST_CASE("Mittag-Leffler function") {
    CHECK(std::abs(glfock::mittag_leffler(1, 1, 1.0) - std::exp(1.0)) < 1e-14);
    CHECK(std::abs(glfock::mittag_leffler(2, 1.5, 0.0) - 1.0 / std::tgamma(1.5)) < 1e-15);
    CHECK(glfock::mittag_leffler(2, 1, 1.0).real() == Approx(oracle::mittag_leffler(2, 1, 1.0)).epsilon(1e-14));
    CHECK(glfock::mittag_leffler(0.5, 2, -3.0).real() ==
          Approx(oracle::mittag_leffler(0.5, 2, -3.0)).epsilon(1e-12));
    const cplx z(0.3, -0.8);
    CHECK(std::abs(glfock::mittag_leffler(1, 1, z) - std::exp(z)) < 1e-14);
}

TEST_CASE("confluent hypergeometric function") {
    CHECK(std::abs(glfock::hyp1f1(0.7, 1.9, 0.0) - 1.0) < 1e-16);
    const cplx z(0.4, 1.1);
    CHECK(std::abs(glfock::hyp1f1(1, 1, z) - std::exp(z)) < 1e-14);
    CHECK(glfock::hyp1f1(0.5, 2, -2.0).real() == Approx(oracle::hyp1f1(0.5, 2, -2.0)).epsilon(1e-14));
    CHECK(glfock::hyp1f1(1.5, 4, -25.0).real() == Approx(oracle::hyp1f1(1.5, 4, -25.0)).epsilon(1e-11));
    CHECK_THROWS_AS(glfock::hyp1f1(1, -2, 0.5), glfock::PoleError);
}

TEST_CASE("Hermite functions") {
    CHECK(glfock::hermite_fn(0, 0.0) == Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-15));
    CHECK(glfock::hermite_fn(1, 0.0) == 0.0);
    CHECK(glfock::hermite_fn(5, 1.3) == Approx(oracle::hermite5(1.3)).epsilon(1e-14));
    CHECK_THROWS_AS(glfock::hermite_fn(201, 0.0), glfock::DomainError);
}

TEST_CASE("config validation") {
    glfock::SpecialFnConfig cfg;
    cfg.max_terms = 0;
    CHECK_THROWS_AS(cfg.validate(), glfock::ConfigError);
}
