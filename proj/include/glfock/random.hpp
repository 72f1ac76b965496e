#pragma once

// Seeded draws mapped by hand from raw 64-bit output, so sequences do not
// depend on the standard library's distribution implementations.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace glfock {

using Rng = std::mt19937_64;

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return std::ldexp(static_cast<double>(rng() >> 11), -53); }

inline double uniform(Rng& rng, double a, double b) { return a + (b - a) * uniform01(rng); }

/// Real and imaginary parts independently uniform in [-1, 1).
inline std::complex<double> uniform_box(Rng& rng) {
    const double re = uniform(rng, -1.0, 1.0);
    const double im = uniform(rng, -1.0, 1.0);
    return {re, im};
}

}  // namespace glfock
