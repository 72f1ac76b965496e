// Prints Gabor frame bounds of the Gaussian window across lattice sizes and
// the reproducing identity for a small polynomial.

#include <cstdio>

#include "glfock/glfock.hpp"

int main() {
    using namespace glfock;
    const auto e = PhiDescriptor::exponential();
    const auto vw = verify_weight(WeightKernel::registered_for(e), 15, 1e-8);

    std::vector<double> sizes = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
    const auto reps = frame_sweep(vw, 0, sizes, 12, 10);
    std::printf("%6s %12s %12s\n", "s", "A", "B");
    for (std::size_t i = 0; i < sizes.size(); ++i) std::printf("%6.2f %12.4g %12.4g\n", sizes[i], reps[i].A, reps[i].B);

    const TruncatedSeries f{1.0, cplx(0.0, 2.0), -0.5};
    const cplx z(0.3, -0.4);
    const cplx got = reproduce(vw, f, z);
    const cplx want = f.evaluate(z);
    std::printf("f(z) = %.15f%+.15fi, <f, k_z> = %.15f%+.15fi\n", want.real(), want.imag(), got.real(), got.imag());
}
