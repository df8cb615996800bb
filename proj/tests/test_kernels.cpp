#include "doctest.h"

#include <cmath>

#include "fda/errors.hpp"
#include "fda/kernels.hpp"

using namespace fda;

namespace {

// plain Simpson rule, independent of the library's quadrature
template <class F>
double integrate(F&& f, double lo, double hi, int nodes = 4001) {
    const double h = (hi - lo) / (nodes - 1);
    double s = f(lo) + f(hi);
    for (int i = 1; i < nodes - 1; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("kernel names round-trip") {
    for (auto family :
         {KernelFamily::gaussian, KernelFamily::epanechnikov, KernelFamily::uniform})
        CHECK(kernel_from_name(kernel_name(family)) == family);
    CHECK_THROWS_AS(kernel_from_name("triangular"), Error);
}

TEST_CASE("kernel point values") {
    CHECK(eval_kernel(KernelFamily::gaussian, 0.0) ==
          doctest::Approx(0.3989422804014327).epsilon(1e-14));
    CHECK(eval_kernel(KernelFamily::gaussian, 1.0) ==
          doctest::Approx(0.24197072451914337).epsilon(1e-14));
    CHECK(eval_kernel(KernelFamily::epanechnikov, 0.0) == 0.75);
    CHECK(eval_kernel(KernelFamily::epanechnikov, 0.5) == doctest::Approx(0.5625));
    CHECK(eval_kernel(KernelFamily::epanechnikov, 1.0) == 0.0);
    CHECK(eval_kernel(KernelFamily::epanechnikov, -1.2) == 0.0);
    CHECK(eval_kernel(KernelFamily::uniform, 0.3) == 0.5);
    CHECK(eval_kernel(KernelFamily::uniform, -0.999) == 0.5);
    CHECK(eval_kernel(KernelFamily::uniform, 1.01) == 0.0);
}

TEST_CASE("kernels are symmetric densities") {
    for (auto family :
         {KernelFamily::gaussian, KernelFamily::epanechnikov, KernelFamily::uniform}) {
        const double s = kernel_support(family);
        const double mass = integrate([&](double t) { return eval_kernel(family, t); }, -s, s);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
        for (double t : {0.2, 0.7, 1.3, 3.0})
            CHECK(eval_kernel(family, t) == eval_kernel(family, -t));
    }
}

TEST_CASE("closed-form kernel functionals") {
    const KernelFunctionals g = kernel_functionals(KernelFamily::gaussian, 6);
    CHECK(g.B[0] == 1.0);
    CHECK(g.B[1] == 0.0);
    CHECK(g.B[2] == 1.0);
    CHECK(g.B[3] == 0.0);
    CHECK(g.B[4] == 3.0);
    CHECK(g.B[6] == 15.0);
    CHECK(g.V == doctest::Approx(0.28209479177387814).epsilon(1e-15));
    // K1 is the N(0,2) density
    CHECK(g.K1(0.0) == doctest::Approx(0.28209479177387814).epsilon(1e-14));
    CHECK(g.K1(1.5) ==
          doctest::Approx(std::exp(-1.5 * 1.5 / 4.0) / (2.0 * std::sqrt(M_PI))).epsilon(1e-14));

    const KernelFunctionals e = kernel_functionals(KernelFamily::epanechnikov, 4);
    CHECK(e.B[0] == 1.0);
    CHECK(e.B[2] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(e.B[4] == doctest::Approx(3.0 / 35.0).epsilon(1e-15));
    CHECK(e.V == doctest::Approx(0.6).epsilon(1e-15));

    const KernelFunctionals u = kernel_functionals(KernelFamily::uniform, 4);
    CHECK(u.B[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(u.B[4] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(u.V == 0.5);
    CHECK(u.K1(0.0) == 0.5);
    CHECK(u.K1(1.0) == 0.25);
    CHECK(u.K1(2.0) == 0.0);
    CHECK(u.K1(-0.5) == doctest::Approx(0.375));
}

TEST_CASE("K1 equals the direct convolution") {
    for (auto family :
         {KernelFamily::gaussian, KernelFamily::epanechnikov, KernelFamily::uniform}) {
        const KernelFunctionals f = kernel_functionals(family, 2);
        const double s = kernel_support(family);
        for (double t : {0.0, 0.4, 1.1, 1.9}) {
            // integrate over the overlap of the two supports only, where the
            // integrand is smooth (compact kernels jump at the edges)
            const double lo = std::max(-s, t - s);
            const double hi = std::min(s, t + s);
            const double direct =
                lo < hi ? integrate([&](double v) { return eval_kernel(family, v) *
                                                           eval_kernel(family, t - v); },
                                    lo, hi)
                        : 0.0;
            CHECK(f.K1(t) == doctest::Approx(direct).epsilon(1e-7).scale(1.0));
        }
    }
}

TEST_CASE("order-1 equivalent kernel is the kernel itself") {
    for (auto family :
         {KernelFamily::gaussian, KernelFamily::epanechnikov, KernelFamily::uniform}) {
        const EquivalentKernel k = equivalent_kernel(family, 1);
        REQUIRE(k.coeffs.size() == 2);
        CHECK(k.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(k.coeffs[1] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
        for (double t : {0.0, 0.3, 0.9, 2.0})
            CHECK(k(t) == doctest::Approx(eval_kernel(family, t)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("order-3 gaussian equivalent kernel weight polynomial") {
    const EquivalentKernel k = equivalent_kernel(KernelFamily::gaussian, 3);
    REQUIRE(k.coeffs.size() == 4);
    // (1.5 - 0.5 t^2) K(t): solve [[1,1],[1,3]] c = e1 on the even powers
    CHECK(k.coeffs[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(k.coeffs[1] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(k.coeffs[2] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(k.coeffs[3] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("order-3 epanechnikov equivalent kernel weight polynomial") {
    const EquivalentKernel k = equivalent_kernel(KernelFamily::epanechnikov, 3);
    CHECK(k.coeffs[0] == doctest::Approx(1.875).epsilon(1e-12));
    CHECK(k.coeffs[2] == doctest::Approx(-4.375).epsilon(1e-12));
}

TEST_CASE("equivalent kernels kill moments 1..p") {
    for (auto family :
         {KernelFamily::gaussian, KernelFamily::epanechnikov, KernelFamily::uniform}) {
        for (int p : {1, 3}) {
            const EquivalentKernel k = equivalent_kernel(family, p);
            const KernelFunctionals f = kernel_functionals(k, p + 1);
            CHECK(f.B[0] == doctest::Approx(1.0).epsilon(1e-8));
            for (int r = 1; r <= p; ++r)
                CHECK(f.B[r] == doctest::Approx(0.0).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("order-3 gaussian equivalent kernel functionals") {
    const EquivalentKernel k = equivalent_kernel(KernelFamily::gaussian, 3);
    const KernelFunctionals f = kernel_functionals(k, 4);
    // B4 = 1.5 E[Z^4] - 0.5 E[Z^6] = 4.5 - 7.5
    CHECK(f.B[4] == doctest::Approx(-3.0).epsilon(1e-9));
    // V = 27 / (32 sqrt(pi))
    CHECK(f.V == doctest::Approx(0.47603496236841935).epsilon(1e-9));
}

TEST_CASE("equivalent kernel rejects even orders") {
    CHECK_THROWS_AS(equivalent_kernel(KernelFamily::gaussian, 2), Error);
    CHECK_THROWS_AS(equivalent_kernel(KernelFamily::gaussian, 0), Error);
}
