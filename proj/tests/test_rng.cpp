#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "fda/rng.hpp"

using namespace fda;

TEST_CASE("streams are deterministic in (seed, stream_id)") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u32() == b.next_u32());

    RngStream c(42, 8);
    int differing = 0;
    RngStream a2(42, 7);
    for (int i = 0; i < 100; ++i)
        if (a2.next_u32() != c.next_u32()) ++differing;
    CHECK(differing > 90);

    RngStream d(43, 7);
    RngStream a3(42, 7);
    differing = 0;
    for (int i = 0; i < 100; ++i)
        if (a3.next_u32() != d.next_u32()) ++differing;
    CHECK(differing > 90);
}

TEST_CASE("spawn_stream equals direct construction") {
    RngStream direct(9, 3);
    RngStream spawned = spawn_stream(9, 3);
    for (int i = 0; i < 20; ++i) CHECK(direct.next_u64() == spawned.next_u64());
}

TEST_CASE("uniform lies in [0,1) with the right moments") {
    RngStream rng(1, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    // 5 sigma bands
    CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
    CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("normal has standard moments and tail mass") {
    RngStream rng(2, 5);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, sum3 = 0.0;
    int inside = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum2 += z * z;
        sum3 += z * z * z;
        if (std::abs(z) < 1.959963984540054) ++inside;
    }
    CHECK(std::abs(sum / n) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(sum3 / n) < 0.05);
    CHECK(static_cast<double>(inside) / n == doctest::Approx(0.95).epsilon(0.005));
}

TEST_CASE("chi_square has mean k and variance 2k") {
    RngStream rng(3, 1);
    for (int k : {1, 3, 7}) {
        const int n = 100000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = rng.chi_square(k);
            CHECK(x >= 0.0);
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / n;
        const double var = sum2 / n - mean * mean;
        CHECK(mean == doctest::Approx(k).epsilon(0.03));
        CHECK(var == doctest::Approx(2.0 * k).epsilon(0.08));
    }
}

TEST_CASE("next_below respects the bound and is unbiased") {
    RngStream rng(4, 2);
    const std::uint32_t bound = 7;
    std::vector<int> counts(bound, 0);
    const int n = 140000;
    for (int i = 0; i < n; ++i) {
        const std::uint32_t v = rng.next_below(bound);
        REQUIRE(v < bound);
        ++counts[v];
    }
    // chi-square goodness of fit, df 6: 5 sigma-ish bound ~ 35
    const double expected = static_cast<double>(n) / bound;
    double stat = 0.0;
    for (int c : counts) stat += (c - expected) * (c - expected) / expected;
    CHECK(stat < 35.0);
}

TEST_CASE("distinct streams are essentially uncorrelated") {
    RngStream a(5, 0), b(5, 1);
    const int n = 100000;
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += a.normal() * b.normal();
    CHECK(std::abs(dot / n) < 5.0 / std::sqrt(static_cast<double>(n)));
}
