#include "doctest.h"

#include <cmath>
#include <vector>

#include "fda/errors.hpp"
#include "fda/estimation.hpp"
#include "fda/flm.hpp"
#include "fda/numerics.hpp"
#include "fda/rng.hpp"

using namespace fda;

namespace {

CurveSet curve_set(const Matrix& rows, const EvaluationGrid& grid) {
    CurveSet c;
    c.curves = rows;
    c.grid = grid;
    return c;
}

DesignMatrix design_of(const Matrix& x) {
    DesignMatrix d;
    d.X = x;
    d.column_names.assign(x.cols(), "x");
    return d;
}

Matrix random_rows(std::size_t n, std::size_t m, RngStream& rng) {
    Matrix a(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) a(i, j) = rng.normal();
    return a;
}

} // namespace

TEST_CASE("intercept-only fit is the mean and the sample covariance") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 9);
    RngStream rng(21, 0);
    const Matrix rows = random_rows(6, 9, rng);
    const CurveSet curves = curve_set(rows, grid);

    const FlmFit fit = fit_flm(curves, design_of(Matrix(6, 1, 1.0)));
    const MeanEstimate mean = estimate_mean(curves);
    for (std::size_t g = 0; g < 9; ++g)
        CHECK(fit.beta(0, g) == doctest::Approx(mean.values[g]).epsilon(1e-13));

    // with q = 1 the regression divisor n - q equals the sample n - 1
    const CovarianceEstimate cov = estimate_covariance(curves, mean);
    CHECK(fit.gamma.divisor == cov.divisor);
    for (std::size_t s = 0; s < 9; ++s)
        for (std::size_t t = 0; t < 9; ++t)
            CHECK(fit.gamma.values(s, t) ==
                  doctest::Approx(cov.values(s, t)).epsilon(1e-10).scale(1.0));
}

TEST_CASE("group indicator design recovers group means") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 5);
    RngStream rng(23, 0);
    const Matrix rows = random_rows(6, 5, rng);
    Matrix x(6, 2);
    for (std::size_t i = 0; i < 6; ++i) x(i, i < 3 ? 0 : 1) = 1.0;

    const FlmFit fit = fit_flm(curve_set(rows, grid), design_of(x));
    for (std::size_t g = 0; g < 5; ++g) {
        const double m0 = (rows(0, g) + rows(1, g) + rows(2, g)) / 3.0;
        const double m1 = (rows(3, g) + rows(4, g) + rows(5, g)) / 3.0;
        CHECK(fit.beta(0, g) == doctest::Approx(m0).epsilon(1e-12).scale(1.0));
        CHECK(fit.beta(1, g) == doctest::Approx(m1).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("an exact linear model leaves no residual") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 7);
    RngStream rng(25, 0);
    const std::size_t n = 8, q = 2;
    Matrix x(n, q);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.normal();
    }
    const Matrix beta_true = random_rows(q, 7, rng);
    Matrix rows(n, 7);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t g = 0; g < 7; ++g)
            rows(i, g) = x(i, 0) * beta_true(0, g) + x(i, 1) * beta_true(1, g);

    const FlmFit fit = fit_flm(curve_set(rows, grid), design_of(x));
    for (std::size_t r = 0; r < q; ++r)
        for (std::size_t g = 0; g < 7; ++g)
            CHECK(fit.beta(r, g) == doctest::Approx(beta_true(r, g)).epsilon(1e-10).scale(1.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t g = 0; g < 7; ++g) CHECK(std::abs(fit.residual_curves(i, g)) < 1e-10);
    for (std::size_t s = 0; s < 7; ++s)
        for (std::size_t t = 0; t < 7; ++t) CHECK(std::abs(fit.gamma.values(s, t)) < 1e-18);
}

TEST_CASE("residual curves are orthogonal to the design") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 11);
    RngStream rng(27, 0);
    const std::size_t n = 10;
    Matrix x(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.normal();
        x(i, 2) = rng.uniform();
    }
    const CurveSet curves = curve_set(random_rows(n, 11, rng), grid);
    const FlmFit fit = fit_flm(curves, design_of(x));
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t g = 0; g < 11; ++g) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += x(i, r) * fit.residual_curves(i, g);
            CHECK(std::abs(dot) < 1e-8);
        }
}

TEST_CASE("reparametrizing the design transforms the coefficients inversely") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 6);
    RngStream rng(29, 0);
    const std::size_t n = 9;
    Matrix x(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.normal();
    }
    const CurveSet curves = curve_set(random_rows(n, 6, rng), grid);

    // A = [[2, 1], [0, 1]], A^{-1} = [[0.5, -0.5], [0, 1]]
    Matrix xa(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        xa(i, 0) = 2.0 * x(i, 0);
        xa(i, 1) = x(i, 0) + x(i, 1);
    }
    const FlmFit f1 = fit_flm(curves, design_of(x));
    const FlmFit f2 = fit_flm(curves, design_of(xa));
    for (std::size_t g = 0; g < 6; ++g) {
        CHECK(f2.beta(0, g) ==
              doctest::Approx(0.5 * f1.beta(0, g) - 0.5 * f1.beta(1, g)).epsilon(1e-9).scale(1.0));
        CHECK(f2.beta(1, g) == doctest::Approx(f1.beta(1, g)).epsilon(1e-9).scale(1.0));
    }
    // fitted values, residuals and gamma do not change
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t g = 0; g < 6; ++g)
            CHECK(f2.residual_curves(i, g) ==
                  doctest::Approx(f1.residual_curves(i, g)).epsilon(1e-9).scale(1.0));
    for (std::size_t s = 0; s < 6; ++s)
        for (std::size_t t = 0; t < 6; ++t)
            CHECK(f2.gamma.values(s, t) ==
                  doctest::Approx(f1.gamma.values(s, t)).epsilon(1e-9).scale(1.0));
}

TEST_CASE("projection trace equals the number of covariates") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 4);
    RngStream rng(31, 0);
    const std::size_t n = 12, q = 3;
    Matrix x(n, q);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.normal();
        x(i, 2) = rng.normal();
    }
    const FlmFit fit = fit_flm(curve_set(random_rows(n, 4, rng), grid), design_of(x));
    const Matrix h = x * fit.xtx_inv * x.transposed();
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += h(i, i);
    CHECK(trace == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("fit rejects degenerate problems") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 4);
    RngStream rng(33, 0);

    // n <= q
    CHECK_THROWS_AS(fit_flm(curve_set(random_rows(2, 4, rng), grid),
                            design_of(Matrix(2, 2, 1.0))),
                    TooFewSubjects);

    // collinear columns
    Matrix x(5, 2);
    for (std::size_t i = 0; i < 5; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = 2.0;
    }
    CHECK_THROWS_AS(fit_flm(curve_set(random_rows(5, 4, rng), grid), design_of(x)),
                    RankDeficientDesign);
}

TEST_CASE("restricted fit satisfies the restriction") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 8);
    RngStream rng(35, 0);
    const std::size_t n = 10;
    Matrix x(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.normal();
        x(i, 2) = rng.normal();
    }
    const FlmFit fit = fit_flm(curve_set(random_rows(n, 8, rng), grid), design_of(x));

    Matrix c_mat(1, 3);
    c_mat(0, 1) = 1.0;
    c_mat(0, 2) = -1.0;
    const Restriction restriction = zero_restriction(c_mat, grid);
    CHECK(restriction.a_sub == grid.a);
    CHECK(restriction.b_sub == grid.b);

    const Matrix beta0 = restricted_fit(fit, restriction);
    for (std::size_t g = 0; g < 8; ++g)
        CHECK(std::abs(beta0(1, g) - beta0(2, g)) < 1e-8);
}

TEST_CASE("restriction already satisfied leaves the fit alone") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 6);
    RngStream rng(37, 0);
    const std::size_t n = 7;
    Matrix x(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.normal();
    }
    const FlmFit fit = fit_flm(curve_set(random_rows(n, 6, rng), grid), design_of(x));

    Restriction restriction;
    restriction.C = Matrix(1, 2);
    restriction.C(0, 0) = 1.0;
    restriction.a_sub = grid.a;
    restriction.b_sub = grid.b;
    restriction.c = Matrix(1, 6);
    for (std::size_t g = 0; g < 6; ++g) restriction.c(0, g) = fit.beta(0, g);

    const Matrix beta0 = restricted_fit(fit, restriction);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t g = 0; g < 6; ++g)
            CHECK(beta0(r, g) == doctest::Approx(fit.beta(r, g)).epsilon(1e-10).scale(1.0));
}

TEST_CASE("two-group equality restriction averages the group means") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 5);
    RngStream rng(39, 0);
    const Matrix rows = random_rows(4, 5, rng);
    Matrix x(4, 2);
    x(0, 0) = 1.0;
    x(1, 1) = 1.0;
    x(2, 0) = 1.0;
    x(3, 1) = 1.0;
    const FlmFit fit = fit_flm(curve_set(rows, grid), design_of(x));

    Matrix c_mat(1, 2);
    c_mat(0, 0) = 1.0;
    c_mat(0, 1) = -1.0;
    const Matrix beta0 = restricted_fit(fit, zero_restriction(c_mat, grid));
    for (std::size_t g = 0; g < 5; ++g) {
        const double pooled = (rows(0, g) + rows(1, g) + rows(2, g) + rows(3, g)) / 4.0;
        CHECK(beta0(0, g) == doctest::Approx(pooled).epsilon(1e-11).scale(1.0));
        CHECK(beta0(1, g) == doctest::Approx(pooled).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("restricted fit rejects a singular restriction") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 4);
    RngStream rng(41, 0);
    Matrix x(6, 2);
    for (std::size_t i = 0; i < 6; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.normal();
    }
    const FlmFit fit = fit_flm(curve_set(random_rows(6, 4, rng), grid), design_of(x));

    Matrix c_mat(2, 2); // rank 1
    c_mat(0, 0) = 1.0;
    c_mat(0, 1) = -1.0;
    c_mat(1, 0) = -1.0;
    c_mat(1, 1) = 1.0;
    CHECK_THROWS_AS(restricted_fit(fit, zero_restriction(c_mat, grid)), SingularRestriction);
}

TEST_CASE("bands collapse when the covariance vanishes") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 5);
    RngStream rng(43, 0);
    const std::size_t n = 6;
    Matrix x(n, 1, 1.0);
    Matrix beta_true(1, 5);
    for (std::size_t g = 0; g < 5; ++g) beta_true(0, g) = rng.normal();
    Matrix rows(n, 5);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t g = 0; g < 5; ++g) rows(i, g) = beta_true(0, g);

    const FlmFit fit = fit_flm(curve_set(rows, grid), design_of(x));
    const CoefficientBands bands = coefficient_bands(fit);
    for (std::size_t g = 0; g < 5; ++g) {
        CHECK(bands.lower(0, g) == doctest::Approx(fit.beta(0, g)).epsilon(1e-12).scale(1.0));
        CHECK(bands.upper(0, g) == doctest::Approx(fit.beta(0, g)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("band half-width follows the normal quantile") {
    const EvaluationGrid grid = make_grid(0.0, 1.0, 7);
    RngStream rng(45, 0);
    const std::size_t n = 12;
    const CurveSet curves = curve_set(random_rows(n, 7, rng), grid);
    const FlmFit fit = fit_flm(curves, design_of(Matrix(n, 1, 1.0)));

    const CoefficientBands b95 = coefficient_bands(fit, 0.95);
    const double z = 1.9599639845400542;
    for (std::size_t g = 0; g < 7; ++g) {
        const double half = z * std::sqrt(fit.gamma.values(g, g) * fit.xtx_inv(0, 0));
        CHECK(b95.upper(0, g) - fit.beta(0, g) == doctest::Approx(half).epsilon(1e-12));
        CHECK(fit.beta(0, g) - b95.lower(0, g) == doctest::Approx(half).epsilon(1e-12));
    }

    // a lower level gives a strictly narrower band
    const CoefficientBands b50 = coefficient_bands(fit, 0.50);
    for (std::size_t g = 0; g < 7; ++g)
        CHECK(b50.upper(0, g) - b50.lower(0, g) < b95.upper(0, g) - b95.lower(0, g));

    CHECK_THROWS_AS(coefficient_bands(fit, 0.0), Error);
    CHECK_THROWS_AS(coefficient_bands(fit, 1.0), Error);
}
