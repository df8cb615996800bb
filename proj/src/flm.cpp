#include "fda/flm.hpp"

#include <cmath>

#include "fda/errors.hpp"
#include "fda/numerics.hpp"

namespace fda {

Restriction zero_restriction(const Matrix& C, const EvaluationGrid& grid) {
    Restriction r;
    r.C = C;
    r.c = Matrix(C.rows(), grid.size());
    r.a_sub = grid.a;
    r.b_sub = grid.b;
    return r;
}

FlmFit fit_flm(const CurveSet& curves, const DesignMatrix& design) {
    const std::size_t n = curves.curves.rows(), M = curves.curves.cols();
    const std::size_t q = design.q();
    if (design.n() != n) throw GridMismatch("fit_flm: design rows do not match curves");
    if (n <= q) throw TooFewSubjects("fit_flm: need more subjects than covariates");

    Matrix xtx(q, q);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = design.X.row(i);
        for (std::size_t a = 0; a < q; ++a)
            for (std::size_t b = a; b < q; ++b) xtx(a, b) += row[a] * row[b];
    }
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < a; ++b) xtx(a, b) = xtx(b, a);

    SymmetricEigen eig = sym_eigen(xtx);
    if (rcond_from_eigenvalues(eig.values) <= 1e-12)
        throw RankDeficientDesign("fit_flm: design matrix is rank deficient");
    Matrix xtx_inv(q, q);
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = a; b < q; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < q; ++r)
                s += eig.vectors(a, r) * eig.vectors(b, r) / eig.values[r];
            xtx_inv(a, b) = xtx_inv(b, a) = s;
        }

    Matrix xtf(q, M);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xrow = design.X.row(i);
        const double* frow = curves.curves.row(i);
        for (std::size_t a = 0; a < q; ++a) {
            const double xa = xrow[a];
            if (xa == 0.0) continue;
            double* orow = xtf.row(a);
            for (std::size_t g = 0; g < M; ++g) orow[g] += xa * frow[g];
        }
    }

    FlmFit fit;
    fit.grid = curves.grid;
    fit.xtx_inv = xtx_inv;
    fit.beta = xtx_inv * xtf;
    fit.residual_curves = curves.curves - design.X * fit.beta;

    fit.gamma.grid = curves.grid;
    fit.gamma.divisor = static_cast<int>(n - q);
    fit.gamma.values = Matrix(M, M);
    for (std::size_t i = 0; i < n; ++i) {
        const double* vrow = fit.residual_curves.row(i);
        for (std::size_t s = 0; s < M; ++s) {
            const double vs = vrow[s];
            if (vs == 0.0) continue;
            double* orow = fit.gamma.values.row(s);
            for (std::size_t t = s; t < M; ++t) orow[t] += vs * vrow[t];
        }
    }
    const double scale = 1.0 / static_cast<double>(fit.gamma.divisor);
    for (std::size_t s = 0; s < M; ++s)
        for (std::size_t t = s; t < M; ++t) {
            fit.gamma.values(s, t) *= scale;
            fit.gamma.values(t, s) = fit.gamma.values(s, t);
        }
    return fit;
}

Matrix restricted_fit(const FlmFit& fit, const Restriction& restriction) {
    const std::size_t q = fit.beta.rows(), M = fit.beta.cols();
    const std::size_t k = restriction.C.rows();
    if (restriction.C.cols() != q)
        throw GridMismatch("restricted_fit: contrast columns do not match coefficients");
    if (restriction.c.rows() != k || restriction.c.cols() != M)
        throw GridMismatch("restricted_fit: null value shape does not match");

    const Matrix ct = restriction.C.transposed();
    const Matrix xc = fit.xtx_inv * ct;        // q x k
    const Matrix m = restriction.C * xc;       // k x k
    SymmetricEigen eig = sym_eigen(m);
    if (rcond_from_eigenvalues(eig.values) <= 1e-12)
        throw SingularRestriction("restricted_fit: contrast normal matrix is singular");
    Matrix m_inv(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < k; ++r)
                s += eig.vectors(a, r) * eig.vectors(b, r) / eig.values[r];
            m_inv(a, b) = m_inv(b, a) = s;
        }

    const Matrix gap = restriction.C * fit.beta - restriction.c; // k x M
    return fit.beta - xc * (m_inv * gap);
}

CoefficientBands coefficient_bands(const FlmFit& fit, double level) {
    const std::size_t q = fit.beta.rows(), M = fit.beta.cols();
    if (!(level > 0.0 && level < 1.0))
        throw Error("coefficient_bands: level must lie in (0, 1)");
    const double z = normal_quantile(0.5 * (1.0 + level));
    CoefficientBands bands;
    bands.lower = Matrix(q, M);
    bands.upper = Matrix(q, M);
    for (std::size_t r = 0; r < q; ++r) {
        const double var_scale = fit.xtx_inv(r, r);
        for (std::size_t g = 0; g < M; ++g) {
            const double se = std::sqrt(fit.gamma.values(g, g) * var_scale);
            bands.lower(r, g) = fit.beta(r, g) - z * se;
            bands.upper(r, g) = fit.beta(r, g) + z * se;
        }
    }
    return bands;
}

} // namespace fda
