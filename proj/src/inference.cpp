#include "fda/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fda/errors.hpp"
#include "fda/numerics.hpp"

namespace fda {

Matrix standardized_process(const FlmFit& fit, const Restriction& restriction) {
    const std::size_t q = fit.beta.rows(), M = fit.beta.cols();
    const std::size_t k = restriction.C.rows();
    if (restriction.C.cols() != q)
        throw GridMismatch("standardized_process: contrast columns do not match coefficients");
    if (restriction.c.rows() != k || restriction.c.cols() != M)
        throw GridMismatch("standardized_process: null value shape does not match");

    const Matrix m = restriction.C * (fit.xtx_inv * restriction.C.transposed());
    SymmetricEigen eig = sym_eigen(m);
    if (rcond_from_eigenvalues(eig.values) <= 1e-12 || eig.values.back() <= 0.0)
        throw SingularRestriction("standardized_process: contrast normal matrix is singular");
    const Matrix m_inv_sqrt = inv_sqrt_psd(m);
    return m_inv_sqrt * (restriction.C * fit.beta - restriction.c);
}

double test_statistic(const Matrix& w, const EvaluationGrid& grid, double lo, double hi) {
    if (w.cols() != grid.size())
        throw GridMismatch("test_statistic: process does not match the grid");
    if (!(lo < hi)) throw EmptyInterval("test_statistic: interval is empty");
    const double tol = 1e-12 * (grid.b - grid.a);
    std::size_t first = grid.size(), last = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (grid.points[g] >= lo - tol && grid.points[g] <= hi + tol) {
            first = std::min(first, g);
            last = std::max(last, g);
        }
    }
    if (first >= last)
        throw EmptyInterval("test_statistic: fewer than two grid points in the interval");
    const std::size_t len = last - first + 1;
    std::vector<double> sq(len);
    double total = 0.0;
    for (std::size_t l = 0; l < w.rows(); ++l) {
        for (std::size_t g = 0; g < len; ++g) {
            const double v = w(l, first + g);
            sq[g] = v * v;
        }
        total += trapezoid_integrate(sq, grid.spacing());
    }
    return total;
}

EigenStructure covariance_eigen(const CovarianceEstimate& gamma, double trace_fraction,
                                MhatRule rule) {
    const std::size_t M = gamma.values.rows();
    if (gamma.values.cols() != M || M != gamma.grid.size())
        throw GridMismatch("covariance_eigen: covariance does not match its grid");
    if (!(trace_fraction > 0.0 && trace_fraction <= 1.0))
        throw Error("covariance_eigen: trace fraction must lie in (0, 1]");

    // Quadrature weights of the trapezoid rule; the symmetric similarity
    // W^{1/2} G W^{1/2} keeps the operator eigenvalues while its eigenvectors
    // stay orthonormal in the same inner product used for the statistic.
    const double dt = gamma.grid.spacing();
    std::vector<double> wq(M, dt);
    wq.front() = wq.back() = 0.5 * dt;
    Matrix b(M, M);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            b(i, j) = std::sqrt(wq[i] * wq[j]) * gamma.values(i, j);

    SymmetricEigen eig = sym_eigen(b);
    EigenStructure out;
    out.grid = gamma.grid;
    out.trace_fraction = trace_fraction;
    out.eigenvalues = eig.values;
    for (double& v : out.eigenvalues) v = std::max(v, 0.0);

    double trace = 0.0;
    for (double v : out.eigenvalues) trace += v;
    if (!(trace > 0.0)) throw ZeroTrace("covariance_eigen: clipped trace is zero");

    const std::size_t cap =
        std::min<std::size_t>(M, static_cast<std::size_t>(std::max(gamma.divisor, 1)));
    std::size_t m_hat = 0;
    if (rule == MhatRule::trace_fraction) {
        double cum = 0.0;
        while (m_hat < M && cum < trace_fraction * trace - 1e-15 * trace)
            cum += out.eigenvalues[m_hat++];
    } else {
        while (m_hat < M && out.eigenvalues[m_hat] > 0.0) ++m_hat;
    }
    m_hat = std::max<std::size_t>(1, std::min(m_hat, cap));
    out.m_hat = m_hat;

    out.eigenfunctions = Matrix(M, m_hat);
    for (std::size_t r = 0; r < m_hat; ++r)
        for (std::size_t i = 0; i < M; ++i)
            out.eigenfunctions(i, r) = eig.vectors(i, r) / std::sqrt(wq[i]);
    return out;
}

MixtureNull mixture_null(const EigenStructure& eigen, int k) {
    if (k < 1) throw Error("mixture_null: k must be >= 1");
    MixtureNull m;
    m.lambdas.assign(eigen.eigenvalues.begin(),
                     eigen.eigenvalues.begin() + static_cast<long>(eigen.m_hat));
    m.k = k;
    return m;
}

ChiSquareApprox chi2_approx_params(const MixtureNull& mixture) {
    if (mixture.k < 1) throw Error("chi2_approx_params: k must be >= 1");
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (double l : mixture.lambdas) {
        s1 += l;
        s2 += l * l;
        s3 += l * l * l;
    }
    if (!(s3 > 0.0))
        throw DegenerateMixture("chi2_approx_params: all mixture weights vanish");
    const double k = static_cast<double>(mixture.k);
    const double kappa1 = k * s1;
    const double kappa2 = 2.0 * k * s2;
    const double kappa3 = 8.0 * k * s3;
    ChiSquareApprox approx;
    approx.alpha = kappa3 / (4.0 * kappa2);
    approx.d = 8.0 * kappa2 * kappa2 * kappa2 / (kappa3 * kappa3);
    approx.beta = kappa1 - approx.alpha * approx.d;
    return approx;
}

double p_value_chi2(const ChiSquareApprox& approx, double t) {
    const double x = (t - approx.beta) / approx.alpha;
    if (x <= 0.0) return 1.0;
    return chi2_sf(x, approx.d);
}

double mixture_draw(const MixtureNull& mixture, RngStream& stream) {
    double s = 0.0;
    for (double l : mixture.lambdas) s += l * stream.chi_square(mixture.k);
    return s;
}

double p_value_sim(const MixtureNull& mixture, double t, int draws, RngStream& stream) {
    if (draws < 1) throw Error("p_value_sim: need at least one draw");
    long count = 0;
    for (int b = 0; b < draws; ++b)
        if (mixture_draw(mixture, stream) >= t) ++count;
    return (1.0 + static_cast<double>(count)) / (static_cast<double>(draws) + 1.0);
}

double p_value_boot(const CurveSet& curves, const DesignMatrix& design,
                    const Restriction& restriction, int draws, RngStream& stream) {
    if (draws < 1) throw Error("p_value_boot: need at least one draw");
    const double lo = restriction.a_sub, hi = restriction.b_sub;
    const FlmFit fit = fit_flm(curves, design);
    const Matrix beta0 = restricted_fit(fit, restriction);
    const Matrix w = standardized_process(fit, restriction);
    const double t_obs = test_statistic(w, fit.grid, lo, hi);

    const std::size_t n = design.n(), q = design.q(), M = fit.grid.size();
    const Matrix null_curves = design.X * beta0; // n x M

    // projection beta* = (X'X)^{-1} X' f*, reused across replicates
    Matrix proj(q, n);
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t b = 0; b < q; ++b) s += fit.xtx_inv(a, b) * design.X(i, b);
            proj(a, i) = s;
        }
    const Matrix m = restriction.C * (fit.xtx_inv * restriction.C.transposed());
    const Matrix m_inv_sqrt = inv_sqrt_psd(m);

    long count = 0;
    int consecutive_failures = 0;
    Matrix fstar(n, M);
    std::vector<std::uint32_t> idx(n);
    for (int b = 0; b < draws;) {
        try {
            for (std::size_t i = 0; i < n; ++i)
                idx[i] = stream.next_below(static_cast<std::uint32_t>(n));
            for (std::size_t i = 0; i < n; ++i) {
                const double* nrow = null_curves.row(i);
                const double* vrow = fit.residual_curves.row(idx[i]);
                double* frow = fstar.row(i);
                for (std::size_t g = 0; g < M; ++g) frow[g] = nrow[g] + vrow[g];
            }
            const Matrix beta_star = proj * fstar;
            const Matrix w_star =
                m_inv_sqrt * (restriction.C * beta_star - restriction.c);
            const double t_star = test_statistic(w_star, fit.grid, lo, hi);
            if (t_star >= t_obs) ++count;
            ++b;
            consecutive_failures = 0;
        } catch (const Error& e) {
            if (++consecutive_failures >= 10)
                throw Error(std::string("p_value_boot: 10 consecutive replicate failures (") +
                            e.what() + ")");
        }
    }
    return (1.0 + static_cast<double>(count)) / (static_cast<double>(draws) + 1.0);
}

std::vector<double> noncentrality(const EigenStructure& eigen, const Matrix& eta_w) {
    const std::size_t M = eigen.grid.size();
    if (eta_w.cols() != M)
        throw GridMismatch("noncentrality: shift does not match the grid");
    const double dt = eigen.grid.spacing();
    std::vector<double> wq(M, dt);
    wq.front() = wq.back() = 0.5 * dt;
    std::vector<double> out(eigen.m_hat, 0.0);
    for (std::size_t r = 0; r < eigen.m_hat; ++r) {
        const double lambda = eigen.eigenvalues[r];
        if (!(lambda > 0.0))
            throw ZeroEigenvalue("noncentrality: retained eigenvalue is zero");
        double total = 0.0;
        for (std::size_t l = 0; l < eta_w.rows(); ++l) {
            double xi = 0.0;
            for (std::size_t g = 0; g < M; ++g)
                xi += wq[g] * eta_w(l, g) * eigen.eigenfunctions(g, r);
            total += xi * xi;
        }
        out[r] = total / lambda;
    }
    return out;
}

} // namespace fda
