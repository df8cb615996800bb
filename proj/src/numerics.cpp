#include "fda/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fda/errors.hpp"

namespace fda {

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    if (a.cols() != x.size()) throw GridMismatch("matvec: dimensions differ");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* row = a.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

// ============================================================
// symmetric eigenproblem, cyclic Jacobi
// ============================================================

SymmetricEigen sym_eigen(const Matrix& a) {
    if (a.rows() != a.cols()) throw NotSymmetric("sym_eigen: matrix is not square");
    const std::size_t n = a.rows();
    const double scale = a.max_abs();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-10 * std::max(scale, 1e-300))
                throw NotSymmetric("sym_eigen: relative asymmetry exceeds 1e-10");

    Matrix A = a;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = 0.5 * (A(i, j) + A(j, i));
            A(i, j) = A(j, i) = v;
        }
    Matrix V = Matrix::identity(n);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0, diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diag += A(i, i) * A(i, i);
            for (std::size_t j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
        }
        if (off == 0.0 || std::sqrt(off) <= 1e-15 * std::sqrt(diag + 2.0 * off)) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::abs(apq) <= 1e-300) {
                    A(p, q) = A(q, p) = 0.0;
                    continue;
                }
                const double app = A(p, p), aqq = A(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = A(p, i) = c * aip - s * aiq;
                    A(i, q) = A(q, i) = s * aip + c * aiq;
                }
                A(p, p) = app - t * apq;
                A(q, q) = aqq + t * apq;
                A(p, q) = A(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return A(i, i) > A(j, j); });

    SymmetricEigen result;
    result.values.resize(n);
    result.vectors = Matrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        result.values[r] = A(order[r], order[r]);
        for (std::size_t i = 0; i < n; ++i) result.vectors(i, r) = V(i, order[r]);
    }
    return result;
}

double rcond_from_eigenvalues(const std::vector<double>& values) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double v : values) {
        double a = std::abs(v);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    if (hi == 0.0) return 0.0;
    return lo / hi;
}

// ============================================================
// linear solves through the eigendecomposition
// ============================================================

static std::vector<double> apply_inverse(const SymmetricEigen& eig,
                                         std::span<const double> b) {
    const std::size_t n = eig.values.size();
    std::vector<double> z(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += eig.vectors(i, r) * b[i];
        z[r] = s / eig.values[r];
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += eig.vectors(i, r) * z[r];
        x[i] = s;
    }
    return x;
}

std::vector<double> solve_sym(const Matrix& a, std::span<const double> b) {
    if (a.rows() != b.size()) throw GridMismatch("solve_sym: dimensions differ");
    SymmetricEigen eig = sym_eigen(a);
    if (rcond_from_eigenvalues(eig.values) <= 1e-12)
        throw SingularSystem("solve_sym: reciprocal condition number below 1e-12");
    return apply_inverse(eig, b);
}

std::vector<double> solve_weighted_ls(const Matrix& basis,
                                      std::span<const double> weights,
                                      std::span<const double> response) {
    const std::size_t m = basis.rows(), q = basis.cols();
    if (weights.size() != m || response.size() != m)
        throw GridMismatch("solve_weighted_ls: dimensions differ");
    Matrix gram(q, q);
    std::vector<double> rhs(q, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const double w = weights[j];
        if (w == 0.0) continue;
        const double* row = basis.row(j);
        for (std::size_t a = 0; a < q; ++a) {
            const double wa = w * row[a];
            rhs[a] += wa * response[j];
            for (std::size_t b = a; b < q; ++b) gram(a, b) += wa * row[b];
        }
    }
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < a; ++b) gram(a, b) = gram(b, a);
    SymmetricEigen eig = sym_eigen(gram);
    if (rcond_from_eigenvalues(eig.values) <= 1e-12)
        throw SingularSystem("solve_weighted_ls: weighted Gram matrix is singular");
    return apply_inverse(eig, rhs);
}

Matrix inv_sym(const Matrix& a) {
    SymmetricEigen eig = sym_eigen(a);
    if (rcond_from_eigenvalues(eig.values) <= 1e-12)
        throw SingularSystem("inv_sym: reciprocal condition number below 1e-12");
    const std::size_t n = a.rows();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                s += eig.vectors(i, r) * eig.vectors(j, r) / eig.values[r];
            out(i, j) = out(j, i) = s;
        }
    return out;
}

Matrix inv_sqrt_psd(const Matrix& a) {
    SymmetricEigen eig = sym_eigen(a);
    const std::size_t n = a.rows();
    double lambda_max = 0.0;
    for (double v : eig.values) lambda_max = std::max(lambda_max, v);
    for (double v : eig.values)
        if (v <= 1e-12 * lambda_max || lambda_max == 0.0)
            throw NotPositiveDefinite("inv_sqrt_psd: matrix is not positive definite");
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                s += eig.vectors(i, r) * eig.vectors(j, r) / std::sqrt(eig.values[r]);
            out(i, j) = out(j, i) = s;
        }
    return out;
}

double trapezoid_integrate(std::span<const double> values, double dt) {
    if (values.size() < 2) throw GridMismatch("trapezoid_integrate: fewer than two points");
    double s = 0.0;
    for (double v : values) s += v;
    s -= 0.5 * (values.front() + values.back());
    return s * dt;
}

// ============================================================
// special functions
// ============================================================

static double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 800; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

static double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 800; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-17) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_q(double a, double x) {
    if (a <= 0.0) throw Error("gamma_q: shape must be positive");
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, double d) {
    if (d <= 0.0) throw Error("chi2_sf: degrees of freedom must be positive");
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * d, 0.5 * x);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error("normal_quantile: p must lie in (0, 1)");
    static const double A[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double B[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double C[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double D[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425, p_high = 1.0 - p_low;
    double x;
    if (p < p_low) {
        const double u = std::sqrt(-2.0 * std::log(p));
        x = (((((C[0] * u + C[1]) * u + C[2]) * u + C[3]) * u + C[4]) * u + C[5]) /
            ((((D[0] * u + D[1]) * u + D[2]) * u + D[3]) * u + 1.0);
    } else if (p <= p_high) {
        const double u = p - 0.5, r = u * u;
        x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * u /
            (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
    } else {
        const double u = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((C[0] * u + C[1]) * u + C[2]) * u + C[3]) * u + C[4]) * u + C[5]) /
            ((((D[0] * u + D[1]) * u + D[2]) * u + D[3]) * u + 1.0);
    }
    // one Halley step against the exact cdf brings the error near epsilon
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

} // namespace fda
