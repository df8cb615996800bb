#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fda/matrix.hpp"

namespace fda {

// Eigendecomposition of a symmetric matrix: values sorted descending,
// vectors(:, r) is the unit eigenvector for values[r].
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;
};

// Cyclic Jacobi eigensolver. The input must be symmetric up to a relative
// asymmetry of 1e-10; throws NotSymmetric otherwise.
SymmetricEigen sym_eigen(const Matrix& a);

// Reciprocal condition number |lambda_min| / |lambda_max| of a symmetric
// matrix given its eigenvalues.
double rcond_from_eigenvalues(const std::vector<double>& values);

// Minimum-norm solution of the weighted least squares problem
//   min_x sum_j w_j (y_j - b_j . x)^2
// via the eigendecomposition of the weighted Gram matrix B' W B.
// Throws SingularSystem when rcond(B' W B) <= 1e-12.
std::vector<double> solve_weighted_ls(const Matrix& basis,
                                      std::span<const double> weights,
                                      std::span<const double> response);

// Solve A x = b for symmetric A through sym_eigen; SingularSystem when
// rcond <= 1e-12.
std::vector<double> solve_sym(const Matrix& a, std::span<const double> b);

// Inverse of a symmetric matrix through its eigendecomposition.
Matrix inv_sym(const Matrix& a);

// A^{-1/2} for a symmetric positive definite matrix. Throws
// NotPositiveDefinite when lambda_min <= 1e-12 * lambda_max.
Matrix inv_sqrt_psd(const Matrix& a);

// Composite trapezoid rule over a uniform grid with spacing dt.
double trapezoid_integrate(std::span<const double> values, double dt);

// Survival function of the chi-square distribution with d degrees of
// freedom (d > 0, possibly fractional), accurate to ~1e-12.
double chi2_sf(double x, double d);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// Quantile of the standard normal distribution, p in (0, 1).
double normal_quantile(double p);

} // namespace fda
