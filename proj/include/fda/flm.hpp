#pragma once

#include <cstddef>
#include <vector>

#include "fda/estimation.hpp"
#include "fda/matrix.hpp"
#include "fda/smoothing.hpp"

namespace fda {

// Scalar design matrix of the functional linear model, one row per subject.
struct DesignMatrix {
    Matrix X; // n x q
    std::vector<std::string> column_names;

    std::size_t n() const { return X.rows(); }
    std::size_t q() const { return X.cols(); }
};

// Functional linear model fit f_i(t) = x_i' beta(t) + v_i(t).
struct FlmFit {
    Matrix beta;            // q x M, row r = estimated coefficient function
    Matrix residual_curves; // n x M
    CovarianceEstimate gamma; // divisor n - q
    Matrix xtx_inv;         // (X'X)^{-1}, q x q
    EvaluationGrid grid;
};

// Linear restriction C beta(t) = c(t) on the coefficient functions,
// tested over the sub-interval [a_sub, b_sub] of the grid span.
struct Restriction {
    Matrix C;  // k x q, full row rank
    Matrix c;  // k x M on the evaluation grid
    double a_sub = 0.0;
    double b_sub = 0.0;
};

Restriction zero_restriction(const Matrix& C, const EvaluationGrid& grid);

// Pointwise least squares across subjects. Throws TooFewSubjects when
// n <= q and RankDeficientDesign when rcond(X'X) <= 1e-12.
FlmFit fit_flm(const CurveSet& curves, const DesignMatrix& design);

// Estimate under the restriction C beta = c:
//   beta0 = beta - (X'X)^{-1} C' [C (X'X)^{-1} C']^{-1} (C beta - c).
// Throws SingularRestriction when C (X'X)^{-1} C' is singular.
Matrix restricted_fit(const FlmFit& fit, const Restriction& restriction);

// Pointwise normal-quantile bands around each coefficient function:
//   beta_r(t) -+ z_{(1+level)/2} sqrt(gamma(t,t) [(X'X)^{-1}]_rr).
struct CoefficientBands {
    Matrix lower; // q x M
    Matrix upper; // q x M
};

CoefficientBands coefficient_bands(const FlmFit& fit, double level = 0.95);

} // namespace fda
