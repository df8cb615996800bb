#pragma once

#include <cstddef>
#include <vector>

#include "fda/flm.hpp"
#include "fda/matrix.hpp"
#include "fda/rng.hpp"

namespace fda {

// Standardized restriction process
//   w(t) = [C (X'X)^{-1} C']^{-1/2} (C beta(t) - c(t)),  k x M.
Matrix standardized_process(const FlmFit& fit, const Restriction& restriction);

// Global statistic T_n = sum_l int_{a'}^{b'} w_l(t)^2 dt by the trapezoid
// rule over the grid points inside [lo, hi]. Throws EmptyInterval when fewer
// than two grid points fall inside.
double test_statistic(const Matrix& w, const EvaluationGrid& grid, double lo, double hi);

enum class MhatRule { trace_fraction, positive_count };

// Eigenstructure of a covariance surface viewed as an integral operator.
struct EigenStructure {
    std::vector<double> eigenvalues; // full spectrum, clipped at 0, descending
    Matrix eigenfunctions;           // M x m_hat, int phi_r phi_s = delta_rs
    std::size_t m_hat = 0;
    double trace_fraction = 0.0;     // requested fraction
    EvaluationGrid grid;
};

// Discretizes the operator with trapezoid quadrature weights, solves the
// symmetric eigenproblem, clips negative eigenvalues at zero and keeps the
// smallest m_hat reaching `trace_fraction` of the clipped trace (rule
// trace_fraction) or all strictly positive eigenvalues (rule positive_count),
// capped at the covariance divisor. Throws ZeroTrace when the clipped trace
// vanishes.
EigenStructure covariance_eigen(const CovarianceEstimate& gamma,
                                double trace_fraction = 0.9999,
                                MhatRule rule = MhatRule::trace_fraction);

// Null distribution sum_r lambda_r A_r with A_r iid chi-square(k).
struct MixtureNull {
    std::vector<double> lambdas;
    int k = 1;
};

MixtureNull mixture_null(const EigenStructure& eigen, int k);

// Three-cumulant chi-square approximation alpha * chi2_d + beta matched to
// the mixture: alpha = kappa3 / (4 kappa2), d = 8 kappa2^3 / kappa3^2,
// beta = kappa1 - alpha d. Throws DegenerateMixture when all lambdas vanish.
struct ChiSquareApprox {
    double alpha = 0.0;
    double d = 0.0;
    double beta = 0.0;
};

ChiSquareApprox chi2_approx_params(const MixtureNull& mixture);

// P(alpha chi2_d + beta > t); returns 1 when (t - beta)/alpha <= 0.
double p_value_chi2(const ChiSquareApprox& approx, double t);

// Monte Carlo tail probability with the add-one rule
//   (1 + #{S_b >= t}) / (B + 1).
double p_value_sim(const MixtureNull& mixture, double t, int draws, RngStream& stream);

// One draw of the mixture, used for null-distribution samples.
double mixture_draw(const MixtureNull& mixture, RngStream& stream);

// Residual bootstrap of the restricted model: resamples whole residual
// curves with replacement, rebuilds f*_i = x_i' beta0 + v*_i, refits the
// model on the same grid (no re-smoothing) and recomputes the statistic
// over the restriction's sub-interval. A replicate whose refit fails is
// redrawn; 10 consecutive failures abort.
double p_value_boot(const CurveSet& curves, const DesignMatrix& design,
                    const Restriction& restriction, int draws, RngStream& stream);

// Noncentrality coefficients u_r^2 = lambda_r^{-1} sum_l (int w_l phi_r)^2
// of a deterministic shift eta_w (k x M) against the eigenstructure, for
// r = 1..m_hat. Throws ZeroEigenvalue when some retained lambda_r is zero.
std::vector<double> noncentrality(const EigenStructure& eigen, const Matrix& eta_w);

} // namespace fda
