#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fda/kernels.hpp"
#include "fda/matrix.hpp"
#include "fda/smoothing.hpp"

namespace fda {

struct MeanEstimate {
    std::vector<double> values; // on grid
    EvaluationGrid grid;
    std::size_t n = 0; // subjects averaged
};

struct CovarianceEstimate {
    Matrix values; // M x M, symmetric
    EvaluationGrid grid;
    int divisor = 0; // n-1 for the sample path, n-q for the regression path
};

struct VarianceFunctionEstimate {
    std::vector<double> values; // sigma^2 on grid, NaN where the window is empty
    EvaluationGrid grid;
    double bandwidth = 0.0;
    KernelFamily family = KernelFamily::gaussian;
    std::size_t empty_windows = 0;
};

// Cross-sectional mean of the reconstructed curves.
MeanEstimate estimate_mean(const CurveSet& curves);

// Sample covariance surface of the reconstructed curves about the given
// mean, divisor n-1.
CovarianceEstimate estimate_covariance(const CurveSet& curves, const MeanEstimate& mean);

// Versions computed from the true curves of a simulation (no smoothing);
// benchmarks for the smoothing-first estimators.
MeanEstimate ideal_mean(const Matrix& true_curves, const EvaluationGrid& grid);
CovarianceEstimate ideal_covariance(const Matrix& true_curves, const EvaluationGrid& grid);

// Kernel regression of squared residuals on design points, evaluated on the
// grid the curves were reconstructed on:
//   sigma2(tau) = sum_ij H_b(t_ij - tau) e_ij^2 / sum_ij H_b(t_ij - tau),
// with e_ij the smoothing residuals. Grid points with an empty window are
// reported as NaN rather than an error. Bandwidth <= 0 selects the default
// (b - a) * N^{-1/5} with N the total number of observations.
VarianceFunctionEstimate estimate_noise_variance(const FunctionalDataset& data,
                                                 const CurveSet& curves,
                                                 double bandwidth = 0.0,
                                                 KernelFamily family = KernelFamily::gaussian);

// True model ingredients of the asymptotic mean squared error of the
// reconstruction, each as a function of t.
struct TheoreticalAmseInputs {
    std::function<double(double)> mean_deriv;       // eta^{(p+1)}
    std::function<double(double)> gamma_deriv_diag; // d^{2(p+1)} gamma / ds^{p+1} dt^{p+1} at (t, t)
    std::function<double(double)> sigma2;           // noise variance
    std::function<double(double)> design_density;   // pi
    double harmonic_mean_m = 0.0;                   // harmonic mean of the per-subject counts
};

// Leading-order MSE of the local polynomial reconstruction at an interior
// point t:
//   B_{p+1}(K*)^2 [ eta^{(p+1)}(t)^2 + gamma_deriv_diag(t) ] / ((p+1)!)^2 * h^{2(p+1)}
//   + V(K*) sigma2(t) / (pi(t) m h).
double theoretical_amse(const TheoreticalAmseInputs& inputs, const SmootherSpec& spec,
                        double t);

} // namespace fda
