#include "fda/estimation.hpp"

#include <cmath>
#include <limits>

#include "fda/errors.hpp"
#include "fda/numerics.hpp"

namespace fda {

MeanEstimate estimate_mean(const CurveSet& curves) {
    const std::size_t n = curves.curves.rows(), M = curves.curves.cols();
    if (n == 0) throw EmptyDataset("estimate_mean: no curves");
    MeanEstimate out;
    out.grid = curves.grid;
    out.n = n;
    out.values.assign(M, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = curves.curves.row(i);
        for (std::size_t g = 0; g < M; ++g) out.values[g] += row[g];
    }
    for (double& v : out.values) v /= static_cast<double>(n);
    return out;
}

namespace {

CovarianceEstimate covariance_of_rows(const Matrix& rows, const std::vector<double>& mean,
                                      const EvaluationGrid& grid) {
    const std::size_t n = rows.rows(), M = rows.cols();
    if (n < 2) throw TooFewSubjects("covariance needs at least two curves");
    if (mean.size() != M) throw GridMismatch("covariance: mean does not match the curves");

    CovarianceEstimate out;
    out.grid = grid;
    out.divisor = static_cast<int>(n) - 1;
    out.values = Matrix(M, M);
    std::vector<double> centered(M);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = rows.row(i);
        for (std::size_t g = 0; g < M; ++g) centered[g] = r[g] - mean[g];
        for (std::size_t s = 0; s < M; ++s) {
            const double cs = centered[s];
            if (cs == 0.0) continue;
            double* orow = out.values.row(s);
            for (std::size_t t = s; t < M; ++t) orow[t] += cs * centered[t];
        }
    }
    const double scale = 1.0 / static_cast<double>(out.divisor);
    for (std::size_t s = 0; s < M; ++s)
        for (std::size_t t = s; t < M; ++t) {
            out.values(s, t) *= scale;
            out.values(t, s) = out.values(s, t);
        }
    return out;
}

} // namespace

CovarianceEstimate estimate_covariance(const CurveSet& curves, const MeanEstimate& mean) {
    if (!same_grid(curves.grid, mean.grid))
        throw GridMismatch("estimate_covariance: mean grid does not match the curves");
    return covariance_of_rows(curves.curves, mean.values, curves.grid);
}

MeanEstimate ideal_mean(const Matrix& true_curves, const EvaluationGrid& grid) {
    if (true_curves.cols() != grid.size())
        throw GridMismatch("ideal_mean: curves do not match the grid");
    CurveSet tmp;
    tmp.curves = true_curves;
    tmp.grid = grid;
    return estimate_mean(tmp);
}

CovarianceEstimate ideal_covariance(const Matrix& true_curves, const EvaluationGrid& grid) {
    if (true_curves.cols() != grid.size())
        throw GridMismatch("ideal_covariance: curves do not match the grid");
    CurveSet tmp;
    tmp.curves = true_curves;
    tmp.grid = grid;
    return covariance_of_rows(true_curves, estimate_mean(tmp).values, grid);
}

VarianceFunctionEstimate estimate_noise_variance(const FunctionalDataset& data,
                                                 const CurveSet& curves,
                                                 double bandwidth,
                                                 KernelFamily family) {
    const EvaluationGrid& grid = curves.grid;
    const std::size_t n = data.n();
    if (n == 0) throw EmptyDataset("estimate_noise_variance: dataset has no subjects");
    if (curves.fitted_at_design.size() != n)
        throw GridMismatch("estimate_noise_variance: curve set does not match the dataset");
    const std::size_t N = data.total_points();
    double b = bandwidth;
    if (!(b > 0.0))
        b = (data.b - data.a) * std::pow(static_cast<double>(N), -0.2);

    std::vector<double> res2;
    std::vector<double> times;
    res2.reserve(N);
    times.reserve(N);
    for (std::size_t i = 0; i < n; ++i) {
        const Subject& subj = data.subjects[i];
        if (curves.fitted_at_design[i].size() != subj.times.size())
            throw GridMismatch("estimate_noise_variance: curve set does not match the dataset");
        for (std::size_t j = 0; j < subj.times.size(); ++j) {
            const double e = subj.values[j] - curves.fitted_at_design[i][j];
            res2.push_back(e * e);
            times.push_back(subj.times[j]);
        }
    }

    VarianceFunctionEstimate out;
    out.grid = grid;
    out.bandwidth = b;
    out.family = family;
    out.values.assign(grid.size(), 0.0);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double tau = grid.points[g];
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < times.size(); ++j) {
            const double k = eval_kernel(family, (times[j] - tau) / b);
            num += k * res2[j];
            den += k;
        }
        if (den > 0.0) {
            out.values[g] = num / den;
        } else {
            out.values[g] = std::numeric_limits<double>::quiet_NaN();
            ++out.empty_windows;
        }
    }
    return out;
}

double theoretical_amse(const TheoreticalAmseInputs& inputs, const SmootherSpec& spec,
                        double t) {
    if (!(spec.bandwidth > 0.0)) throw Error("theoretical_amse: bandwidth must be positive");
    if (!(inputs.harmonic_mean_m > 0.0)) throw Error("theoretical_amse: mean count must be positive");
    const double density = inputs.design_density ? inputs.design_density(t) : 1.0;
    if (!(density > 0.0)) throw Error("theoretical_amse: design density must be positive");
    const int p = spec.order;
    const EquivalentKernel eq = equivalent_kernel(spec.family, p);
    const KernelFunctionals f = kernel_functionals(eq, p + 1);
    double fact = 1.0;
    for (int r = 2; r <= p + 1; ++r) fact *= r;
    const double bias_coef = f.B[p + 1] / fact;
    const double h = spec.bandwidth;
    const double h_pow = std::pow(h, 2.0 * (p + 1));
    const double md = inputs.mean_deriv ? inputs.mean_deriv(t) : 0.0;
    const double gd = inputs.gamma_deriv_diag ? inputs.gamma_deriv_diag(t) : 0.0;
    const double s2 = inputs.sigma2 ? inputs.sigma2(t) : 0.0;
    const double bias2 = bias_coef * bias_coef * (md * md + gd) * h_pow;
    const double variance = f.V * s2 / (density * inputs.harmonic_mean_m * h);
    return bias2 + variance;
}

} // namespace fda
