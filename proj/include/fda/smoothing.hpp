#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fda/kernels.hpp"
#include "fda/matrix.hpp"

namespace fda {

// One subject's sparse observations: strictly increasing times inside the
// common interval, one response per time.
struct Subject {
    std::string id;
    std::vector<double> times;
    std::vector<double> values;
};

// Collection of irregularly observed curves on a common interval [a, b].
struct FunctionalDataset {
    std::vector<Subject> subjects;
    double a = 0.0;
    double b = 1.0;

    std::size_t n() const { return subjects.size(); }
    std::size_t total_points() const;
};

// Throws when some subject has unsorted/duplicate times, values are not
// finite, or a time lies outside [a, b].
void validate_dataset(const FunctionalDataset& data);

// Uniform evaluation grid with endpoints exactly a and b, size >= 2.
struct EvaluationGrid {
    std::vector<double> points;
    double a = 0.0;
    double b = 1.0;

    std::size_t size() const { return points.size(); }
    double spacing() const { return (b - a) / static_cast<double>(points.size() - 1); }
};

EvaluationGrid make_grid(double a, double b, std::size_t size);

// True when the two grids cover the same interval with the same points.
bool same_grid(const EvaluationGrid& g1, const EvaluationGrid& g2);

// Local polynomial smoother configuration: kernel family, odd polynomial
// order, common bandwidth shared by all subjects.
struct SmootherSpec {
    KernelFamily family = KernelFamily::gaussian;
    int order = 1;
    double bandwidth = 0.0;
};

// Weights w_j(t) of the local polynomial fit at t from design points `times`:
// the fitted level is sum_j w_j(t) y_j. Satisfies sum_j w_j = 1 and
// sum_j w_j (t_j - t)^r = 0 for r = 1..order. When fewer than order+1 points
// carry kernel weight, or the local Gram matrix is singular, the bandwidth is
// widened locally by factors of 1.5 up to 8x before InsufficientLocalData is
// thrown.
std::vector<double> lpk_weights(const std::vector<double>& times, double t,
                                const SmootherSpec& spec);

// Reconstructed curves on a common grid plus the per-subject ingredients of
// generalized cross-validation.
struct CurveSet {
    Matrix curves; // n x M, row i = subject i on the grid
    EvaluationGrid grid;
    std::vector<std::vector<double>> fitted_at_design; // ragged, subject layout
    std::vector<double> traces;                        // tr(A_i) of each smoother matrix
    SmootherSpec spec;
};

CurveSet reconstruct(const FunctionalDataset& data, const EvaluationGrid& grid,
                     const SmootherSpec& spec);

// GCV(h) = n^{-1} sum_i ||y_i - yhat_i||^2 / (1 - tr(A_i)/n_i)^2.
// Returns +infinity when any subject is within 1e-8 of interpolation
// (tr(A_i)/n_i >= 1 - 1e-8), so a grid search can skip the candidate.
double gcv_score(const FunctionalDataset& data, const SmootherSpec& spec);

// Same score reusing the design-point fits and traces of an existing
// reconstruction (no second smoothing pass).
double gcv_score(const FunctionalDataset& data, const CurveSet& curves);

struct GcvResult {
    double h_star = 0.0;                // argmin, ties resolved to smaller h
    std::vector<double> candidates;
    std::vector<double> scores;         // +infinity marks infeasible candidates
};

// Evaluates GCV on each candidate bandwidth; candidates where smoothing
// fails or degenerates score +infinity. Throws NoFeasibleBandwidth when no
// candidate yields a finite score.
GcvResult select_bandwidth(const FunctionalDataset& data, const SmootherSpec& spec,
                           const std::vector<double>& candidates);

// 30 log-spaced candidates between half the median within-subject gap and a
// quarter of the interval length.
std::vector<double> default_bandwidth_candidates(const FunctionalDataset& data);

} // namespace fda
