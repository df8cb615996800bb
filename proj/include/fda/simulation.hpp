#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fda/estimation.hpp"
#include "fda/flm.hpp"
#include "fda/matrix.hpp"
#include "fda/rng.hpp"
#include "fda/smoothing.hpp"

namespace fda {

// Trigonometric random-curve model on [0, 1]:
//   f_i(t) = eta(t) + v_i(t),
//   eta(t) = a0 + a1 cos(2 pi t) + a2 sin(2 pi t),
//   v_i(t) = b_i0 + b_i1 cos(2 pi t) + b_i2 sin(2 pi t),
//   b_i ~ N(0, diag(s0, s1, s2)),  y_ij = f_i(t_ij) + e_ij,
//   e_ij ~ N(0, noise_scale * (1 + t_ij)).
// Scheduled design t_j = j/(m+1); each point is kept independently with
// probability 1 - missing_rate, redrawing the mask until at least
// min_points_per_subject points remain.
struct SimConfig {
    std::size_t n = 20;
    std::size_t m = 40;
    double missing_rate = 0.10;
    double a0 = 1.2, a1 = 2.3, a2 = 4.2;
    double s0 = 1.0, s1 = 2.0, s2 = 3.0; // variances of b_i components
    double noise_scale = 0.1;            // sigma_eps^2 multiplier
    std::size_t grid_size = 400;
    std::size_t min_points_per_subject = 4;
};

struct SimSample {
    FunctionalDataset data;
    Matrix true_curves; // n x grid_size
    EvaluationGrid grid;
    SimConfig config;
};

SimSample generate_sample(const SimConfig& config, RngStream& stream);

// Model quantities of the trigonometric model.
double sim_true_mean(const SimConfig& config, double t);
double sim_true_gamma(const SimConfig& config, double s, double t);
std::vector<double> sim_true_eigenvalues(const SimConfig& config); // descending

// Fourth-order covariance functional of a Gaussian process:
//   gamma*((s1,t1),(s2,t2)) = gamma(s1,t2) gamma(s2,t1) + gamma(s1,s2) gamma(t1,t2)
// evaluated for the model covariance.
double gaussian_gamma_star(const SimConfig& config, double s1, double t1,
                           double s2, double t2);

// Discrepancies between reconstruction and truth on the common grid.
double mse_f(const CurveSet& curves, const SimSample& sample);
double mse_eta(const MeanEstimate& mean, const SimSample& sample);

// One row of the bandwidth-multiplier study: replicate index, bandwidth
// multiplier, realized bandwidth, GCV score, curve and mean reconstruction
// errors, and the no-noise benchmark error of the same replicate.
struct BandwidthStudyRow {
    std::size_t replicate = 0;
    double multiplier = 1.0;
    double bandwidth = 0.0;
    double gcv = 0.0;
    double mse_f = 0.0;
    double mse_eta = 0.0;
    double mse_eta_ideal = 0.0;
};

struct BandwidthStudy {
    std::vector<BandwidthStudyRow> rows;
    std::size_t dropped_replicates = 0;
};

// For each replicate: draw a sample, select h* by GCV over the default
// candidates, then evaluate every multiplier of h*. Replicates where
// selection fails are dropped and counted.
BandwidthStudy run_fig1_study(const SimConfig& config, const SmootherSpec& spec,
                              std::size_t replicates,
                              const std::vector<double>& multipliers,
                              std::uint64_t seed);

// Size / power study of the two-group restriction test under the
// trigonometric model: group 2 coefficient function is shifted by
// `shift` (0 under the null). p-values by the simulated mixture null.
struct SizePowerConfig {
    SimConfig model;
    std::size_t replicates = 500;
    double shift = 0.0;
    double level = 0.05;
    int draws = 2000;
    SmootherSpec spec;        // bandwidth <= 0 selects GCV per replicate
    std::uint64_t seed = 1;
};

struct SizePowerResult {
    double rejection_rate = 0.0;
    double standard_error = 0.0;
    std::size_t replicates_used = 0;
    std::size_t dropped_replicates = 0;
};

SizePowerResult size_power_study(const SizePowerConfig& config);

} // namespace fda
