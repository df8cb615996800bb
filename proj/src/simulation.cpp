#include "fda/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "fda/errors.hpp"
#include "fda/inference.hpp"
#include "fda/numerics.hpp"

namespace fda {

double sim_true_mean(const SimConfig& config, double t) {
    return config.a0 + config.a1 * std::cos(2.0 * M_PI * t) +
           config.a2 * std::sin(2.0 * M_PI * t);
}

double sim_true_gamma(const SimConfig& config, double s, double t) {
    return config.s0 + config.s1 * std::cos(2.0 * M_PI * s) * std::cos(2.0 * M_PI * t) +
           config.s2 * std::sin(2.0 * M_PI * s) * std::sin(2.0 * M_PI * t);
}

std::vector<double> sim_true_eigenvalues(const SimConfig& config) {
    // eigenfunctions 1, sqrt(2) cos, sqrt(2) sin on [0, 1]
    std::vector<double> v{config.s0, 0.5 * config.s1, 0.5 * config.s2};
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

double gaussian_gamma_star(const SimConfig& config, double s1, double t1,
                           double s2, double t2) {
    return sim_true_gamma(config, s1, t2) * sim_true_gamma(config, s2, t1) +
           sim_true_gamma(config, s1, s2) * sim_true_gamma(config, t1, t2);
}

SimSample generate_sample(const SimConfig& config, RngStream& stream) {
    if (config.n == 0) throw EmptyDataset("generate_sample: zero subjects requested");
    if (config.m < config.min_points_per_subject)
        throw Error("generate_sample: schedule shorter than the retention minimum");
    if (!(config.missing_rate >= 0.0 && config.missing_rate < 1.0))
        throw Error("generate_sample: missing rate must lie in [0, 1)");

    SimSample sample;
    sample.config = config;
    sample.grid = make_grid(0.0, 1.0, config.grid_size);
    sample.data.a = 0.0;
    sample.data.b = 1.0;
    sample.data.subjects.resize(config.n);
    sample.true_curves = Matrix(config.n, config.grid_size);

    std::vector<double> schedule(config.m);
    for (std::size_t j = 0; j < config.m; ++j)
        schedule[j] = static_cast<double>(j + 1) / static_cast<double>(config.m + 1);

    int width = 1;
    for (std::size_t v = config.n; v >= 10; v /= 10) ++width;

    std::vector<bool> keep(config.m);
    for (std::size_t i = 0; i < config.n; ++i) {
        const double b0 = std::sqrt(config.s0) * stream.normal();
        const double b1 = std::sqrt(config.s1) * stream.normal();
        const double b2 = std::sqrt(config.s2) * stream.normal();

        std::size_t kept = 0;
        do {
            kept = 0;
            for (std::size_t j = 0; j < config.m; ++j) {
                keep[j] = stream.uniform() >= config.missing_rate;
                if (keep[j]) ++kept;
            }
        } while (kept < config.min_points_per_subject);

        Subject& subj = sample.data.subjects[i];
        char buf[32];
        std::snprintf(buf, sizeof buf, "s%0*zu", width, i + 1);
        subj.id = buf;
        subj.times.reserve(kept);
        subj.values.reserve(kept);
        for (std::size_t j = 0; j < config.m; ++j) {
            if (!keep[j]) continue;
            const double t = schedule[j];
            const double f = sim_true_mean(config, t) + b0 +
                             b1 * std::cos(2.0 * M_PI * t) + b2 * std::sin(2.0 * M_PI * t);
            const double sd = std::sqrt(config.noise_scale * (1.0 + t));
            subj.times.push_back(t);
            subj.values.push_back(f + sd * stream.normal());
        }

        for (std::size_t g = 0; g < config.grid_size; ++g) {
            const double t = sample.grid.points[g];
            sample.true_curves(i, g) = sim_true_mean(config, t) + b0 +
                                       b1 * std::cos(2.0 * M_PI * t) +
                                       b2 * std::sin(2.0 * M_PI * t);
        }
    }
    return sample;
}

double mse_f(const CurveSet& curves, const SimSample& sample) {
    if (!same_grid(curves.grid, sample.grid))
        throw GridMismatch("mse_f: curve set grid differs from the sample grid");
    if (curves.curves.rows() != sample.true_curves.rows())
        throw GridMismatch("mse_f: subject counts differ");
    const std::size_t n = curves.curves.rows(), M = curves.curves.cols();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t g = 0; g < M; ++g) {
            const double d = curves.curves(i, g) - sample.true_curves(i, g);
            s += d * d;
        }
    return s / static_cast<double>(n * M);
}

double mse_eta(const MeanEstimate& mean, const SimSample& sample) {
    const std::size_t M = mean.values.size();
    if (M == 0) throw EmptyDataset("mse_eta: empty mean estimate");
    double s = 0.0;
    for (std::size_t g = 0; g < M; ++g) {
        const double d = mean.values[g] - sim_true_mean(sample.config, mean.grid.points[g]);
        s += d * d;
    }
    return s / static_cast<double>(M);
}

BandwidthStudy run_fig1_study(const SimConfig& config, const SmootherSpec& spec,
                              std::size_t replicates,
                              const std::vector<double>& multipliers,
                              std::uint64_t seed) {
    BandwidthStudy study;
    for (std::size_t rep = 0; rep < replicates; ++rep) {
        RngStream stream = spawn_stream(seed, rep);
        try {
            const SimSample sample = generate_sample(config, stream);
            const std::vector<double> candidates =
                default_bandwidth_candidates(sample.data);
            const GcvResult sel = select_bandwidth(sample.data, spec, candidates);

            const MeanEstimate ideal = ideal_mean(sample.true_curves, sample.grid);
            const double ideal_mse = mse_eta(ideal, sample);

            std::vector<BandwidthStudyRow> rows;
            rows.reserve(multipliers.size());
            for (double mult : multipliers) {
                SmootherSpec trial = spec;
                trial.bandwidth = mult * sel.h_star;
                const CurveSet curves = reconstruct(sample.data, sample.grid, trial);
                BandwidthStudyRow row;
                row.replicate = rep;
                row.multiplier = mult;
                row.bandwidth = trial.bandwidth;
                row.gcv = gcv_score(sample.data, curves);
                row.mse_f = mse_f(curves, sample);
                row.mse_eta = mse_eta(estimate_mean(curves), sample);
                row.mse_eta_ideal = ideal_mse;
                rows.push_back(row);
            }
            study.rows.insert(study.rows.end(), rows.begin(), rows.end());
        } catch (const Error&) {
            ++study.dropped_replicates;
        }
    }
    return study;
}

SizePowerResult size_power_study(const SizePowerConfig& config) {
    const std::size_t n = config.model.n;
    if (n < 4) throw TooFewSubjects("size_power_study: need at least four subjects");
    const std::size_t n0 = n / 2;

    DesignMatrix design;
    design.X = Matrix(n, 2);
    design.column_names = {"group1", "group2"};
    for (std::size_t i = 0; i < n; ++i) design.X(i, i < n0 ? 0 : 1) = 1.0;
    Matrix contrast(1, 2);
    contrast(0, 0) = 1.0;
    contrast(0, 1) = -1.0;

    SizePowerResult result;
    std::size_t rejections = 0;
    for (std::size_t rep = 0; rep < config.replicates; ++rep) {
        RngStream stream = spawn_stream(config.seed, rep);
        try {
            SimSample sample = generate_sample(config.model, stream);
            for (std::size_t i = n0; i < n; ++i)
                for (double& y : sample.data.subjects[i].values) y += config.shift;

            SmootherSpec spec = config.spec;
            if (!(spec.bandwidth > 0.0)) {
                const GcvResult sel = select_bandwidth(
                    sample.data, spec, default_bandwidth_candidates(sample.data));
                spec.bandwidth = sel.h_star;
            }
            const CurveSet curves = reconstruct(sample.data, sample.grid, spec);
            const FlmFit fit = fit_flm(curves, design);
            const Restriction restriction = zero_restriction(contrast, sample.grid);
            const Matrix w = standardized_process(fit, restriction);
            const double t_obs = test_statistic(w, sample.grid, 0.0, 1.0);
            const EigenStructure eigen = covariance_eigen(fit.gamma);
            const MixtureNull mixture = mixture_null(eigen, 1);
            const double p = p_value_sim(mixture, t_obs, config.draws, stream);
            if (p <= config.level) ++rejections;
            ++result.replicates_used;
        } catch (const Error&) {
            ++result.dropped_replicates;
        }
    }
    if (result.replicates_used == 0)
        throw Error("size_power_study: every replicate failed");
    result.rejection_rate =
        static_cast<double>(rejections) / static_cast<double>(result.replicates_used);
    result.standard_error = std::sqrt(result.rejection_rate *
                                      (1.0 - result.rejection_rate) /
                                      static_cast<double>(result.replicates_used));
    return result;
}

} // namespace fda
