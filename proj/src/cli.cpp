#include "fda/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fda/errors.hpp"
#include "fda/estimation.hpp"
#include "fda/flm.hpp"
#include "fda/inference.hpp"
#include "fda/io.hpp"
#include "fda/numerics.hpp"
#include "fda/simulation.hpp"
#include "fda/smoothing.hpp"

namespace fda {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& text, char sep = ',') {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("cannot parse number '" + item + "' in '" + text + "'");
        }
    }
    if (out.empty()) throw UsageError("empty number list '" + text + "'");
    return out;
}

struct SmoothingOpts {
    std::string data_path;
    std::string kernel = "gaussian";
    int order = 1;
    std::string bandwidth = "gcv";
    std::size_t grid_size = 400;
    std::string interval;
    std::size_t min_points = 1;
    bool drop_below_min = false;
};

void add_smoothing_options(CLI::App* cmd, SmoothingOpts& opts, bool needs_grid = true) {
    cmd->add_option("--data", opts.data_path, "observations CSV (subject_id,t,y)")
        ->required();
    cmd->add_option("--kernel", opts.kernel, "kernel family: gaussian|epanechnikov|uniform");
    cmd->add_option("--order", opts.order, "local polynomial order (odd)");
    cmd->add_option("--bandwidth", opts.bandwidth, "bandwidth value, or 'gcv'");
    if (needs_grid) cmd->add_option("--grid-size", opts.grid_size, "evaluation grid size");
    cmd->add_option("--interval", opts.interval, "domain a,b (default: observed range)");
    cmd->add_option("--min-points", opts.min_points, "minimum observations per subject");
    cmd->add_flag("--drop-below-min", opts.drop_below_min,
                  "drop subjects below --min-points instead of failing");
}

LoadedDataset load_with_options(const SmoothingOpts& opts) {
    LoadOptions lo;
    lo.min_points = opts.min_points;
    lo.drop_below_min = opts.drop_below_min;
    if (!opts.interval.empty()) {
        const auto iv = parse_double_list(opts.interval);
        if (iv.size() != 2 || !(iv[0] < iv[1]))
            throw UsageError("--interval expects 'a,b' with a < b");
        lo.interval_a = iv[0];
        lo.interval_b = iv[1];
    }
    return load_dataset(opts.data_path, lo);
}

// Resolves --bandwidth into a concrete spec, running GCV selection when asked.
std::pair<SmootherSpec, std::string> resolve_spec(const SmoothingOpts& opts,
                                                  const FunctionalDataset& data) {
    SmootherSpec spec;
    spec.family = kernel_from_name(opts.kernel);
    spec.order = opts.order;
    if (opts.bandwidth == "gcv") {
        const GcvResult sel =
            select_bandwidth(data, spec, default_bandwidth_candidates(data));
        spec.bandwidth = sel.h_star;
        return {spec, "gcv"};
    }
    try {
        std::size_t pos = 0;
        spec.bandwidth = std::stod(opts.bandwidth, &pos);
        if (pos != opts.bandwidth.size() || !(spec.bandwidth > 0.0))
            throw std::invalid_argument(opts.bandwidth);
    } catch (const std::exception&) {
        throw UsageError("--bandwidth expects a positive number or 'gcv'");
    }
    return {spec, "fixed"};
}

EvaluationGrid grid_for(const SmoothingOpts& opts, const FunctionalDataset& data) {
    return make_grid(data.a, data.b, opts.grid_size);
}

std::vector<std::string> subject_ids(const FunctionalDataset& data) {
    std::vector<std::string> ids;
    ids.reserve(data.n());
    for (const auto& s : data.subjects) ids.push_back(s.id);
    return ids;
}

std::string derived_path(const std::string& base, const std::string& tag) {
    const std::size_t dot = base.find_last_of('.');
    const std::size_t slash = base.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return base + "." + tag;
    return base.substr(0, dot) + "." + tag + base.substr(dot);
}

Matrix parse_contrast(const std::string& text, std::size_t q) {
    std::vector<std::vector<double>> rows;
    std::string row_text;
    std::istringstream in(text);
    while (std::getline(in, row_text, ';')) rows.push_back(parse_double_list(row_text));
    if (rows.empty()) throw UsageError("--contrast is empty");
    Matrix c(rows.size(), q);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != q) {
            std::ostringstream msg;
            msg << "--contrast row " << r + 1 << " has " << rows[r].size()
                << " entries, expected " << q;
            throw UsageError(msg.str());
        }
        for (std::size_t a = 0; a < q; ++a) c(r, a) = rows[r][a];
    }
    return c;
}

// Null value c(t): constants per contrast row, or a CSV t,c1,...,ck
// interpolated linearly onto the grid.
Matrix build_null_value(const std::string& null_const, const std::string& null_csv,
                        std::size_t k, const EvaluationGrid& grid) {
    Matrix c(k, grid.size());
    if (!null_const.empty() && !null_csv.empty())
        throw UsageError("--null-const and --null-csv are mutually exclusive");
    if (!null_const.empty()) {
        const auto values = parse_double_list(null_const);
        if (values.size() != k)
            throw UsageError("--null-const needs one value per contrast row");
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t g = 0; g < grid.size(); ++g) c(r, g) = values[r];
        return c;
    }
    if (!null_csv.empty()) {
        std::ifstream in(null_csv);
        if (!in) throw ParseError("cannot open " + null_csv);
        std::string line;
        if (!std::getline(in, line)) throw ParseError(null_csv + ": empty file");
        std::vector<double> ts;
        std::vector<std::vector<double>> vals;
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r") continue;
            const auto fields = parse_double_list(line);
            if (fields.size() != k + 1) {
                std::ostringstream msg;
                msg << null_csv << " line " << line_no << ": expected " << k + 1
                    << " fields";
                throw ParseError(msg.str());
            }
            ts.push_back(fields[0]);
            vals.emplace_back(fields.begin() + 1, fields.end());
        }
        if (ts.size() < 2) throw ParseError(null_csv + ": need at least two rows");
        if (!std::is_sorted(ts.begin(), ts.end()))
            throw ParseError(null_csv + ": rows must be sorted by t");
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double t = grid.points[g];
            if (t < ts.front() - 1e-12 || t > ts.back() + 1e-12)
                throw ParseError(null_csv + ": grid point outside the tabulated range");
            const auto it = std::lower_bound(ts.begin(), ts.end(), t);
            std::size_t j = static_cast<std::size_t>(it - ts.begin());
            if (j == 0) j = 1;
            if (j >= ts.size()) j = ts.size() - 1;
            const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
            for (std::size_t r = 0; r < k; ++r)
                c(r, g) = (1.0 - w) * vals[j - 1][r] + w * vals[j][r];
        }
        return c;
    }
    return c; // zeros
}

std::pair<double, double> season_interval(const std::string& season) {
    if (season == "whole") return {1.0, 365.0};
    if (season == "spring") return {60.0, 151.0};
    if (season == "summer") return {152.0, 243.0};
    if (season == "autumn") return {244.0, 334.0};
    throw UsageError("--season must be whole|spring|summer|autumn");
}

// ---- subcommand payloads ----

struct TestOpts {
    SmoothingOpts smoothing;
    std::string covariates_path;
    std::string contrast;
    std::string null_const;
    std::string null_csv;
    std::string test_interval;
    std::string season;
    std::string methods = "chi2,sim";
    int b_sim = 10000;
    int b_boot = 10000;
    std::uint64_t seed = 1;
    double trace_fraction = 0.9999;
    std::string out;
};

int cmd_test(const TestOpts& opts, std::ostream& out_stream, bool report_only_mixture,
             const std::string& nulldist_out) {
    const LoadedDataset loaded = load_with_options(opts.smoothing);
    const DesignMatrix design = load_covariates(opts.covariates_path, loaded.data);
    const auto [spec, how] = resolve_spec(opts.smoothing, loaded.data);
    const EvaluationGrid grid = grid_for(opts.smoothing, loaded.data);
    const CurveSet curves = reconstruct(loaded.data, grid, spec);
    const FlmFit fit = fit_flm(curves, design);

    const Matrix c_mat = parse_contrast(opts.contrast, design.q());
    Restriction restriction;
    restriction.C = c_mat;
    restriction.c = build_null_value(opts.null_const, opts.null_csv, c_mat.rows(), grid);

    double lo = grid.a, hi = grid.b;
    if (!opts.season.empty() && !opts.test_interval.empty())
        throw UsageError("--season and --test-interval are mutually exclusive");
    if (!opts.season.empty()) std::tie(lo, hi) = season_interval(opts.season);
    if (!opts.test_interval.empty()) {
        const auto iv = parse_double_list(opts.test_interval);
        if (iv.size() != 2 || !(iv[0] < iv[1]))
            throw UsageError("--test-interval expects 'lo,hi' with lo < hi");
        lo = iv[0];
        hi = iv[1];
    }
    restriction.a_sub = lo;
    restriction.b_sub = hi;

    const Matrix w = standardized_process(fit, restriction);
    const double t_obs = test_statistic(w, grid, lo, hi);
    const EigenStructure eigen = covariance_eigen(fit.gamma, opts.trace_fraction);
    const MixtureNull mixture = mixture_null(eigen, static_cast<int>(c_mat.rows()));

    if (report_only_mixture) {
        std::vector<std::vector<double>> rows;
        RngStream stream = spawn_stream(opts.seed, 1);
        rows.reserve(static_cast<std::size_t>(opts.b_sim));
        for (int b = 0; b < opts.b_sim; ++b)
            rows.push_back({mixture_draw(mixture, stream)});
        write_table_csv({"s"}, rows, nulldist_out);
        out_stream << "wrote " << opts.b_sim << " null draws to " << nulldist_out << "\n";
        return 0;
    }

    TestReport report;
    report.statistic = t_obs;
    report.interval_lo = lo;
    report.interval_hi = hi;
    report.eigenvalues = mixture.lambdas;
    report.m_hat = eigen.m_hat;
    report.seed = opts.seed;

    std::istringstream methods_in(opts.methods);
    std::string method;
    while (std::getline(methods_in, method, ',')) {
        if (method == "chi2") {
            report.p_values["chi2"] = p_value_chi2(chi2_approx_params(mixture), t_obs);
        } else if (method == "sim") {
            RngStream stream = spawn_stream(opts.seed, 1);
            report.p_values["sim"] = p_value_sim(mixture, t_obs, opts.b_sim, stream);
            report.draws_sim = opts.b_sim;
        } else if (method == "boot") {
            RngStream stream = spawn_stream(opts.seed, 2);
            report.p_values["boot"] =
                p_value_boot(curves, design, restriction, opts.b_boot, stream);
            report.draws_boot = opts.b_boot;
        } else {
            throw UsageError("unknown method '" + method + "' (chi2|sim|boot)");
        }
    }

    report.config["data"] = opts.smoothing.data_path;
    report.config["covariates"] = opts.covariates_path;
    report.config["kernel"] = opts.smoothing.kernel;
    report.config["order"] = std::to_string(opts.smoothing.order);
    report.config["bandwidth"] = format_double(spec.bandwidth);
    report.config["bandwidth_rule"] = how;
    report.config["grid_size"] = std::to_string(grid.size());
    report.config["interval"] =
        format_double(grid.a) + "," + format_double(grid.b);
    report.config["contrast"] = opts.contrast;
    report.config["methods"] = opts.methods;

    if (!opts.out.empty()) write_report(report, opts.out);
    out_stream << "T_n = " << format_double(t_obs) << " on [" << format_double(lo) << ", "
               << format_double(hi) << "], m_hat = " << eigen.m_hat << "\n";
    for (const auto& [name, p] : report.p_values)
        out_stream << "p_" << name << " = " << format_double(p) << "\n";
    return 0;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
    CLI::App app{"local polynomial smoothing and inference for sparse functional data"};
    app.require_subcommand(1);

    // gcv
    SmoothingOpts gcv_opts;
    std::string gcv_out;
    CLI::App* gcv_cmd = app.add_subcommand("gcv", "bandwidth selection score table");
    add_smoothing_options(gcv_cmd, gcv_opts, false);
    gcv_cmd->add_option("--out", gcv_out, "CSV output path for the score table");

    // smooth
    SmoothingOpts smooth_opts;
    std::string smooth_out;
    CLI::App* smooth_cmd = app.add_subcommand("smooth", "reconstruct curves on a grid");
    add_smoothing_options(smooth_cmd, smooth_opts);
    smooth_cmd->add_option("--out", smooth_out, "CSV output path")->required();

    // mean
    SmoothingOpts mean_opts;
    std::string mean_out;
    CLI::App* mean_cmd = app.add_subcommand("mean", "estimate the mean function");
    add_smoothing_options(mean_cmd, mean_opts);
    mean_cmd->add_option("--out", mean_out, "CSV output path")->required();

    // cov
    SmoothingOpts cov_opts;
    std::string cov_out;
    double cov_trace_fraction = 0.9999;
    CLI::App* cov_cmd = app.add_subcommand("cov", "estimate the covariance surface");
    add_smoothing_options(cov_cmd, cov_opts);
    cov_cmd->add_option("--out", cov_out, "matrix CSV output path")->required();
    cov_cmd->add_option("--trace-fraction", cov_trace_fraction,
                        "retained trace fraction for the eigenvalue table");

    // sigma2
    SmoothingOpts sigma_opts;
    std::string sigma_out;
    double sigma_bandwidth = 0.0;
    CLI::App* sigma_cmd = app.add_subcommand("sigma2", "estimate the noise variance");
    add_smoothing_options(sigma_cmd, sigma_opts);
    sigma_cmd->add_option("--out", sigma_out, "CSV output path")->required();
    sigma_cmd->add_option("--noise-bandwidth", sigma_bandwidth,
                          "kernel bandwidth (default (b-a) N^{-1/5})");

    // fit
    SmoothingOpts fit_opts;
    std::string fit_out, fit_covariates;
    double fit_level = 0.95;
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit the functional linear model");
    add_smoothing_options(fit_cmd, fit_opts);
    fit_cmd->add_option("--covariates", fit_covariates, "covariates CSV")->required();
    fit_cmd->add_option("--level", fit_level, "pointwise band level");
    fit_cmd->add_option("--out", fit_out, "CSV output path")->required();

    // test
    TestOpts test_opts;
    CLI::App* test_cmd = app.add_subcommand("test", "global restriction test");
    add_smoothing_options(test_cmd, test_opts.smoothing);
    test_cmd->add_option("--covariates", test_opts.covariates_path, "covariates CSV")
        ->required();
    test_cmd->add_option("--contrast", test_opts.contrast,
                         "contrast rows, e.g. '1,-1,0' or '1,-1,0;0,1,-1'")
        ->required();
    test_cmd->add_option("--null-const", test_opts.null_const,
                         "constant null value per contrast row");
    test_cmd->add_option("--null-csv", test_opts.null_csv,
                         "tabulated null value CSV t,c1,...,ck");
    test_cmd->add_option("--test-interval", test_opts.test_interval,
                         "integration interval lo,hi");
    test_cmd->add_option("--season", test_opts.season,
                         "preset interval: whole|spring|summer|autumn");
    test_cmd->add_option("--methods", test_opts.methods, "subset of chi2,sim,boot");
    test_cmd->add_option("--B-sim", test_opts.b_sim, "simulated null draws");
    test_cmd->add_option("--B-boot", test_opts.b_boot, "bootstrap replicates");
    test_cmd->add_option("--seed", test_opts.seed, "random seed");
    test_cmd->add_option("--trace-fraction", test_opts.trace_fraction,
                         "retained trace fraction");
    test_cmd->add_option("--out", test_opts.out, "JSON report path");

    // simulate
    SimConfig sim_config;
    std::size_t sim_replicates = 400;
    std::uint64_t sim_seed = 1;
    std::string sim_out, sim_multipliers = "0.5,0.8,1,1.25,2";
    std::string sim_kernel = "gaussian";
    int sim_order = 1;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "bandwidth-multiplier study");
    sim_cmd->add_option("--replicates", sim_replicates, "Monte Carlo replicates");
    sim_cmd->add_option("--n", sim_config.n, "subjects per replicate");
    sim_cmd->add_option("--m", sim_config.m, "scheduled points per subject");
    sim_cmd->add_option("--missing-rate", sim_config.missing_rate, "missingness rate");
    sim_cmd->add_option("--grid-size", sim_config.grid_size, "evaluation grid size");
    sim_cmd->add_option("--kernel", sim_kernel, "kernel family");
    sim_cmd->add_option("--order", sim_order, "local polynomial order");
    sim_cmd->add_option("--multipliers", sim_multipliers, "bandwidth multipliers");
    sim_cmd->add_option("--seed", sim_seed, "random seed");
    sim_cmd->add_option("--out", sim_out, "CSV output path")->required();

    // nulldist
    TestOpts null_opts;
    std::string null_out;
    CLI::App* null_cmd =
        app.add_subcommand("nulldist", "sample the fitted null distribution");
    add_smoothing_options(null_cmd, null_opts.smoothing);
    null_cmd->add_option("--covariates", null_opts.covariates_path, "covariates CSV")
        ->required();
    null_cmd->add_option("--contrast", null_opts.contrast, "contrast rows")->required();
    null_cmd->add_option("--B-sim", null_opts.b_sim, "draw count");
    null_cmd->add_option("--seed", null_opts.seed, "random seed");
    null_cmd->add_option("--trace-fraction", null_opts.trace_fraction,
                         "retained trace fraction");
    null_cmd->add_option("--out", null_out, "CSV output path")->required();

    try {
        std::vector<std::string> argv(args.rbegin(), args.rend());
        app.parse(argv);

        if (gcv_cmd->parsed()) {
            const LoadedDataset loaded = load_with_options(gcv_opts);
            SmootherSpec spec;
            spec.family = kernel_from_name(gcv_opts.kernel);
            spec.order = gcv_opts.order;
            const GcvResult sel = select_bandwidth(
                loaded.data, spec, default_bandwidth_candidates(loaded.data));
            if (!gcv_out.empty()) {
                std::vector<std::vector<double>> rows;
                for (std::size_t k = 0; k < sel.candidates.size(); ++k)
                    rows.push_back({sel.candidates[k], sel.scores[k]});
                write_table_csv({"h", "gcv"}, rows, gcv_out);
            }
            out << format_double(sel.h_star) << "\n";
        } else if (smooth_cmd->parsed()) {
            const LoadedDataset loaded = load_with_options(smooth_opts);
            const auto [spec, how] = resolve_spec(smooth_opts, loaded.data);
            const CurveSet curves =
                reconstruct(loaded.data, grid_for(smooth_opts, loaded.data), spec);
            write_curves_csv(curves, subject_ids(loaded.data), smooth_out);
            out << "smoothed " << loaded.data.n() << " subjects (h = "
                << format_double(spec.bandwidth) << ", " << how << ")\n";
        } else if (mean_cmd->parsed()) {
            const LoadedDataset loaded = load_with_options(mean_opts);
            const auto [spec, how] = resolve_spec(mean_opts, loaded.data);
            const CurveSet curves =
                reconstruct(loaded.data, grid_for(mean_opts, loaded.data), spec);
            const MeanEstimate mean = estimate_mean(curves);
            write_function_csv(mean.grid, mean.values, "mean", mean_out);
            out << "mean on " << mean.grid.size() << " grid points (h = "
                << format_double(spec.bandwidth) << ", " << how << ")\n";
        } else if (cov_cmd->parsed()) {
            const LoadedDataset loaded = load_with_options(cov_opts);
            const auto [spec, how] = resolve_spec(cov_opts, loaded.data);
            const CurveSet curves =
                reconstruct(loaded.data, grid_for(cov_opts, loaded.data), spec);
            const CovarianceEstimate gamma = estimate_covariance(curves, estimate_mean(curves));
            write_matrix_csv(gamma.values, cov_out);
            const EigenStructure eigen = covariance_eigen(gamma, cov_trace_fraction);
            std::vector<std::vector<double>> rows;
            for (std::size_t r = 0; r < eigen.m_hat; ++r)
                rows.push_back({static_cast<double>(r + 1), eigen.eigenvalues[r]});
            write_table_csv({"index", "lambda"}, rows,
                            derived_path(cov_out, "eigenvalues"));
            out << "covariance on " << gamma.grid.size() << "^2 grid, m_hat = "
                << eigen.m_hat << " (h = " << format_double(spec.bandwidth) << ", " << how
                << ")\n";
        } else if (sigma_cmd->parsed()) {
            const LoadedDataset loaded = load_with_options(sigma_opts);
            const auto [spec, how] = resolve_spec(sigma_opts, loaded.data);
            const EvaluationGrid grid = grid_for(sigma_opts, loaded.data);
            const CurveSet curves = reconstruct(loaded.data, grid, spec);
            const VarianceFunctionEstimate sigma2 = estimate_noise_variance(
                loaded.data, curves, sigma_bandwidth, spec.family);
            write_function_csv(sigma2.grid, sigma2.values, "sigma2", sigma_out);
            out << "noise variance on " << grid.size() << " grid points (b = "
                << format_double(sigma2.bandwidth) << ", " << sigma2.empty_windows
                << " empty windows)\n";
        } else if (fit_cmd->parsed()) {
            const LoadedDataset loaded = load_with_options(fit_opts);
            const DesignMatrix design = load_covariates(fit_covariates, loaded.data);
            const auto [spec, how] = resolve_spec(fit_opts, loaded.data);
            const EvaluationGrid grid = grid_for(fit_opts, loaded.data);
            const CurveSet curves = reconstruct(loaded.data, grid, spec);
            double x_extreme = 0.0;
            for (std::size_t i = 0; i < design.n(); ++i)
                for (std::size_t c = 0; c < design.q(); ++c)
                    x_extreme = std::max(x_extreme, std::abs(design.X(i, c)));
            if (x_extreme > 1e6)
                err << "warning: covariate magnitude " << format_double(x_extreme)
                    << " is extreme; consider rescaling\n";
            const FlmFit fit = fit_flm(curves, design);
            std::vector<std::string> header{"t"};
            for (const auto& name : design.column_names) {
                header.push_back(name);
                header.push_back(name + "_lo");
                header.push_back(name + "_hi");
            }
            const CoefficientBands bands = coefficient_bands(fit, fit_level);
            std::vector<std::vector<double>> rows(grid.size());
            for (std::size_t g = 0; g < grid.size(); ++g) {
                rows[g].push_back(grid.points[g]);
                for (std::size_t r = 0; r < design.q(); ++r) {
                    rows[g].push_back(fit.beta(r, g));
                    rows[g].push_back(bands.lower(r, g));
                    rows[g].push_back(bands.upper(r, g));
                }
            }
            write_table_csv(header, rows, fit_out);
            out << "fitted " << design.q() << " coefficient functions (h = "
                << format_double(spec.bandwidth) << ", " << how << ")\n";
        } else if (test_cmd->parsed()) {
            return cmd_test(test_opts, out, false, "");
        } else if (sim_cmd->parsed()) {
            SmootherSpec spec;
            spec.family = kernel_from_name(sim_kernel);
            spec.order = sim_order;
            const std::vector<double> multipliers = parse_double_list(sim_multipliers);
            const BandwidthStudy study = run_fig1_study(sim_config, spec, sim_replicates,
                                                        multipliers, sim_seed);
            std::vector<std::vector<double>> rows;
            rows.reserve(study.rows.size());
            for (const auto& r : study.rows)
                rows.push_back({static_cast<double>(r.replicate), r.multiplier,
                                r.bandwidth, r.gcv, r.mse_f, r.mse_eta, r.mse_eta_ideal});
            write_table_csv({"replicate", "multiplier", "bandwidth", "gcv", "mse_f",
                             "mse_eta", "mse_eta_ideal"},
                            rows, sim_out);
            out << study.rows.size() << " rows (" << study.dropped_replicates
                << " replicates dropped)\n";
        } else if (null_cmd->parsed()) {
            return cmd_test(null_opts, out, true, null_out);
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const DuplicateTimePoint& e) {
        err << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const EmptyAfterFilter& e) {
        err << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const EmptyDataset& e) {
        err << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const TooFewSubjects& e) {
        err << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: numeric: " << e.what() << "\n";
        return 4;
    }
}

} // namespace fda
