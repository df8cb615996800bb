#include "fda/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fda/errors.hpp"
#include "fda/numerics.hpp"

namespace fda {

namespace {

constexpr int kMaxOrder = 7;
constexpr double kWidenFactor = 1.5;
constexpr double kWidenCap = 8.0;
// Local fits below this (equilibrated) reciprocal condition number widen
// instead of returning weights: beyond it the weight identities can no
// longer be guaranteed to 1e-10 in double precision, and the fit itself is
// statistically meaningless anyway.
constexpr double kLocalRcondFloor = 1e-6;

// Jacobi eigensolver specialized for the tiny local Gram matrices
// ((order+1) <= 8); avoids heap traffic in the per-point hot loop.
struct SmallEigen {
    double values[kMaxOrder + 1];
    double vectors[(kMaxOrder + 1) * (kMaxOrder + 1)]; // vectors[i*q+r]
};

void small_sym_eigen(const double* s, int q, SmallEigen& e) {
    double a[(kMaxOrder + 1) * (kMaxOrder + 1)];
    for (int i = 0; i < q * q; ++i) {
        a[i] = s[i];
        e.vectors[i] = 0.0;
    }
    for (int i = 0; i < q; ++i) e.vectors[i * q + i] = 1.0;
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < q; ++p)
            for (int r = p + 1; r < q; ++r) off += a[p * q + r] * a[p * q + r];
        if (off <= 1e-32) break;
        for (int p = 0; p < q - 1; ++p) {
            for (int r = p + 1; r < q; ++r) {
                const double apr = a[p * q + r];
                if (std::abs(apr) <= 1e-300) continue;
                const double app = a[p * q + p], arr = a[r * q + r];
                const double theta = (arr - app) / (2.0 * apr);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t), sn = t * c;
                for (int i = 0; i < q; ++i) {
                    if (i == p || i == r) continue;
                    const double aip = a[i * q + p], air = a[i * q + r];
                    a[i * q + p] = a[p * q + i] = c * aip - sn * air;
                    a[i * q + r] = a[r * q + i] = sn * aip + c * air;
                }
                a[p * q + p] = app - t * apr;
                a[r * q + r] = arr + t * apr;
                a[p * q + r] = a[r * q + p] = 0.0;
                for (int i = 0; i < q; ++i) {
                    const double vip = e.vectors[i * q + p], vir = e.vectors[i * q + r];
                    e.vectors[i * q + p] = c * vip - sn * vir;
                    e.vectors[i * q + r] = sn * vip + c * vir;
                }
            }
        }
    }
    for (int i = 0; i < q; ++i) e.values[i] = a[i * q + i];
}

// Solves S x = e1 and returns false when S is numerically singular. The
// system is equilibrated to unit diagonal first, so the singularity test
// measures collinearity of the local design rather than the scale gap
// between basis powers (at very large bandwidths all scaled times are tiny
// and the raw Gram matrix looks singular even though the fit is fine). One
// refinement step keeps the moment identities tight.
bool solve_gram_e1(const double* s, int q, double* x) {
    double d[kMaxOrder + 1];
    for (int a = 0; a < q; ++a) {
        if (!(s[a * q + a] > 0.0)) return false;
        d[a] = 1.0 / std::sqrt(s[a * q + a]);
    }
    double sc[(kMaxOrder + 1) * (kMaxOrder + 1)];
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) sc[a * q + b] = s[a * q + b] * d[a] * d[b];

    SmallEigen e;
    small_sym_eigen(sc, q, e);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int r = 0; r < q; ++r) {
        const double a = std::abs(e.values[r]);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    if (hi == 0.0 || lo / hi <= kLocalRcondFloor) return false;

    // y solves (D S D) y = D e1; then x = D y.
    double y[kMaxOrder + 1];
    const double b0 = d[0];
    for (int i = 0; i < q; ++i) y[i] = 0.0;
    for (int r = 0; r < q; ++r) {
        const double z = e.vectors[r] * b0 / e.values[r]; // row 0 of vectors = e1 components
        for (int i = 0; i < q; ++i) y[i] += e.vectors[i * q + r] * z;
    }
    for (int step = 0; step < 2; ++step) {
        // the residual is formed with compensated products and sums; a plain
        // double accumulation would hide exactly the part refinement needs
        double resid[kMaxOrder + 1];
        for (int a = 0; a < q; ++a) {
            double sum = (a == 0) ? b0 : 0.0;
            double comp = 0.0;
            for (int b = 0; b < q; ++b) {
                const double p = -sc[a * q + b] * y[b];
                comp += std::fma(-sc[a * q + b], y[b], -p);
                const double t = sum + p;
                comp += (std::abs(sum) >= std::abs(p)) ? (sum - t) + p : (p - t) + sum;
                sum = t;
            }
            resid[a] = sum + comp;
        }
        for (int r = 0; r < q; ++r) {
            double proj = 0.0;
            for (int i = 0; i < q; ++i) proj += e.vectors[i * q + r] * resid[i];
            const double z = proj / e.values[r];
            for (int i = 0; i < q; ++i) y[i] += e.vectors[i * q + r] * z;
        }
    }
    for (int i = 0; i < q; ++i) x[i] = d[i] * y[i];
    return true;
}

// One local fit attempt at bandwidth h; fills weights and returns true when
// the local Gram matrix is well conditioned.
bool try_local_fit(const std::vector<double>& times, double t, double h,
                   const SmootherSpec& spec, std::vector<double>& weights) {
    const int q = spec.order + 1;
    const std::size_t m = times.size();
    weights.assign(m, 0.0);

    double s[(kMaxOrder + 1) * (kMaxOrder + 1)] = {0.0};
    int positive = 0;
    double u[kMaxOrder + 1];
    for (std::size_t j = 0; j < m; ++j) {
        const double k = eval_kernel(spec.family, (times[j] - t) / h);
        weights[j] = k;
        if (k <= 0.0) continue;
        ++positive;
        u[0] = 1.0;
        const double uj = (times[j] - t) / h;
        for (int r = 1; r < q; ++r) u[r] = u[r - 1] * uj;
        for (int a = 0; a < q; ++a)
            for (int b = a; b < q; ++b) s[a * q + b] += k * u[a] * u[b];
    }
    if (positive < q) return false;
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < a; ++b) s[a * q + b] = s[b * q + a];

    double coef[kMaxOrder + 1];
    if (!solve_gram_e1(s, q, coef)) return false;

    for (std::size_t j = 0; j < m; ++j) {
        const double k = weights[j];
        if (k <= 0.0) {
            weights[j] = 0.0;
            continue;
        }
        const double uj = (times[j] - t) / h;
        double poly = 0.0, ur = 1.0;
        for (int r = 0; r < q; ++r) {
            poly += coef[r] * ur;
            ur *= uj;
        }
        weights[j] = poly * k;
    }
    return true;
}

} // namespace

std::size_t FunctionalDataset::total_points() const {
    std::size_t n = 0;
    for (const auto& s : subjects) n += s.times.size();
    return n;
}

void validate_dataset(const FunctionalDataset& data) {
    if (data.subjects.empty()) throw EmptyDataset("dataset has no subjects");
    if (!(data.a < data.b)) throw Error("dataset interval is empty");
    for (const auto& s : data.subjects) {
        if (s.times.empty()) throw EmptyDataset("subject " + s.id + " has no observations");
        if (s.times.size() != s.values.size())
            throw GridMismatch("subject " + s.id + ": times and values differ in length");
        for (std::size_t j = 0; j < s.times.size(); ++j) {
            if (!std::isfinite(s.times[j]) || !std::isfinite(s.values[j]))
                throw Error("subject " + s.id + ": non-finite observation");
            if (s.times[j] < data.a || s.times[j] > data.b)
                throw Error("subject " + s.id + ": time outside the interval");
            if (j > 0) {
                if (s.times[j] == s.times[j - 1])
                    throw DuplicateTimePoint("subject " + s.id + ": duplicate time " +
                                             std::to_string(s.times[j]));
                if (s.times[j] < s.times[j - 1])
                    throw Error("subject " + s.id + ": times are not sorted");
            }
        }
    }
}

EvaluationGrid make_grid(double a, double b, std::size_t size) {
    if (!(a < b)) throw Error("make_grid: interval is empty");
    if (size < 2) throw Error("make_grid: need at least two points");
    EvaluationGrid g;
    g.a = a;
    g.b = b;
    g.points.resize(size);
    const double dt = (b - a) / static_cast<double>(size - 1);
    for (std::size_t i = 0; i < size; ++i) g.points[i] = a + dt * static_cast<double>(i);
    g.points.back() = b;
    return g;
}

bool same_grid(const EvaluationGrid& g1, const EvaluationGrid& g2) {
    if (g1.size() != g2.size()) return false;
    const double tol = 1e-12 * (g1.b - g1.a);
    return std::abs(g1.a - g2.a) <= tol && std::abs(g1.b - g2.b) <= tol;
}

std::vector<double> lpk_weights(const std::vector<double>& times, double t,
                                const SmootherSpec& spec) {
    if (spec.order < 1 || spec.order % 2 == 0 || spec.order > kMaxOrder)
        throw Error("lpk_weights: order must be odd, between 1 and 7");
    if (!(spec.bandwidth > 0.0)) throw Error("lpk_weights: bandwidth must be positive");
    std::vector<double> weights;
    double h = spec.bandwidth;
    while (true) {
        if (try_local_fit(times, t, h, spec, weights)) return weights;
        const double next = h * kWidenFactor;
        if (next > spec.bandwidth * kWidenCap) break;
        h = next;
    }
    std::ostringstream msg;
    msg << "local fit is singular at t = " << t << " (bandwidth " << spec.bandwidth
        << " widened up to " << h << ")";
    throw InsufficientLocalData(msg.str());
}

CurveSet reconstruct(const FunctionalDataset& data, const EvaluationGrid& grid,
                     const SmootherSpec& spec) {
    if (data.subjects.empty()) throw EmptyDataset("reconstruct: dataset has no subjects");
    const std::size_t n = data.n(), M = grid.size();
    CurveSet out;
    out.curves = Matrix(n, M);
    out.grid = grid;
    out.spec = spec;
    out.fitted_at_design.resize(n);
    out.traces.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Subject& subj = data.subjects[i];
        try {
            for (std::size_t g = 0; g < M; ++g) {
                const std::vector<double> w = lpk_weights(subj.times, grid.points[g], spec);
                double fit = 0.0;
                for (std::size_t j = 0; j < w.size(); ++j) fit += w[j] * subj.values[j];
                out.curves(i, g) = fit;
            }
            auto& fitted = out.fitted_at_design[i];
            fitted.resize(subj.times.size());
            for (std::size_t j = 0; j < subj.times.size(); ++j) {
                const std::vector<double> w = lpk_weights(subj.times, subj.times[j], spec);
                double fit = 0.0;
                for (std::size_t l = 0; l < w.size(); ++l) fit += w[l] * subj.values[l];
                fitted[j] = fit;
                out.traces[i] += w[j];
            }
        } catch (const InsufficientLocalData& e) {
            throw InsufficientLocalData("subject " + subj.id + ": " + e.what());
        }
    }
    return out;
}

namespace {

double gcv_from_parts(const FunctionalDataset& data,
                      const std::vector<std::vector<double>>& fitted,
                      const std::vector<double>& traces) {
    const std::size_t n = data.n();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Subject& subj = data.subjects[i];
        const std::size_t m = subj.times.size();
        const double ratio = traces[i] / static_cast<double>(m);
        if (ratio >= 1.0 - 1e-8) return std::numeric_limits<double>::infinity();
        double rss = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double r = subj.values[j] - fitted[i][j];
            rss += r * r;
        }
        const double denom = 1.0 - ratio;
        total += rss / (denom * denom);
    }
    return total / static_cast<double>(n);
}

} // namespace

double gcv_score(const FunctionalDataset& data, const SmootherSpec& spec) {
    if (data.subjects.empty()) throw EmptyDataset("gcv_score: dataset has no subjects");
    const std::size_t n = data.n();
    std::vector<std::vector<double>> fitted(n);
    std::vector<double> traces(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Subject& subj = data.subjects[i];
        fitted[i].resize(subj.times.size());
        for (std::size_t j = 0; j < subj.times.size(); ++j) {
            const std::vector<double> w = lpk_weights(subj.times, subj.times[j], spec);
            double fit = 0.0;
            for (std::size_t l = 0; l < w.size(); ++l) fit += w[l] * subj.values[l];
            fitted[i][j] = fit;
            traces[i] += w[j];
        }
    }
    return gcv_from_parts(data, fitted, traces);
}

double gcv_score(const FunctionalDataset& data, const CurveSet& curves) {
    if (curves.fitted_at_design.size() != data.n() || curves.traces.size() != data.n())
        throw GridMismatch("gcv_score: curve set does not match the dataset");
    for (std::size_t i = 0; i < data.n(); ++i)
        if (curves.fitted_at_design[i].size() != data.subjects[i].times.size())
            throw GridMismatch("gcv_score: curve set does not match the dataset");
    return gcv_from_parts(data, curves.fitted_at_design, curves.traces);
}

GcvResult select_bandwidth(const FunctionalDataset& data, const SmootherSpec& spec,
                           const std::vector<double>& candidates) {
    if (candidates.empty()) throw NoFeasibleBandwidth("select_bandwidth: no candidates");
    GcvResult result;
    result.candidates = candidates;
    result.scores.assign(candidates.size(), std::numeric_limits<double>::infinity());
    double best = std::numeric_limits<double>::infinity();
    double best_h = 0.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        SmootherSpec trial = spec;
        trial.bandwidth = candidates[k];
        double score;
        try {
            score = gcv_score(data, trial);
        } catch (const InsufficientLocalData&) {
            score = std::numeric_limits<double>::infinity();
        }
        result.scores[k] = score;
        if (score < best || (score == best && candidates[k] < best_h)) {
            best = score;
            best_h = candidates[k];
        }
    }
    if (!std::isfinite(best))
        throw NoFeasibleBandwidth("select_bandwidth: every candidate failed or degenerated");
    result.h_star = best_h;
    return result;
}

std::vector<double> default_bandwidth_candidates(const FunctionalDataset& data) {
    if (data.subjects.empty()) throw EmptyDataset("dataset has no subjects");
    std::vector<double> gaps;
    for (const auto& s : data.subjects)
        for (std::size_t j = 1; j < s.times.size(); ++j)
            gaps.push_back(s.times[j] - s.times[j - 1]);
    const double hi = 0.25 * (data.b - data.a);
    double lo;
    if (gaps.empty()) {
        lo = hi * 1e-2;
    } else {
        std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
        lo = 0.5 * gaps[gaps.size() / 2];
        if (!(lo > 0.0) || lo >= hi) lo = hi * 1e-2;
    }
    const std::size_t count = 30;
    std::vector<double> out(count);
    const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = lo * std::exp(ratio * static_cast<double>(k));
    out.back() = hi;
    return out;
}

} // namespace fda
