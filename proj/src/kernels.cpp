#include "fda/kernels.hpp"

#include <cmath>

#include "fda/errors.hpp"
#include "fda/matrix.hpp"
#include "fda/numerics.hpp"

namespace fda {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;

// Composite Simpson rule with an odd number of nodes.
template <class F>
double simpson(F&& f, double lo, double hi, int nodes = 2001) {
    if (hi <= lo) return 0.0;
    if (nodes % 2 == 0) ++nodes;
    const double h = (hi - lo) / (nodes - 1);
    double s = f(lo) + f(hi);
    for (int i = 1; i < nodes - 1; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

KernelFamily kernel_from_name(const std::string& name) {
    if (name == "gaussian") return KernelFamily::gaussian;
    if (name == "epanechnikov") return KernelFamily::epanechnikov;
    if (name == "uniform") return KernelFamily::uniform;
    throw Error("unknown kernel family: " + name);
}

std::string kernel_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::epanechnikov: return "epanechnikov";
        case KernelFamily::uniform: return "uniform";
    }
    return "";
}

double eval_kernel(KernelFamily family, double t) {
    switch (family) {
        case KernelFamily::gaussian:
            return kInvSqrt2Pi * std::exp(-0.5 * t * t);
        case KernelFamily::epanechnikov:
            return std::abs(t) <= 1.0 ? 0.75 * (1.0 - t * t) : 0.0;
        case KernelFamily::uniform:
            return std::abs(t) <= 1.0 ? 0.5 : 0.0;
    }
    return 0.0;
}

double kernel_support(KernelFamily family) {
    return family == KernelFamily::gaussian ? 8.0 : 1.0;
}

KernelFunctionals kernel_functionals(KernelFamily family, int max_moment) {
    KernelFunctionals out;
    out.B.assign(static_cast<std::size_t>(max_moment) + 1, 0.0);
    switch (family) {
        case KernelFamily::gaussian: {
            // even moments of the standard normal: (r-1)!!
            double m = 1.0;
            for (int r = 0; r <= max_moment; r += 2) {
                out.B[r] = m;
                m *= r + 1.0;
            }
            out.V = 0.5 / std::sqrt(M_PI);
            out.K1 = [](double t) { return std::exp(-0.25 * t * t) / (2.0 * std::sqrt(M_PI)); };
            break;
        }
        case KernelFamily::epanechnikov: {
            for (int r = 0; r <= max_moment; r += 2)
                out.B[r] = 3.0 / ((r + 1.0) * (r + 3.0));
            out.V = 0.6;
            out.K1 = [](double t) {
                const double lo = std::max(-1.0, -1.0 - t), hi = std::min(1.0, 1.0 - t);
                return simpson(
                    [t](double s) {
                        return eval_kernel(KernelFamily::epanechnikov, s) *
                               eval_kernel(KernelFamily::epanechnikov, s + t);
                    },
                    lo, hi, 801);
            };
            break;
        }
        case KernelFamily::uniform: {
            for (int r = 0; r <= max_moment; r += 2) out.B[r] = 1.0 / (r + 1.0);
            out.V = 0.5;
            out.K1 = [](double t) { return std::max(0.0, 2.0 - std::abs(t)) * 0.25; };
            break;
        }
    }
    return out;
}

double EquivalentKernel::operator()(double t) const {
    double poly = 0.0, tr = 1.0;
    for (double c : coeffs) {
        poly += c * tr;
        tr *= t;
    }
    return poly * eval_kernel(family, t);
}

EquivalentKernel equivalent_kernel(KernelFamily family, int order) {
    if (order < 1 || order % 2 == 0)
        throw Error("equivalent_kernel: order must be odd and positive");
    const KernelFunctionals f = kernel_functionals(family, 2 * order);
    const std::size_t q = static_cast<std::size_t>(order) + 1;
    Matrix s(q, q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) s(i, j) = f.B[i + j];
    std::vector<double> e1(q, 0.0);
    e1[0] = 1.0;
    EquivalentKernel out;
    out.family = family;
    out.order = order;
    out.coeffs = solve_sym(s, e1);
    return out;
}

KernelFunctionals kernel_functionals(const EquivalentKernel& kernel, int max_moment) {
    const double s = kernel_support(kernel.family);
    KernelFunctionals out;
    out.B.assign(static_cast<std::size_t>(max_moment) + 1, 0.0);
    for (int r = 0; r <= max_moment; ++r)
        out.B[r] = simpson([&](double t) { return kernel(t) * std::pow(t, r); }, -s, s);
    out.V = simpson([&](double t) { return kernel(t) * kernel(t); }, -s, s);
    out.K1 = [kernel, s](double t) {
        const double lo = std::max(-s, -s - t), hi = std::min(s, s - t);
        return simpson([&](double u) { return kernel(u) * kernel(u + t); }, lo, hi);
    };
    return out;
}

} // namespace fda
