#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fda {

enum class KernelFamily { gaussian, epanechnikov, uniform };

KernelFamily kernel_from_name(const std::string& name);
std::string kernel_name(KernelFamily family);

// Kernel density K(t). Symmetric, integrates to one. The gaussian kernel has
// unbounded support; the other two live on [-1, 1].
double eval_kernel(KernelFamily family, double t);

// Half-width of the numerically effective support: 1 for compact kernels,
// 8 for the gaussian (tails below 1e-14 outside).
double kernel_support(KernelFamily family);

// Moment and roughness functionals of a kernel-like function:
//   B[r] = int K(t) t^r dt,  V = int K(t)^2 dt,  K1(t) = int K(s) K(s + t) ds.
struct KernelFunctionals {
    std::vector<double> B;
    double V = 0.0;
    std::function<double(double)> K1;
};

// Functionals of the base kernel, closed forms where available.
KernelFunctionals kernel_functionals(KernelFamily family, int max_moment);

// Equivalent kernel of a local polynomial fit of order p:
//   K*(t) = e1' S^{-1} (1, t, ..., t^p)' K(t),  S_ab = B[a + b - 2].
// For odd p the weight polynomial is even; for p = 1 and any symmetric
// kernel K* reduces to K itself.
struct EquivalentKernel {
    KernelFamily family;
    int order = 1;
    std::vector<double> coeffs; // first column of S^{-1}

    double operator()(double t) const;
};

EquivalentKernel equivalent_kernel(KernelFamily family, int order);

// Functionals of an equivalent kernel by composite Simpson quadrature over
// its support (absolute accuracy well below 1e-8).
KernelFunctionals kernel_functionals(const EquivalentKernel& kernel, int max_moment);

} // namespace fda
