/**
 * @file kernel.hpp
 * @brief The resolvent kernel K = F^{-1}[1 / (1 + |xi|^{2s})]: radial profiles, decay
 *        diagnostics and spectral convolution.
 */
#pragma once

#include <string>
#include <vector>

#include "fracground/grid_spectral.hpp"

namespace fracground {

enum class KernelMethod { Quadrature1D, GridFFT };
std::string to_string(KernelMethod m);

struct KernelProfile {
    double s = 0.5;
    int dim = 1;
    std::vector<double> radii;   ///< increasing
    std::vector<double> values;  ///< K(r)
    std::vector<double> shell_spread;  ///< grid method: shell std / shell mean; empty otherwise
    KernelMethod method = KernelMethod::Quadrature1D;
};

/// N = 1: K(r) = (1/pi) int_0^inf cos(r rho) / (1 + rho^{2s}) d rho at the given radii.
KernelProfile kernel_profile_quadrature(double s, const std::vector<double>& radii, double tol = 1e-10);

/// Grid method: inverse transform of the symbol reciprocal, averaged over lattice shells
/// of equal squared radius, for shells with 0 < r <= r_max.
KernelProfile kernel_profile_grid(const BoxGrid& grid, double s, double r_max);

/// Full kernel field on the grid, centered at the origin.
RealField kernel_field(const BoxGrid& grid, double s);

/// Dispatch: quadrature for N = 1 with explicit radii, grid otherwise.
KernelProfile kernel_profile(int N, double s, const BoxGrid& grid, const std::vector<double>& radii);

/// Linear interpolation of a profile in log-log coordinates.
double profile_at(const KernelProfile& p, double r);

struct KernelDecayReport {
    double far_sup = 0.0;       ///< sup_{r >= 1} r^{N+2s} K
    double near_sup = 0.0;      ///< sup_{r <= 1} r^{N-2s} K
    double gradient_sup = 0.0;  ///< sup_{1 <= r <= R} |K'(r)| r^{N+1+2s}
    double tail_exponent = 0.0;
    double tail_rms = 0.0;
    double expected_exponent = 0.0;  ///< -(N+2s)
    double fit_lo = 0.0, fit_hi = 0.0;
    bool positive = false;
    bool non_increasing = false;
};

/// Requires radii covering [0.1, 8].
KernelDecayReport kernel_decay_report(const KernelProfile& p, double fit_lo, double fit_hi);

struct LqStability {
    double q = 1.0;
    double radius = 0.0;
    double value = 0.0;          ///< int_{|x| < R} K^q
    double value_doubled = 0.0;  ///< int_{|x| < 2R} K^q
    double relative_change = 0.0;
    bool in_window = false;      ///< 1 <= q < N / (N - 2s)
};

/// Truncated L^q integrals of the grid kernel; needs 2R <= L.
LqStability kernel_lq_stability(const BoxGrid& grid, double s, double q, double R);

/// F^{-1}[F u / (1 + |xi|^{2s})].
RealField convolve_kernel(const RealField& u, FracOrder s);

}  // namespace fracground
