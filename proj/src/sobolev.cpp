#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracground/kernel.hpp"
#include "fracground/model.hpp"
#include "fracground/solver.hpp"

namespace fracground {

namespace {

struct Quotient {
    double value;
    RealField gradient;
};

// Q = T / D with D = (int |u|^q)^{2/q}; gradient in the L2 pairing.
Quotient quotient_and_gradient(const RealField& u, double s, double q) {
    const RealField Lu = frac_laplacian(u, s);
    const double T = inner(u, Lu);
    double I = 0.0;
    for (double v : u.values) I += std::pow(std::abs(v), q);
    I *= u.grid.cell_volume();
    const double D = std::pow(I, 2.0 / q);
    const double c = (T / D) * 2.0 * std::pow(I, 2.0 / q - 1.0);
    RealField g(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = u[i];
        g[i] = (2.0 * Lu[i] - c * std::pow(std::abs(v), q - 2.0) * v) / D;
    }
    return {T / D, std::move(g)};
}

void normalize_q(RealField& u, double q) {
    double I = 0.0;
    for (double v : u.values) I += std::pow(std::abs(v), q);
    I *= u.grid.cell_volume();
    u *= 1.0 / std::pow(I, 1.0 / q);
}

}  // namespace

double sobolev_quotient(const RealField& u, double s) {
    const double q = critical_exponent(u.grid.dim, s);
    if (!std::isfinite(q)) throw DomainError("sobolev_quotient: requires 2s < N");
    double I = 0.0;
    for (double v : u.values) I += std::pow(std::abs(v), q);
    I *= u.grid.cell_volume();
    if (!(I > 0.0)) throw DomainError("sobolev_quotient: zero field");
    return kinetic_energy(u, s) / std::pow(I, 2.0 / q);
}

double estimate_sobolev_constant(int N, double s, const BoxGrid& grid, const SobolevConfig& cfg) {
    if (!(2.0 * s < N)) throw DomainError("estimate_sobolev_constant: requires 2s < N");
    if (grid.dim != N) throw DomainError("estimate_sobolev_constant: grid dimension mismatch");
    const double q = critical_exponent(N, s);
    const double L = grid.half_width;
    // Raised cosine: 1 inside |x| < L/2, 0 beyond 3L/4; keeps the minimizer off its periodic images.
    const RealField mask = RealField::from_function(grid, [&](const Point& x) {
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const double t = std::clamp((0.75 * L - r) / (0.25 * L), 0.0, 1.0);
        return 0.5 - 0.5 * std::cos(std::numbers::pi * t);
    });
    RealField u = RealField::from_function(grid, [&](const Point& x) {
        return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * cfg.width * cfg.width));
    });
    u = hadamard(u, mask);
    normalize_q(u, q);
    double prev = std::numeric_limits<double>::infinity();
    int stable = 0;
    for (int it = 0; it < cfg.max_iters; ++it) {
        const Quotient Q = quotient_and_gradient(u, s, q);
        if (!std::isfinite(Q.value)) throw std::runtime_error("estimate_sobolev_constant: non-finite quotient");
        if (std::abs(prev - Q.value) <= cfg.tol * Q.value) {
            if (++stable >= 5) return Q.value;
        } else {
            stable = 0;
        }
        prev = Q.value;
        u -= cfg.step * convolve_kernel(Q.gradient, s);
        u = hadamard(symmetrize_hyperoctahedral(u), mask);
        normalize_q(u, q);
    }
    throw std::runtime_error("estimate_sobolev_constant: no convergence within max_iters");
}

}  // namespace fracground
