// Thin FFTW wrappers and cached symbol tables on the half spectrum.
#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "fracground/grid_spectral.hpp"

namespace fracground::detail {

using cvec = std::vector<std::complex<double>>;

/// Number of half-spectrum entries: M^{N-1} * (M/2 + 1).
std::size_t half_size(const BoxGrid& g);

/// Unnormalized real-to-complex DFT onto the half spectrum.
cvec r2c(const RealField& u);
/// Inverse of r2c including the 1/M^N factor.
RealField c2r(const BoxGrid& g, cvec c);

/// Unnormalized full complex DFT (sign -1 forward, +1 backward).
cvec c2c(const BoxGrid& g, cvec in, int sign);

/// |xi|^2 on the half spectrum.
std::shared_ptr<const std::vector<double>> half_xi2(const BoxGrid& g);
/// Per-axis frequency xi_a on the half spectrum with Nyquist entries set to 0.
std::shared_ptr<const std::vector<double>> half_xi_axis(const BoxGrid& g, int axis);
/// |xi|^{2s} on the half spectrum.
std::shared_ptr<const std::vector<double>> half_frac_symbol(const BoxGrid& g, double s);
/// 1 / (1 + |xi|^{2s}) on the half spectrum.
std::shared_ptr<const std::vector<double>> half_resolvent_symbol(const BoxGrid& g, double s);

/// Multiply the half spectrum of u by a real symbol and transform back.
RealField apply_symbol(const RealField& u, const std::vector<double>& sym);

}  // namespace fracground::detail
