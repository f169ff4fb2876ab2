/**
 * @file grid_spectral.hpp
 * @brief Periodic box grid, spectral transforms and the fractional Laplacian.
 *
 * Fields live on the box [-L, L)^N sampled at x_j = -L + j h, h = 2L/M.
 * Storage is row-major with the last axis fastest. Frequencies are
 * xi_k = pi k / L with k in [-M/2, M/2), stored in FFT order.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fracground {

using Point = std::array<double, 3>;

/// Thrown when an operation's precondition on its inputs is violated.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BoxGrid {
    int dim = 1;
    double half_width = 1.0;
    int points_per_axis = 8;

    BoxGrid() = default;
    BoxGrid(int N, double L, int M);

    double spacing() const { return 2.0 * half_width / points_per_axis; }
    double cell_volume() const;
    std::size_t size() const;
    double coord(int j) const { return -half_width + j * spacing(); }
    /// Signed integer frequency for FFT-ordered index k.
    int signed_index(int k) const { return k < points_per_axis / 2 ? k : k - points_per_axis; }
    double frequency(int k) const;
    /// Per-axis index tuple of a flat index.
    std::array<int, 3> unflatten(std::size_t i) const;
    std::size_t flatten(const std::array<int, 3>& j) const;
    Point point(std::size_t i) const;

    bool operator==(const BoxGrid& o) const {
        return dim == o.dim && half_width == o.half_width && points_per_axis == o.points_per_axis;
    }
    bool operator!=(const BoxGrid& o) const { return !(*this == o); }
};

/// Order s of the fractional Laplacian, 0 < s < 1.
class FracOrder {
public:
    FracOrder(double s);  // NOLINT: implicit by design
    double value() const { return s_; }
    operator double() const { return s_; }

private:
    double s_;
};

struct RealField {
    BoxGrid grid;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(const BoxGrid& g) : grid(g), values(g.size(), 0.0) {}
    RealField(const BoxGrid& g, std::vector<double> v);

    static RealField from_function(const BoxGrid& g, const std::function<double(const Point&)>& f);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    RealField& operator+=(const RealField& o);
    RealField& operator-=(const RealField& o);
    RealField& operator*=(double c);
    bool all_finite() const;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double c, RealField a);

/// Pointwise product.
RealField hadamard(const RealField& a, const RealField& b);
/// h^N * sum a*b.
double inner(const RealField& a, const RealField& b);
/// Discrete L2 norm, sqrt(h^N * sum u^2).
double l2_norm(const RealField& u);
/// h^N * sum u.
double integral(const RealField& u);
double sup_norm(const RealField& u);

struct SpectralCoeffs {
    BoxGrid grid;
    std::vector<std::complex<double>> coeffs;
};

/// c_k = h^N sum_j u_j exp(-i xi_k . x_j), approximating the continuous transform.
SpectralCoeffs forward_transform(const RealField& u);
/// u_j = (2L)^{-N} sum_k c_k exp(i xi_k . x_j), real part.
RealField inverse_transform(const SpectralCoeffs& c);

/// Spectral (-Delta)^s: inverse transform of |xi|^{2s} u-hat.
RealField frac_laplacian(const RealField& u, FracOrder s);
/// Spectral -Delta (symbol |xi|^2).
RealField laplacian(const RealField& u);
/// Spectral partial derivative along axis a, Nyquist mode dropped.
RealField partial(const RealField& u, int axis);
/// <x, grad u> with x the centered coordinate.
RealField radial_derivative(const RealField& u);

/// Singular-integral (-Delta)^s by lattice quadrature over the box.
///
/// The singular cell is removed and replaced by a local correction of order
/// h^{2-2s} built from the spectral Laplacian; the exterior of the box is
/// added analytically assuming u vanishes there. Cost O(M^{2N}).
RealField frac_laplacian_pv(const RealField& u, FracOrder s, double cutoff);

/// C(N,s) from the oscillatory integral of (1 - cos z_1)/|z|^{N+2s}.
double normalization_constant(int N, FracOrder s);

/// Double-sum Gagliardo seminorm squared; requires M^N <= 4096.
double gagliardo_seminorm_sq(const RealField& u, FracOrder s);

/// T(u) = int |xi|^{2s} |u-hat|^2, normalized so that T = h^N sum u (-Delta)^s u.
double kinetic_energy(const RealField& u, FracOrder s);

/// Default relative tail-mass allowance for dilate().
inline constexpr double kDilationGuard = 1e-8;

/// Band-limited resampling of u(x / theta).
///
/// For theta > 1 the mass of u outside the box [-L/theta, L/theta)^N is lost;
/// a DomainError is thrown when it exceeds guard * ||u||^2.
RealField dilate(const RealField& u, double theta, double guard = kDilationGuard);
/// Relative mass of u lying where dilate(u, theta) would lose it.
double dilation_overflow(const RealField& u, double theta);

/// Periodic shift u(x - y); exact permutation for lattice y, spectral shift otherwise.
RealField translate(const RealField& u, const Point& y);

/// Average over points with equal squared lattice radius about the origin.
RealField radial_symmetrize(const RealField& u);

/// Relative mass outside the ball |x| < L/2.
double tail_mass(const RealField& u);

/// Sup over the central half-box of (-D)^s <x,grad u> - 2s (-D)^s u - <x, grad (-D)^s u>,
/// divided by sup |(-D)^s u|.
///
/// With padding P > 1 the field is embedded in a zero-filled box of half-width P*L
/// before the operators are applied, which pushes periodic images away.
double pohozaev_pointwise_residual(const RealField& u, FracOrder s, int padding = 1);

/// Zero-filled embedding into the box of half-width P*L with the same spacing.
RealField pad_field(const RealField& u, int padding);

}  // namespace fracground
