/**
 * @file energy.hpp
 * @brief Functionals, Euler-Lagrange residuals, Pohozaev reports, dilation projections
 *        and mountain-pass paths.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracground/grid_spectral.hpp"
#include "fracground/model.hpp"

namespace fracground {

struct EnergyBreakdown {
    double kinetic = 0.0;    ///< T(u) = int |xi|^{2s} |u-hat|^2
    double potential = 0.0;  ///< int V u^2
    double G_total = 0.0;    ///< int G(u)
    double G1 = 0.0;
    double G2 = 0.0;
    double virial = 0.0;     ///< eta(u) = int <grad V, x> u^2
    double I = 0.0;
    double I_lambda = 0.0;
    double lambda = 1.0;
};

struct PohozaevReport {
    double kinetic_term = 0.0;    ///< (N-2s)/2 T
    double potential_term = 0.0;  ///< N/2 int V u^2
    double virial_term = 0.0;     ///< 1/2 eta
    double rhs = 0.0;             ///< N int G (N int G_lambda off lambda = 1)
    double residual = 0.0;        ///< lhs - rhs
    double residual_rel = 0.0;    ///< |residual| / sum of |terms|
    double free_residual = 0.0;   ///< (N-2s)/2 T - N int G
    double free_residual_rel = 0.0;
};

struct CriticalDiagnostics {
    double delta1 = 0.0;  ///< int g1(u) u
    double delta2 = 0.0;  ///< int g2(u) u
    double nehari_like = 0.0;
    double level_relation_residual = 0.0;  ///< |s T/N - eta/(2N) - c|
};

struct PathSpec {
    std::vector<double> t;
    std::vector<RealField> vertices;
    std::vector<double> energies;  ///< I_lambda at each vertex
    double theta_end = 1.0;
    double endpoint_energy() const { return energies.back(); }
    std::size_t argmax() const;
};

struct Residual {
    RealField field;
    double norm = 0.0;  ///< discrete L2 norm of the field
};

/// Raised by projections and path construction; carries the scanned energy profile.
class ProfileError : public std::runtime_error {
public:
    ProfileError(const std::string& what, std::vector<std::pair<double, double>> profile)
        : std::runtime_error(what), profile(std::move(profile)) {}
    std::vector<std::pair<double, double>> profile;
};

EnergyBreakdown energy(const RealField& u, const ModelSpec& model, double lambda = 1.0);

/// r = (-D)^s u + V u + g2(u) - lambda g1(u), the L2 gradient of I_lambda.
Residual gradient_residual(const RealField& u, const ModelSpec& model, double lambda = 1.0);

/// Pohozaev balance of I_lambda; the right-hand side is N int (lambda G1 - G2).
PohozaevReport pohozaev_report(const RealField& u, const ModelSpec& model, double lambda = 1.0);

CriticalDiagnostics critical_diagnostics(const RealField& u, const ModelSpec& model, double lambda, double level);

struct ProjectionOptions {
    double theta_min = 1e-2;
    double theta_max = 1e2;
    double guard = kDilationGuard;  ///< tail-mass allowance passed to dilate()
};

struct Projection {
    double theta = 1.0;
    RealField field;
};

/// Closed-form dilation onto the free Pohozaev set P0.
Projection project_to_P0(const RealField& u, const ModelSpec& model, const ProjectionOptions& opt = {});

/// Value of I(u^theta) from the scaling laws, without resampling.
double dilated_energy(const RealField& u, const ModelSpec& model, double theta);

/// Dilation onto P: critical point of theta -> I(u^theta) found by root search on a
/// centered-difference derivative.
Projection project_to_P(const RealField& u, const ModelSpec& model, const ProjectionOptions& opt = {});

/// I on P expressed as s T / N - eta / (2N).
double energy_on_P(const RealField& u, const ModelSpec& model);

/// Radial plateau: zeta_hat on |x| <= R, linear to 0 on [R, R+1].
RealField plateau_profile(double height, double R, const BoxGrid& grid);

/// Left end of the continuation interval from a profile z: 1.1 * int G2 / int G1, capped.
double delta_bar(const RealField& z, const ModelSpec& model);

/// Dilation path gamma(t_j) = z(. / (t_j theta_end)); theta_end doubles until I_lambda(gamma(1)) < 0,
/// the last attempt clamped to the largest dilation the box guard allows.
PathSpec mountain_path(const RealField& z, double theta_end, int K, const ModelSpec& model, double lambda,
                       double dbar, double guard = kDilationGuard);

}  // namespace fracground
