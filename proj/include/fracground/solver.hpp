/**
 * @file solver.hpp
 * @brief Critical-point solvers, lambda-continuation, Pohozaev-constrained descent and
 *        the diagnostics built on them.
 */
#pragma once

#include <string>
#include <vector>

#include "fracground/energy.hpp"
#include "fracground/grid_spectral.hpp"
#include "fracground/model.hpp"

namespace fracground {

enum class SeedKind { Plateau, Gaussian, File };

struct SeedSpec {
    SeedKind kind = SeedKind::Plateau;
    double height = 0.0;  ///< plateau height; 0 selects zeta + 1
    double radius = 1.0;  ///< plateau radius R or Gaussian width
    std::string path;     ///< CSV with one value per grid point, for File seeds
};

struct SolveConfig {
    int max_iters = 3000;
    double tol = 1e-9;  ///< on ||r|| / ||u||
    double damping = 1.0;
    bool stabilization = true;
    bool symmetrize = true;  ///< average over axis reflections and permutations each step
    SeedSpec seed;
    int path_segments = 16;
    double step = 0.5;  ///< mountain-pass descent step cap
    int stagnation_window = 200;
    double guard = 1e-3;  ///< tail-mass allowance for dilations inside solvers
};

enum class SolveStatus { Converged, MaxIters, Diverged, Collapsed, Stagnated };
std::string to_string(SolveStatus s);

struct SolveResult {
    RealField u;
    double lambda = 1.0;
    double residual_norm = 0.0;  ///< ||r|| / ||u||
    double residual_untruncated = 0.0;  ///< same with the uncapped nonlinearity
    double level = 0.0;          ///< I_lambda(u); the mountain-pass level c_lambda for that solver
    EnergyBreakdown energy;
    PohozaevReport pohozaev;
    CriticalDiagnostics diagnostics;
    int iterations = 0;
    bool converged = false;
    SolveStatus status = SolveStatus::MaxIters;
    double tail_mass = 0.0;
};

/// Average over the hyperoctahedral group (axis reflections and permutations).
RealField symmetrize_hyperoctahedral(const RealField& u);

RealField make_seed(const SeedSpec& spec, const BoxGrid& grid, const ModelSpec& model);

/// Relative residual of the model with the truncation cap removed.
double untruncated_residual(const RealField& u, const ModelSpec& model, double lambda);

/// Resolvent iteration u <- K * (-V u + u + lambda g1(u) - g2(u)), optionally rescaled by
/// the power-normalization factor <u, (L+V) u + g2(u) u> / <u, lambda g1(u)> ^ (p/(p-1)).
SolveResult fixed_point_solve(const ModelSpec& model, double lambda, const SolveConfig& cfg, const RealField& seed);

/// Mountain pass on I_lambda starting from the dilation path of z.
///
/// The path maximum is located, pushed by a preconditioned descent step, and the path is
/// re-spread along the ray through the moved vertex with the new maximum placed on it.
SolveResult mountain_pass_solve(const ModelSpec& model, double lambda, const SolveConfig& cfg, const RealField& z,
                                double dbar);
/// Same, warm-started from an arbitrary direction (the path is the segment through it).
SolveResult mountain_pass_from(const ModelSpec& model, double lambda, const SolveConfig& cfg,
                               const RealField& direction);

/// Energy-weighted vertices of the ray path through u, with the ray maximum as a vertex.
PathSpec ray_path(const RealField& u, const ModelSpec& model, double lambda, int K);

struct ContinuationRecord {
    double lambda = 0.0;
    double c_lambda = 0.0;
    double alpha = 0.0;  ///< kinetic energy T
    double level_relation_rel = 0.0;
    SolveResult result;
};

struct ContinuationTrace {
    double delta_bar = 0.0;
    std::vector<ContinuationRecord> records;
    bool positive = false;
    bool non_increasing = false;
    bool complete = false;
    std::string failure;
};

ContinuationTrace lambda_continuation(const ModelSpec& model, const SolveConfig& cfg, int lambda_count,
                                      const RealField& z);

/// Fixed-point ground state of the V = 0 problem.
SolveResult ground_state_free(const ModelSpec& model, const SolveConfig& cfg, const RealField& seed);
/// b0 = I_0(w) for a free ground state w.
double b0_level(const SolveResult& w, const ModelSpec& model);

struct MinimizeStep {
    int k = 0;
    double I = 0.0;
    double residual = 0.0;  ///< ||grad I|| / ||u||
    double centroid_radius = 0.0;
    double pohozaev_rel = 0.0;
    double theta = 1.0;
};

struct MinimizeTrace {
    std::vector<MinimizeStep> steps;
    double b_est = 0.0;
    double min_residual = 0.0;
    double drift_slope = 0.0;  ///< least-squares slope of centroid radius per step over the second half
    RealField last;
};

/// Projected descent on P: preconditioned gradient step on I followed by project_to_P.
MinimizeTrace pohozaev_minimize(const ModelSpec& model, const SolveConfig& cfg, int step_count,
                                const RealField& start, double step = 0.5);

struct ThetaRecord {
    double radius = 0.0;
    double theta = 0.0;
    double deviation = 0.0;  ///< |theta - 1|
    double energy = 0.0;     ///< I of the projected profile
    bool ok = false;
    std::string error;
};

std::vector<ThetaRecord> theta_translation_experiment(const RealField& w, const ModelSpec& model,
                                                      const std::vector<double>& radii, double guard);

struct SobolevConfig {
    int max_iters = 4000;
    double tol = 1e-12;
    double width = 1.0;  ///< Gaussian seed width
    double step = 0.5;
};

/// Sobolev quotient T(u) / ||u||_{2*}^2 of a nonzero field.
double sobolev_quotient(const RealField& u, double s);
/// Descent on the quotient over fields masked to |x| < 3L/4 and symmetrized.
double estimate_sobolev_constant(int N, double s, const BoxGrid& grid, const SobolevConfig& cfg);

struct DecayFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double rms = 0.0;
    double radial_bound = 0.0;  ///< sup over the window of |x|^{(N-1)/2} |u| / ||u||_{H^s}
    std::vector<double> radii;
    std::vector<double> shell_means;
};

/// Log-log least squares of shell-averaged |u| against r on [r1, r2].
DecayFit decay_fit(const RealField& u, double r1, double r2, double s = 0.5);

}  // namespace fracground
