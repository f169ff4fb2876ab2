/**
 * @file config.hpp
 * @brief Experiment configuration: INI-style sections of lowercase key = value pairs.
 *
 * Sections and keys (all optional, defaults in brackets):
 *
 *     [model]  dim [2]  s [0.6]  m [1]  a [1]  p [3]  potential [inverse_power|gaussian|zero]
 *              v0 [0.5]  beta [1]  cap [unset]
 *     [grid]   half_width [16]  points [256]
 *     [solver] method [fixed_point|mountain_pass]  max_iters [3000]  tol [1e-9]  damping [1]
 *              stabilization [true]  symmetrize [true]  seed [plateau|gaussian|file]
 *              seed_height [0 = zeta + 1]  seed_radius [1]  seed_file []  path_segments [16]
 *              step [0.5]  guard [1e-3]  lambda_count [8]
 *     [experiment] name [existence|existence2]  radii [2,4,6,8]  fit_lo [3]  fit_hi [0 = L/3]
 *              noncrit_steps [150]  noncrit_shift [2]  kernel_dim [1]  kernel_s [0.5]
 *              kernel_fit_lo [10]  kernel_fit_hi [40]
 */
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracground/grid_spectral.hpp"
#include "fracground/model.hpp"
#include "fracground/solver.hpp"

namespace fracground {

/// Configuration parse or validation failure (exit code 2 at the CLI).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    int dim = 2;
    double s = 0.6;
    double m = 1.0;
    double a = 1.0;
    double p = 3.0;
    std::string potential = "inverse_power";
    double V0 = 0.5;
    double beta = 1.0;
    std::optional<double> cap;

    double half_width = 16.0;
    int points = 256;

    std::string method = "fixed_point";
    SolveConfig solver;
    std::string seed_kind = "plateau";
    int lambda_count = 8;

    std::string experiment = "existence";
    std::vector<double> radii{2.0, 4.0, 6.0, 8.0};
    double fit_lo = 3.0;
    double fit_hi = 0.0;
    int noncrit_steps = 150;
    double noncrit_shift = 2.0;
    int kernel_dim = 1;
    double kernel_s = 0.5;
    double kernel_fit_lo = 10.0;
    double kernel_fit_hi = 40.0;

    ModelSpec model() const;
    BoxGrid grid() const;
    /// Sorted key = value listing of every field; the hash input.
    std::string canonical() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Throws ConfigError naming the violated check.
void validate(const ExperimentConfig& cfg);

/// Git blob id (SHA-1 of "blob <len>\0" + content) as lowercase hex.
std::string git_blob_hash(const std::string& content);

}  // namespace fracground
