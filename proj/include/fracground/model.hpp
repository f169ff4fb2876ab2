/**
 * @file model.hpp
 * @brief Nonlinearity and potential families, truncation, splitting and assumption checks.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracground/grid_spectral.hpp"

namespace fracground {

/// g(t) = -m t + a |t|^{p-1} t, optionally cut to zero beyond |t| > t0.
struct Nonlinearity {
    double m = 1.0;
    double a = 1.0;
    double p = 3.0;
    std::optional<double> truncation_cap;
    double zeta = 0.0;  ///< first positive zero of G

    static Nonlinearity power(double m, double a, double p, std::optional<double> cap = std::nullopt);

    double g(double t) const;
    double G(double t) const;
    /// Derivative g'(t), used by Newton-type diagnostics.
    double dg(double t) const;
};

double g_eval(const Nonlinearity& nl, double t);
double G_eval(const Nonlinearity& nl, double t);

enum class TruncationCase { OddExtension, Capped };

/// Case 1 (g > 0 beyond zeta) leaves the evaluator unchanged; case 2 keeps the cap.
Nonlinearity truncate(const Nonlinearity& nl);
TruncationCase truncation_case(const Nonlinearity& nl);

/// g1 = max(g + m t, 0) on t >= 0 and g2 = g1 - g, both odd.
class SplitPair {
public:
    explicit SplitPair(Nonlinearity nl) : nl_(std::move(nl)) {}
    const Nonlinearity& base() const { return nl_; }
    double g1(double t) const;
    double g2(double t) const;
    double G1(double t) const;
    double G2(double t) const;

private:
    Nonlinearity nl_;
};

SplitPair split(const Nonlinearity& nl);

/// Critical exponent 2* = 2N / (N - 2s); infinite when N <= 2s.
double critical_exponent(int N, double s);

/// Smallest C with G1(t) <= C/2* |t|^{2*} + eps G2(t) on a log grid over [1e-6, 1e6].
double epsilon_bound_constant(const SplitPair& sp, double eps, int N, double s);
/// The t at which the constant above is attained.
double epsilon_bound_witness(const SplitPair& sp, double eps, int N, double s);

enum class PotentialFamily { InversePower, Gaussian, Zero };

/// Radial potential: V0 (1+|x|^2)^{-beta}, V0 exp(-beta |x|^2), or 0.
struct Potential {
    PotentialFamily family = PotentialFamily::Zero;
    double V0 = 0.0;
    double beta = 1.0;

    static Potential inverse_power(double V0, double beta) { return {PotentialFamily::InversePower, V0, beta}; }
    static Potential gaussian(double V0, double beta) { return {PotentialFamily::Gaussian, V0, beta}; }
    static Potential zero() { return {PotentialFamily::Zero, 0.0, 1.0}; }

    double value(double r) const;
    /// r V'(r) = <grad V(x), x>.
    double virial(double r) const;
    bool is_zero() const { return family == PotentialFamily::Zero || V0 == 0.0; }

    /// V sampled on the grid, optionally at scaled points V(theta x).
    RealField field(const BoxGrid& g, double theta = 1.0) const;
    RealField virial_field(const BoxGrid& g, double theta = 1.0) const;
};

std::string to_string(PotentialFamily f);

/// Fractional order, nonlinearity and potential of one problem instance.
struct ModelSpec {
    double s = 0.6;
    Nonlinearity nl = Nonlinearity::power(1.0, 1.0, 3.0);
    Potential V = Potential::inverse_power(0.5, 1.0);

    /// The same model with V = 0.
    ModelSpec free() const {
        ModelSpec m = *this;
        m.V = Potential::zero();
        return m;
    }
};

struct AssumptionCheck {
    std::string name;
    bool satisfied = false;
    double margin = 0.0;        ///< > 0 when satisfied
    double worst_point = 0.0;   ///< t or r where the margin is attained
    std::string note;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    double v2_quantity = 0.0;   ///< || max(<grad V, x>, 0) ||_{L^{N/2s}}
    double v2_bound = 0.0;      ///< 2 S

    const AssumptionCheck* find(const std::string& name) const;
    bool satisfied(const std::string& name) const;
    /// All of the listed assumptions hold.
    bool all(const std::vector<std::string>& names) const;
};

AssumptionReport check_assumptions(const Nonlinearity& nl, const Potential& V, const BoxGrid& grid, double s,
                                   double S_estimate);

}  // namespace fracground
