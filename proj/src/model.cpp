#include "fracground/model.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fracground {

namespace {

double sgn(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

// Integer exponents are the common case and std::pow dominates the solver loops otherwise.
double fast_pow(double x, double e) {
    if (e == 2.0) return x * x;
    if (e == 3.0) return x * x * x;
    if (e == 4.0) {
        const double x2 = x * x;
        return x2 * x2;
    }
    return std::pow(x, e);
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> t(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) t[i] = std::exp(a + (b - a) * i / (n - 1));
    return t;
}

// Sampling tolerance folded into margins of non-strict inequalities.
constexpr double kSlack = 1e-12;

}  // namespace

Nonlinearity Nonlinearity::power(double m, double a, double p, std::optional<double> cap) {
    if (!(m > 0.0)) throw DomainError("nonlinearity: m must be positive");
    if (!(a > 0.0)) throw DomainError("nonlinearity: a must be positive");
    if (!(p > 1.0)) throw DomainError("nonlinearity: p must exceed 1");
    Nonlinearity nl;
    nl.m = m;
    nl.a = a;
    nl.p = p;
    // G(t) = -m t^2/2 + a t^{p+1}/(p+1) vanishes at t^{p-1} = (p+1) m / (2a).
    nl.zeta = std::pow((p + 1.0) * m / (2.0 * a), 1.0 / (p - 1.0));
    if (cap) {
        if (!(*cap > 0.0)) throw DomainError("nonlinearity: truncation cap must be positive");
        if (*cap <= nl.zeta) throw DomainError("nonlinearity: truncation cap must exceed zeta");
        nl.truncation_cap = cap;
    }
    return nl;
}

double Nonlinearity::g(double t) const {
    const double at = std::abs(t);
    if (truncation_cap && at > *truncation_cap) return 0.0;
    return sgn(t) * (-m * at + a * fast_pow(at, p));
}

double Nonlinearity::G(double t) const {
    double at = std::abs(t);
    if (truncation_cap) at = std::min(at, *truncation_cap);
    return -0.5 * m * at * at + a * fast_pow(at, p + 1.0) / (p + 1.0);
}

double Nonlinearity::dg(double t) const {
    const double at = std::abs(t);
    if (truncation_cap && at > *truncation_cap) return 0.0;
    return -m + a * p * fast_pow(at, p - 1.0);
}

double g_eval(const Nonlinearity& nl, double t) { return nl.g(t); }
double G_eval(const Nonlinearity& nl, double t) { return nl.G(t); }

TruncationCase truncation_case(const Nonlinearity& nl) {
    return nl.truncation_cap ? TruncationCase::Capped : TruncationCase::OddExtension;
}

Nonlinearity truncate(const Nonlinearity& nl) {
    // The power family is odd and positive beyond zeta, so case 1 is the identity;
    // a configured cap already realizes case 2 inside the evaluators.
    return nl;
}

double SplitPair::g1(double t) const {
    const double at = std::abs(t);
    return sgn(t) * std::max(nl_.g(at) + nl_.m * at, 0.0);
}

double SplitPair::g2(double t) const { return g1(t) - nl_.g(t); }

double SplitPair::G1(double t) const {
    const double at = std::abs(t);
    const double pp = nl_.p + 1.0;
    if (nl_.truncation_cap && at > *nl_.truncation_cap) {
        const double t0 = *nl_.truncation_cap;
        return nl_.a * std::pow(t0, pp) / pp + 0.5 * nl_.m * (at * at - t0 * t0);
    }
    return nl_.a * fast_pow(at, pp) / pp;
}

double SplitPair::G2(double t) const {
    // g2(t) = m t on t >= 0 for both truncation cases.
    return 0.5 * nl_.m * t * t;
}

SplitPair split(const Nonlinearity& nl) { return SplitPair(truncate(nl)); }

double critical_exponent(int N, double s) {
    if (N <= 2.0 * s) return std::numeric_limits<double>::infinity();
    return 2.0 * N / (N - 2.0 * s);
}

namespace {

std::pair<double, double> eps_bound(const SplitPair& sp, double eps, int N, double s) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0,1)");
    const double q = critical_exponent(N, s);
    if (!std::isfinite(q)) throw DomainError("epsilon bound needs N > 2s");
    double best = 0.0, at = 0.0;
    for (double t : log_grid(1e-6, 1e6, 4001)) {
        const double need = q * (sp.G1(t) - eps * sp.G2(t)) / std::pow(t, q);
        if (need > best) {
            best = need;
            at = t;
        }
    }
    return {best, at};
}

}  // namespace

double epsilon_bound_constant(const SplitPair& sp, double eps, int N, double s) {
    return eps_bound(sp, eps, N, s).first;
}

double epsilon_bound_witness(const SplitPair& sp, double eps, int N, double s) {
    return eps_bound(sp, eps, N, s).second;
}

double Potential::value(double r) const {
    switch (family) {
    case PotentialFamily::InversePower: return beta == 1.0 ? V0 / (1.0 + r * r) : V0 * std::pow(1.0 + r * r, -beta);
    case PotentialFamily::Gaussian: return V0 * std::exp(-beta * r * r);
    case PotentialFamily::Zero: return 0.0;
    }
    return 0.0;
}

double Potential::virial(double r) const {
    switch (family) {
    case PotentialFamily::InversePower: {
        const double q = 1.0 + r * r;
        return -2.0 * beta * r * r * V0 * (beta == 1.0 ? 1.0 / (q * q) : std::pow(q, -beta - 1.0));
    }
    case PotentialFamily::Gaussian: return -2.0 * beta * r * r * V0 * std::exp(-beta * r * r);
    case PotentialFamily::Zero: return 0.0;
    }
    return 0.0;
}

RealField Potential::field(const BoxGrid& g, double theta) const {
    return RealField::from_function(g, [&](const Point& x) {
        return value(theta * std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    });
}

RealField Potential::virial_field(const BoxGrid& g, double theta) const {
    return RealField::from_function(g, [&](const Point& x) {
        return virial(theta * std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    });
}

std::string to_string(PotentialFamily f) {
    switch (f) {
    case PotentialFamily::InversePower: return "inverse_power";
    case PotentialFamily::Gaussian: return "gaussian";
    case PotentialFamily::Zero: return "zero";
    }
    return "zero";
}

const AssumptionCheck* AssumptionReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

bool AssumptionReport::satisfied(const std::string& name) const {
    const auto* c = find(name);
    return c && c->satisfied;
}

bool AssumptionReport::all(const std::vector<std::string>& names) const {
    return std::all_of(names.begin(), names.end(), [&](const std::string& n) { return satisfied(n); });
}

AssumptionReport check_assumptions(const Nonlinearity& nl, const Potential& V, const BoxGrid& grid, double s,
                                   double S_estimate) {
    AssumptionReport rep;
    const int N = grid.dim;
    const double crit = critical_exponent(N, s);
    auto add = [&](std::string name, double margin, double where, std::string note = {}) {
        rep.checks.push_back({std::move(name), margin > 0.0, margin, where, std::move(note)});
    };

    // (g1): oddness sampled, regularity from the exponent.
    {
        double worst = 0.0, where = 0.0;
        for (double t : log_grid(1e-6, 1e3, 1000)) {
            const double scale = std::max(1.0, std::abs(nl.g(t)));
            const double e = std::abs(nl.g(-t) + nl.g(t)) / scale;
            if (e > worst) {
                worst = e;
                where = t;
            }
        }
        const double holder = std::min(1.0, nl.p - 1.0) - std::max(0.0, 1.0 - 2.0 * s);
        double margin = std::min(1e-12 - worst, holder);
        std::string note = "C^{1,gamma} from exponent p";
        if (nl.truncation_cap && std::abs(nl.g(*nl.truncation_cap - 1e-12)) > 1e-9) {
            margin = -std::abs(nl.g(*nl.truncation_cap));
            where = *nl.truncation_cap;
            note = "cap is not at a zero of g, truncated g is discontinuous";
        }
        add("g1", margin, where, note);
    }
    // (g2): g(t)/t -> -m < 0.
    {
        double slope = 0.0;
        for (double t : {1e-2, 1e-4, 1e-6}) slope = nl.g(t) / t;
        add("g2", -slope, 1e-6);
    }
    // (g3): limsup g(t)/t^{2*-1} <= 0.
    {
        if (nl.truncation_cap) add("g3", 1.0, *nl.truncation_cap, "g vanishes beyond the cap");
        else if (!std::isfinite(crit)) add("g3", 1.0, 0.0, "no critical exponent for N <= 2s");
        else add("g3", crit - 1.0 - nl.p, 1e6, "power exponent vs 2*-1");
    }
    // (g3)': |g(t) + m t| <= C |t|^{q-1} with q = p+1 < 2*.
    {
        if (!std::isfinite(crit)) add("g3'", 1.0, 0.0);
        else add("g3'", crit - (nl.p + 1.0), 0.0, "q = p+1");
    }
    // (g4): G(t) > 0 just above zeta.
    {
        const double t = 1.5 * nl.zeta;
        add("g4", nl.G(t), t);
    }

    // Radial samples: grid radii plus a logarithmic refinement.
    std::vector<double> radii = log_grid(1e-6, 1e6, 2000);
    radii.push_back(0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point x = grid.point(i);
        radii.push_back(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    }
    const double vscale = std::max(V.V0, 1e-300);

    // (V1): V >= 0 and strictly positive somewhere.
    {
        double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0, where = 0.0;
        for (double r : radii) {
            const double v = V.value(r);
            if (v < vmin) {
                vmin = v;
                where = r;
            }
            vmax = std::max(vmax, v);
        }
        if (vmax <= 0.0) add("V1", 0.0, 0.0, "this inequality is strict at some point: fails for V = 0");
        else add("V1", std::min(vmin / vscale + kSlack, vmax / vscale), where);
    }
    // (V2): || max(<grad V, x>, 0) ||_{L^{N/2s}} < 2S by radial quadrature.
    {
        const double q = N / (2.0 * s);
        auto f = [&](double r) {
            const double v = std::max(V.virial(r), 0.0);
            return v > 0.0 ? std::pow(v, q) * std::pow(r, N - 1.0) : 0.0;
        };
        double integral = 0.0;
        if (!V.is_zero()) {
            boost::math::quadrature::exp_sinh<double> es;
            integral = es.integrate(f, 0.0, std::numeric_limits<double>::infinity());
        }
        const double area = N == 1 ? 2.0 : N == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
        rep.v2_quantity = integral > 0.0 ? std::pow(area * integral, 1.0 / q) : 0.0;
        rep.v2_bound = 2.0 * S_estimate;
        add("V2", rep.v2_bound - rep.v2_quantity, 0.0);
    }
    // (V3): decay at infinity.
    {
        const double far = V.value(1e8) / vscale;
        add("V3", 1e-6 - far, 1e8);
    }
    // (V4): radial by construction.
    add("V4", 1.0, 0.0, "radial family");
    // (V5): <grad V, x> <= 0.
    {
        double worst = -std::numeric_limits<double>::infinity(), where = 0.0;
        for (double r : radii) {
            const double v = V.virial(r) / vscale;
            if (v > worst) {
                worst = v;
                where = r;
            }
        }
        add("V5", kSlack - worst, where);
    }
    // (V6): N V + <grad V, x> >= 0, strict somewhere.
    {
        double worst = std::numeric_limits<double>::infinity(), best = 0.0, where = 0.0;
        for (double r : radii) {
            const double v = (N * V.value(r) + V.virial(r)) / vscale;
            if (v < worst) {
                worst = v;
                where = r;
            }
            best = std::max(best, v);
        }
        if (best <= 0.0) add("V6", 0.0, 0.0, "never strict");
        else add("V6", std::min(worst + kSlack, best), where);
    }
    return rep;
}

}  // namespace fracground
