#include "fracground/energy.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "fracground/detail/model_fields.hpp"

namespace fracground {

namespace detail {

std::shared_ptr<const RealField> potential_on(const BoxGrid& g, const Potential& V, bool virial) {
    using Key = std::tuple<int, double, int, int, double, double, bool>;
    static std::mutex m;
    static std::map<Key, std::shared_ptr<const RealField>> cache;
    Key key{g.dim, g.half_width, g.points_per_axis, static_cast<int>(V.family), V.V0, V.beta, virial};
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto f = std::make_shared<const RealField>(virial ? V.virial_field(g) : V.field(g));
    std::lock_guard<std::mutex> lock(m);
    if (cache.size() > 16) cache.clear();
    cache.emplace(key, f);
    return f;
}

}  // namespace detail

std::size_t PathSpec::argmax() const {
    return static_cast<std::size_t>(std::max_element(energies.begin(), energies.end()) - energies.begin());
}

EnergyBreakdown energy(const RealField& u, const ModelSpec& model, double lambda) {
    if (!u.all_finite()) throw DomainError("energy: non-finite field");
    const BoxGrid& g = u.grid;
    const SplitPair sp = split(model.nl);
    auto V = detail::potential_on(g, model.V, false);
    auto W = detail::potential_on(g, model.V, true);
    EnergyBreakdown e;
    e.lambda = lambda;
    e.kinetic = kinetic_energy(u, model.s);
    double pot = 0.0, G = 0.0, G1 = 0.0, G2 = 0.0, vir = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = u[i];
        pot += (*V)[i] * v * v;
        vir += (*W)[i] * v * v;
        G += model.nl.G(v);
        G1 += sp.G1(v);
        G2 += sp.G2(v);
    }
    const double w = g.cell_volume();
    e.potential = pot * w;
    e.virial = vir * w;
    e.G_total = G * w;
    e.G1 = G1 * w;
    e.G2 = G2 * w;
    e.I = 0.5 * e.kinetic + 0.5 * e.potential - e.G_total;
    e.I_lambda = 0.5 * e.kinetic + 0.5 * e.potential + e.G2 - lambda * e.G1;
    if (!std::isfinite(e.I) || !std::isfinite(e.I_lambda)) throw DomainError("energy: non-finite integrand");
    return e;
}

Residual gradient_residual(const RealField& u, const ModelSpec& model, double lambda) {
    const SplitPair sp = split(model.nl);
    auto V = detail::potential_on(u.grid, model.V, false);
    RealField r = frac_laplacian(u, model.s);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = u[i];
        r[i] += (*V)[i] * v + sp.g2(v) - lambda * sp.g1(v);
    }
    const double n = l2_norm(r);
    return {std::move(r), n};
}

PohozaevReport pohozaev_report(const RealField& u, const ModelSpec& model, double lambda) {
    const int N = u.grid.dim;
    const EnergyBreakdown e = energy(u, model, lambda);
    PohozaevReport p;
    p.kinetic_term = 0.5 * (N - 2.0 * model.s) * e.kinetic;
    p.potential_term = 0.5 * N * e.potential;
    p.virial_term = 0.5 * e.virial;
    p.rhs = lambda == 1.0 ? N * e.G_total : N * (lambda * e.G1 - e.G2);
    p.residual = p.kinetic_term + p.potential_term + p.virial_term - p.rhs;
    const double scale =
        std::abs(p.kinetic_term) + std::abs(p.potential_term) + std::abs(p.virial_term) + std::abs(p.rhs);
    p.residual_rel = scale > 0.0 ? std::abs(p.residual) / scale : 0.0;
    p.free_residual = p.kinetic_term - p.rhs;
    const double fscale = std::abs(p.kinetic_term) + std::abs(p.rhs);
    p.free_residual_rel = fscale > 0.0 ? std::abs(p.free_residual) / fscale : 0.0;
    return p;
}

CriticalDiagnostics critical_diagnostics(const RealField& u, const ModelSpec& model, double lambda, double level) {
    const int N = u.grid.dim;
    const SplitPair sp = split(model.nl);
    const EnergyBreakdown e = energy(u, model, lambda);
    double d1 = 0.0, d2 = 0.0;
    for (double v : u.values) {
        d1 += sp.g1(v) * v;
        d2 += sp.g2(v) * v;
    }
    const double w = u.grid.cell_volume();
    CriticalDiagnostics c;
    c.delta1 = d1 * w;
    c.delta2 = d2 * w;
    c.nehari_like = e.kinetic + e.potential + c.delta2 - lambda * c.delta1;
    c.level_relation_residual = std::abs(model.s * e.kinetic / N - e.virial / (2.0 * N) - level);
    return c;
}

Projection project_to_P0(const RealField& u, const ModelSpec& model, const ProjectionOptions& opt) {
    const int N = u.grid.dim;
    const double T = kinetic_energy(u, model.s);
    double G = 0.0;
    for (double v : u.values) G += model.nl.G(v);
    G *= u.grid.cell_volume();
    if (!(G > 0.0)) throw DomainError("project_to_P0: int G(u) must be positive");
    // T(u^theta) = theta^{N-2s} T and int G(u^theta) = theta^N int G balance at theta^{2s}.
    const double theta = std::pow((N - 2.0 * model.s) * T / (2.0 * N * G), 1.0 / (2.0 * model.s));
    return {theta, dilate(u, theta, opt.guard)};
}

namespace {

struct ScalingData {
    double T = 0.0;
    double G = 0.0;
    std::vector<double> r;   // radius of each grid point
    std::vector<double> u2;  // u^2 at each grid point
    double w = 0.0;
};

ScalingData scaling_data(const RealField& u, const ModelSpec& model) {
    ScalingData d;
    d.T = kinetic_energy(u, model.s);
    d.w = u.grid.cell_volume();
    for (double v : u.values) d.G += model.nl.G(v);
    d.G *= d.w;
    if (!model.V.is_zero()) {
        d.r.resize(u.size());
        d.u2.resize(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            const Point x = u.grid.point(i);
            d.r[i] = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            d.u2[i] = u[i] * u[i];
        }
    }
    return d;
}

double scaled_energy(const ScalingData& d, const ModelSpec& model, int N, double theta) {
    double pot = 0.0;
    for (std::size_t i = 0; i < d.r.size(); ++i) pot += model.V.value(theta * d.r[i]) * d.u2[i];
    pot *= d.w;
    const double tN = std::pow(theta, N);
    return 0.5 * std::pow(theta, N - 2.0 * model.s) * d.T + 0.5 * tN * pot - tN * d.G;
}

double guard_limit(const RealField& u, double guard, double theta_max) {
    if (dilation_overflow(u, theta_max) <= guard) return theta_max;
    double lo = 1.0, hi = theta_max;
    for (int it = 0; it < 60; ++it) {
        const double mid = std::sqrt(lo * hi);
        (dilation_overflow(u, mid) <= guard ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

double dilated_energy(const RealField& u, const ModelSpec& model, double theta) {
    return scaled_energy(scaling_data(u, model), model, u.grid.dim, theta);
}

Projection project_to_P(const RealField& u, const ModelSpec& model, const ProjectionOptions& opt) {
    const int N = u.grid.dim;
    const ScalingData d = scaling_data(u, model);
    if (!(d.G > 0.0)) throw DomainError("project_to_P: int G(u) must be positive");
    auto f = [&](double th) { return scaled_energy(d, model, N, th); };
    auto df = [&](double th) {
        const double h = 1e-4 * th;
        return (f(th + h) - f(th - h)) / (2.0 * h);
    };
    const double tmax = guard_limit(u, opt.guard, opt.theta_max);
    const int n = 160;
    std::vector<std::pair<double, double>> profile;
    double prev_t = opt.theta_min, prev_d = df(prev_t);
    profile.emplace_back(prev_t, f(prev_t));
    for (int i = 1; i <= n; ++i) {
        const double t = opt.theta_min * std::pow(tmax / opt.theta_min, double(i) / n);
        const double dt = df(t);
        profile.emplace_back(t, f(t));
        if (prev_d > 0.0 && dt <= 0.0) {
            boost::math::tools::eps_tolerance<double> tol(50);
            std::uintmax_t iters = 200;
            auto br = boost::math::tools::toms748_solve(df, prev_t, t, prev_d, dt, tol, iters);
            const double theta = 0.5 * (br.first + br.second);
            return {theta, dilate(u, theta, opt.guard)};
        }
        prev_t = t;
        prev_d = dt;
    }
    throw ProfileError("project_to_P: no critical dilation in the admissible bracket", std::move(profile));
}

double energy_on_P(const RealField& u, const ModelSpec& model) {
    const PohozaevReport p = pohozaev_report(u, model);
    if (p.residual_rel >= 1e-3) throw DomainError("energy_on_P: field is not on the Pohozaev set");
    const int N = u.grid.dim;
    const EnergyBreakdown e = energy(u, model);
    return model.s * e.kinetic / N - e.virial / (2.0 * N);
}

RealField plateau_profile(double height, double R, const BoxGrid& grid) {
    if (!(R >= 0.0) || R + 1.0 >= 0.5 * grid.half_width) throw DomainError("plateau radius too large for the box");
    return RealField::from_function(grid, [&](const Point& x) {
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        return height * std::clamp(R + 1.0 - r, 0.0, 1.0);
    });
}

double delta_bar(const RealField& z, const ModelSpec& model) {
    const EnergyBreakdown e = energy(z, model);
    if (!(e.G1 > 0.0)) throw DomainError("delta_bar: int G1 must be positive");
    const double delta = e.G2 / e.G1;
    if (!(delta < 1.0)) throw DomainError("delta_bar: profile has int G <= 0, no admissible interval");
    return std::min(1.0 - 1e-3, 1.1 * delta);
}

PathSpec mountain_path(const RealField& z, double theta_end, int K, const ModelSpec& model, double lambda,
                       double dbar, double guard) {
    if (K < 8) throw DomainError("mountain_path: need at least 8 segments");
    const EnergyBreakdown ez = energy(z, model, lambda);
    if (!(dbar * ez.G1 - ez.G2 > 0.0)) throw DomainError("mountain_path: profile violates the interval guard");
    std::vector<std::pair<double, double>> profile;
    for (bool last = false;;) {
        if (dilation_overflow(z, theta_end) > guard) {
            const double cap = guard_limit(z, guard, theta_end);
            if (last || cap <= 1.0 || (!profile.empty() && cap <= profile.back().first))
                throw ProfileError("mountain_path: box guard reached before negative energy", std::move(profile));
            theta_end = cap;
            last = true;
        }
        const double e_end = energy(dilate(z, theta_end, guard), model, lambda).I_lambda;
        profile.emplace_back(theta_end, e_end);
        if (e_end < 0.0) break;
        if (last) throw ProfileError("mountain_path: box guard reached before negative energy", std::move(profile));
        theta_end *= 2.0;
    }
    PathSpec path;
    path.theta_end = theta_end;
    for (int j = 0; j <= K; ++j) {
        const double t = double(j) / K;
        path.t.push_back(t);
        RealField v = j == 0 ? RealField(z.grid) : dilate(z, t * theta_end, guard);
        path.energies.push_back(j == 0 ? 0.0 : energy(v, model, lambda).I_lambda);
        path.vertices.push_back(std::move(v));
    }
    return path;
}

}  // namespace fracground
