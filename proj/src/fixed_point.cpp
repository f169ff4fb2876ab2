#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "fracground/detail/model_fields.hpp"
#include "fracground/detail/solver_common.hpp"
#include "fracground/kernel.hpp"
#include "fracground/solver.hpp"

namespace fracground {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIters: return "max_iters";
        case SolveStatus::Diverged: return "diverged";
        case SolveStatus::Collapsed: return "collapsed";
        case SolveStatus::Stagnated: return "stagnated";
    }
    return "unknown";
}

namespace detail {

double h_inner(const RealField& a, const RealField& b, double s) {
    return inner(a, frac_laplacian(b, s)) + inner(a, b);
}

double relative_residual(const RealField& u, const ModelSpec& model, double lambda) {
    const double un = l2_norm(u);
    if (un == 0.0) return 0.0;
    return gradient_residual(u, model, lambda).norm / un;
}

void finalize(SolveResult& res, const ModelSpec& model, double lambda) {
    res.lambda = lambda;
    res.energy = energy(res.u, model, lambda);
    res.level = res.energy.I_lambda;
    res.pohozaev = pohozaev_report(res.u, model, lambda);
    res.diagnostics = critical_diagnostics(res.u, model, lambda, res.level);
    res.tail_mass = tail_mass(res.u);
    res.residual_untruncated = untruncated_residual(res.u, model, lambda);
}

double ray_maximum(const RealField& u, const ModelSpec& model, double lambda) {
    const SplitPair sp = split(model.nl);
    const double quad = kinetic_energy(u, model.s) + energy(u, model, lambda).potential;
    const double w = u.grid.cell_volume();
    if (!model.nl.truncation_cap) {
        // g2 is linear and g1 homogeneous of degree p, so the critical t has a closed form.
        double n2 = 0.0, n1 = 0.0;
        for (double v : u.values) {
            n2 += sp.g2(v) * v;
            n1 += sp.g1(v) * v;
        }
        const double num = quad + n2 * w, den = lambda * n1 * w;
        if (!(num > 0.0 && den > 0.0)) throw DomainError("ray_maximum: no interior maximum along the ray");
        return std::pow(num / den, 1.0 / (model.nl.p - 1.0));
    }
    auto d = [&](double t) {
        double acc = 0.0;
        for (double v : u.values) acc += (sp.g2(t * v) - lambda * sp.g1(t * v)) * v;
        return t * quad + acc * w;
    };
    double lo = 1e-3, dlo = d(lo);
    if (!(dlo > 0.0)) throw DomainError("ray_maximum: energy does not increase near 0 along the ray");
    for (double hi = lo * 1.5; hi < 1e6; hi *= 1.5) {
        const double dhi = d(hi);
        if (dhi <= 0.0) {
            boost::math::tools::eps_tolerance<double> tol(50);
            std::uintmax_t it = 200;
            auto br = boost::math::tools::toms748_solve(d, lo, hi, dlo, dhi, tol, it);
            return 0.5 * (br.first + br.second);
        }
        lo = hi;
        dlo = dhi;
    }
    throw DomainError("ray_maximum: energy is unbounded along the ray");
}

double centroid_radius(const RealField& u) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Point x = u.grid.point(i);
        const double m = u[i] * u[i];
        num += std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * m;
        den += m;
    }
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace detail

RealField symmetrize_hyperoctahedral(const RealField& u) {
    const BoxGrid& g = u.grid;
    const int N = g.dim;
    const std::size_t M = static_cast<std::size_t>(g.points_per_axis);
    const std::size_t M1 = N >= 2 ? M : 1, M2 = N >= 3 ? M : 1;
    // Flat index i = (j0 * M1 + j1) * M2 + j2 with unused axes of extent 1.
    auto idx = [&](std::size_t a, std::size_t b, std::size_t c) { return (a * M1 + b) * M2 + c; };
    auto refl = [&](std::size_t j) { return (M - j) % M; };
    RealField v = u;
    RealField r(g);
    for (int axis = 0; axis < N; ++axis) {
        for (std::size_t a = 0; a < M; ++a)
            for (std::size_t b = 0; b < M1; ++b)
                for (std::size_t c = 0; c < M2; ++c) {
                    const std::size_t src = axis == 0 ? idx(refl(a), b, c) : axis == 1 ? idx(a, refl(b), c)
                                                                                         : idx(a, b, refl(c));
                    r[idx(a, b, c)] = v[src];
                }
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (v[i] + r[i]);
    }
    if (N == 1) return v;
    std::array<int, 3> perm{0, 1, 2};
    RealField out(g);
    int count = 0;
    do {
        for (std::size_t a = 0; a < M; ++a)
            for (std::size_t b = 0; b < M1; ++b)
                for (std::size_t c = 0; c < M2; ++c) {
                    const std::size_t j[3] = {a, b, c};
                    out[idx(a, b, c)] += v[idx(j[perm[0]], j[perm[1]], j[perm[2]])];
                }
        ++count;
    } while (std::next_permutation(perm.begin(), perm.begin() + N));
    out *= 1.0 / count;
    return out;
}

RealField make_seed(const SeedSpec& spec, const BoxGrid& grid, const ModelSpec& model) {
    switch (spec.kind) {
        case SeedKind::Plateau: {
            const double h = spec.height > 0.0 ? spec.height : model.nl.zeta + 1.0;
            return plateau_profile(h, spec.radius, grid);
        }
        case SeedKind::Gaussian: {
            const double h = spec.height > 0.0 ? spec.height : model.nl.zeta + 1.0;
            const double w = spec.radius;
            return RealField::from_function(grid, [&](const Point& x) {
                return h * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (w * w));
            });
        }
        case SeedKind::File: {
            std::ifstream in(spec.path);
            if (!in) throw DomainError("seed file not readable: " + spec.path);
            std::vector<double> v;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-' ||
                                      line[0] == '+' || line[0] == '.'))
                    continue;
                const auto pos = line.find_last_of(',');
                v.push_back(std::stod(pos == std::string::npos ? line : line.substr(pos + 1)));
            }
            if (v.size() != grid.size()) throw DomainError("seed file has the wrong number of grid values");
            return RealField(grid, std::move(v));
        }
    }
    throw DomainError("unknown seed kind");
}

double untruncated_residual(const RealField& u, const ModelSpec& model, double lambda) {
    ModelSpec m = model;
    m.nl.truncation_cap.reset();
    return detail::relative_residual(u, m, lambda);
}

SolveResult fixed_point_solve(const ModelSpec& model, double lambda, const SolveConfig& cfg, const RealField& seed) {
    if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) throw DomainError("damping must lie in (0, 1]");
    if (!(cfg.tol > 0.0)) throw DomainError("tol must be positive");
    const SplitPair sp = split(model.nl);
    const BoxGrid& g = seed.grid;
    const auto Vp = detail::potential_on(g, model.V, false);
    const RealField& V = *Vp;
    const double gamma = model.nl.p / (model.nl.p - 1.0);
    SolveResult res;
    res.u = seed;
    res.lambda = lambda;
    RealField& u = res.u;
    if (l2_norm(u) == 0.0) {
        res.converged = true;
        res.status = SolveStatus::Converged;
        detail::finalize(res, model, lambda);
        return res;
    }
    for (int it = 0; it < cfg.max_iters; ++it) {
        const double un = l2_norm(u);
        if (!std::isfinite(un) || un > 1e6) {
            res.status = SolveStatus::Diverged;
            res.iterations = it;
            break;
        }
        if (un < 1e-10) {
            res.status = SolveStatus::Collapsed;
            res.iterations = it;
            break;
        }
        RealField F(g);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double v = u[i];
            const double a = sp.g1(v), b = sp.g2(v);
            F[i] = -V[i] * v + v + lambda * a - b;
            num += v * (V[i] * v + b);
            den += v * lambda * a;
        }
        RealField next = convolve_kernel(F, model.s);
        if (cfg.stabilization && den > 0.0) {
            num = num * g.cell_volume() + kinetic_energy(u, model.s);
            den *= g.cell_volume();
            next *= std::pow(num / den, gamma);
        }
        if (cfg.damping < 1.0) next = (1.0 - cfg.damping) * u + cfg.damping * next;
        u = cfg.symmetrize ? symmetrize_hyperoctahedral(next) : std::move(next);
        res.iterations = it + 1;
        res.residual_norm = detail::relative_residual(u, model, lambda);
        if (!std::isfinite(res.residual_norm)) {
            res.status = SolveStatus::Diverged;
            break;
        }
        if (res.residual_norm <= cfg.tol) {
            res.converged = true;
            res.status = SolveStatus::Converged;
            break;
        }
    }
    if (!u.all_finite()) {
        res.status = SolveStatus::Diverged;
        return res;
    }
    res.residual_norm = detail::relative_residual(u, model, lambda);
    detail::finalize(res, model, lambda);
    return res;
}

SolveResult ground_state_free(const ModelSpec& model, const SolveConfig& cfg, const RealField& seed) {
    if (!model.V.is_zero()) throw DomainError("ground_state_free: the model must have V = 0");
    return fixed_point_solve(model, 1.0, cfg, seed);
}

double b0_level(const SolveResult& w, const ModelSpec& model) {
    return energy(w.u, model.free()).I;
}

}  // namespace fracground
