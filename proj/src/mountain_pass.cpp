#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "fracground/detail/solver_common.hpp"
#include "fracground/kernel.hpp"
#include "fracground/solver.hpp"

namespace fracground {

namespace {

// I_lambda(t u) from precomputed quadratic part; only the nonlinear sums depend on t.
struct RayEnergy {
    const RealField& u;
    SplitPair sp;
    double lambda;
    double quad;

    RayEnergy(const RealField& f, const ModelSpec& model, double lam)
        : u(f), sp(split(model.nl)), lambda(lam),
          quad(kinetic_energy(f, model.s) + energy(f, model, lam).potential) {}

    double operator()(double t) const {
        double acc = 0.0;
        for (double v : u.values) acc += sp.G2(t * v) - lambda * sp.G1(t * v);
        return 0.5 * t * t * quad + acc * u.grid.cell_volume();
    }
};

// t on [a, b] with phi(t) = target, phi monotone there.
double solve_level(const RayEnergy& phi, double a, double b, double target) {
    auto f = [&](double t) { return phi(t) - target; };
    const double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0 || fa * fb > 0.0) return b;
    boost::math::tools::eps_tolerance<double> tol(40);
    std::uintmax_t it = 200;
    auto br = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, it);
    return 0.5 * (br.first + br.second);
}

}  // namespace

PathSpec ray_path(const RealField& u, const ModelSpec& model, double lambda, int K) {
    if (K < 2 || K % 2 != 0) throw DomainError("ray_path: K must be even and positive");
    const double tstar = detail::ray_maximum(u, model, lambda);
    const RayEnergy phi(u, model, lambda);
    const double top = phi(tstar);
    double tend = 2.0 * tstar;
    int doublings = 0;
    while (phi(tend) >= 0.0) {
        tend *= 2.0;
        if (++doublings > 40) throw DomainError("ray_path: no negative endpoint along the ray");
    }
    const double bottom = phi(tend);
    PathSpec path;
    path.theta_end = tend;
    const int half = K / 2;
    std::vector<double> ts;
    // Uphill branch: equal energy increments from 0 to the maximum.
    for (int j = 0; j <= half; ++j) {
        const double target = top * j / half;
        ts.push_back(j == 0 ? 0.0 : j == half ? tstar : solve_level(phi, 0.0, tstar, target));
    }
    // Downhill branch: equal energy decrements from the maximum to the endpoint.
    for (int j = 1; j <= half; ++j) {
        const double target = top + (bottom - top) * j / half;
        ts.push_back(j == half ? tend : solve_level(phi, tstar, tend, target));
    }
    for (double t : ts) {
        path.t.push_back(t / tend);
        RealField v = u;
        v *= t;
        path.energies.push_back(phi(t));
        path.vertices.push_back(std::move(v));
    }
    return path;
}

SolveResult mountain_pass_from(const ModelSpec& model, double lambda, const SolveConfig& cfg,
                               const RealField& direction) {
    if (!(cfg.tol > 0.0)) throw DomainError("tol must be positive");
    SolveResult res;
    res.lambda = lambda;
    RealField u = direction;
    if (cfg.symmetrize) u = symmetrize_hyperoctahedral(u);
    u *= detail::ray_maximum(u, model, lambda);
    double best = std::numeric_limits<double>::infinity();
    int since_best = 0;
    for (int it = 0; it < cfg.max_iters; ++it) {
        // The max vertex of the ray path sits at t* u, which is u after the rescaling.
        const Residual r = gradient_residual(u, model, lambda);
        const double un = l2_norm(u);
        res.residual_norm = r.norm / un;
        res.iterations = it;
        if (!std::isfinite(res.residual_norm) || un > 1e6) {
            res.status = SolveStatus::Diverged;
            break;
        }
        if (res.residual_norm <= cfg.tol) {
            res.converged = true;
            res.status = SolveStatus::Converged;
            break;
        }
        if (res.residual_norm < best * (1.0 - 1e-3)) {
            best = res.residual_norm;
            since_best = 0;
        } else if (++since_best >= cfg.stagnation_window) {
            res.status = SolveStatus::Stagnated;
            break;
        }
        const RealField d = convolve_kernel(r.field, model.s);
        const double dn = detail::h_norm(d, model.s);
        const double alpha = std::min(cfg.step, 0.1 * detail::h_norm(u, model.s) / std::max(dn, 1e-300));
        u -= alpha * d;
        if (cfg.symmetrize) u = symmetrize_hyperoctahedral(u);
        if (l2_norm(u) < 1e-10) {
            res.status = SolveStatus::Collapsed;
            break;
        }
        u *= detail::ray_maximum(u, model, lambda);
    }
    res.u = std::move(u);
    if (res.status == SolveStatus::MaxIters) res.iterations = cfg.max_iters;
    if (!res.u.all_finite()) return res;
    detail::finalize(res, model, lambda);
    return res;
}

SolveResult mountain_pass_solve(const ModelSpec& model, double lambda, const SolveConfig& cfg, const RealField& z,
                                double dbar) {
    PathSpec path;
    double theta0 = 1.0;
    for (int attempt = 0;; ++attempt) {
        try {
            path = mountain_path(z, theta0, cfg.path_segments, model, lambda, dbar, cfg.guard);
            break;
        } catch (const ProfileError&) {
            if (attempt >= 3) throw;
            theta0 *= 0.5;
        }
    }
    const std::size_t j = path.argmax();
    if (j == 0 || j + 1 == path.vertices.size())
        throw DomainError("mountain_pass_solve: path maximum sits at an endpoint");
    return mountain_pass_from(model, lambda, cfg, path.vertices[j]);
}

ContinuationTrace lambda_continuation(const ModelSpec& model, const SolveConfig& cfg, int lambda_count,
                                      const RealField& z) {
    if (lambda_count < 3) throw DomainError("lambda_continuation: need at least 3 lambda values");
    ContinuationTrace tr;
    tr.delta_bar = delta_bar(z, model);
    const int N = z.grid.dim;
    RealField warm;
    for (int k = 0; k < lambda_count; ++k) {
        const double lam = tr.delta_bar + (1.0 - tr.delta_bar) * k / (lambda_count - 1);
        SolveResult r;
        try {
            r = k == 0 ? mountain_pass_solve(model, lam, cfg, z, tr.delta_bar)
                       : mountain_pass_from(model, lam, cfg, warm);
        } catch (const std::exception& e) {
            tr.failure = "lambda = " + std::to_string(lam) + ": " + e.what();
            break;
        }
        if (!r.converged) {
            tr.failure = "lambda = " + std::to_string(lam) + ": " + to_string(r.status);
            break;
        }
        ContinuationRecord rec;
        rec.lambda = lam;
        rec.c_lambda = r.level;
        rec.alpha = r.energy.kinetic;
        const double rel = model.s * r.energy.kinetic / N - r.energy.virial / (2.0 * N);
        rec.level_relation_rel = std::abs(rel - r.level) / std::abs(r.level);
        warm = r.u;
        rec.result = std::move(r);
        tr.records.push_back(std::move(rec));
    }
    tr.complete = static_cast<int>(tr.records.size()) == lambda_count;
    tr.positive = !tr.records.empty() &&
                  std::all_of(tr.records.begin(), tr.records.end(), [](const auto& r) { return r.c_lambda > 0.0; });
    tr.non_increasing = true;
    for (std::size_t i = 1; i < tr.records.size(); ++i)
        if (tr.records[i].c_lambda > tr.records[i - 1].c_lambda + 1e-6) tr.non_increasing = false;
    return tr;
}

}  // namespace fracground
