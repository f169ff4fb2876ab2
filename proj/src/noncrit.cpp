#include <algorithm>
#include <cmath>

#include "fracground/detail/solver_common.hpp"
#include "fracground/kernel.hpp"
#include "fracground/solver.hpp"

namespace fracground {

MinimizeTrace pohozaev_minimize(const ModelSpec& model, const SolveConfig& cfg, int step_count,
                                const RealField& start, double step) {
    if (step_count < 1) throw DomainError("pohozaev_minimize: step_count must be positive");
    ProjectionOptions opt;
    opt.guard = cfg.guard;
    MinimizeTrace tr;
    Projection pr;
    try {
        pr = project_to_P(start, model, opt);
    } catch (const std::exception& e) {
        throw DomainError(std::string("pohozaev_minimize: initial projection failed: ") + e.what());
    }
    RealField u = std::move(pr.field);
    double theta = pr.theta;
    for (int k = 0;; ++k) {
        const Residual r = gradient_residual(u, model, 1.0);
        MinimizeStep st;
        st.k = k;
        st.I = energy(u, model).I;
        st.residual = r.norm / l2_norm(u);
        st.centroid_radius = detail::centroid_radius(u);
        st.pohozaev_rel = pohozaev_report(u, model).residual_rel;
        st.theta = theta;
        tr.steps.push_back(st);
        if (k == step_count) break;
        const RealField d = convolve_kernel(r.field, model.s);
        const double dn = detail::h_norm(d, model.s);
        const double alpha = std::min(step, 0.1 * detail::h_norm(u, model.s) / std::max(dn, 1e-300));
        u -= alpha * d;
        try {
            pr = project_to_P(u, model, opt);
        } catch (const std::exception& e) {
            throw DomainError("pohozaev_minimize: projection failed at step " + std::to_string(k + 1) + ": " +
                              e.what());
        }
        u = std::move(pr.field);
        theta = pr.theta;
    }
    tr.b_est = std::min_element(tr.steps.begin(), tr.steps.end(), [](auto& a, auto& b) { return a.I < b.I; })->I;
    tr.min_residual =
        std::min_element(tr.steps.begin(), tr.steps.end(), [](auto& a, auto& b) { return a.residual < b.residual; })
            ->residual;
    const std::size_t lo = tr.steps.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(tr.steps.size() - lo);
    for (std::size_t i = lo; i < tr.steps.size(); ++i) {
        const double x = tr.steps[i].k, y = tr.steps[i].centroid_radius;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    tr.drift_slope = den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
    tr.last = std::move(u);
    return tr;
}

std::vector<ThetaRecord> theta_translation_experiment(const RealField& w, const ModelSpec& model,
                                                      const std::vector<double>& radii, double guard) {
    std::vector<ThetaRecord> out;
    ProjectionOptions opt;
    opt.guard = guard;
    opt.theta_min = 0.2;
    opt.theta_max = 5.0;
    for (double R : radii) {
        ThetaRecord rec;
        rec.radius = R;
        try {
            if (R >= w.grid.half_width) throw DomainError("translation radius outside the box");
            const RealField moved = translate(w, Point{R, 0.0, 0.0});
            const Projection p = project_to_P(moved, model, opt);
            rec.theta = p.theta;
            rec.deviation = std::abs(p.theta - 1.0);
            rec.energy = dilated_energy(moved, model, p.theta);
            rec.ok = true;
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace fracground
