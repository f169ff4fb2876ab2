#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fracground/solver.hpp"

using namespace fracground;

namespace {

ModelSpec model_1d() {
    ModelSpec m;
    m.s = 0.6;
    m.V = Potential::inverse_power(0.5, 1.0);
    return m;
}

SolveConfig tight() {
    SolveConfig c;
    c.tol = 1e-10;
    return c;
}

double max_abs_diff(const RealField& a, const RealField& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Independent Nehari functional <I'(u), u> = T + int V u^2 + int u^2 - int u^4 for g = -t + t^3.
double nehari(const RealField& u, const ModelSpec& m) {
    double quad = 0.0, quart = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Point x = u.grid.point(i);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        quad += (1.0 + m.V.value(r)) * u[i] * u[i];
        quart += std::pow(u[i], 4);
    }
    const double w = u.grid.cell_volume();
    return (kinetic_energy(u, m.s) + quad * w - quart * w) / (quart * w);
}

}  // namespace

TEST_CASE("status names") {
    CHECK(to_string(SolveStatus::Converged) == "converged");
    CHECK(to_string(SolveStatus::MaxIters) == "max_iters");
    CHECK(to_string(SolveStatus::Diverged) == "diverged");
    CHECK(to_string(SolveStatus::Collapsed) == "collapsed");
    CHECK(to_string(SolveStatus::Stagnated) == "stagnated");
}

TEST_CASE("hyperoctahedral symmetrization") {
    BoxGrid g(2, 4.0, 32);
    const RealField u = RealField::from_function(g, [](const Point& x) {
        return std::exp(-(x[0] - 0.5) * (x[0] - 0.5) - 2.0 * x[1] * x[1]) + 0.1 * x[0] * x[1];
    });
    const RealField v = symmetrize_hyperoctahedral(u);
    CHECK(max_abs_diff(symmetrize_hyperoctahedral(v), v) < 1e-15);
    const int M = g.points_per_axis;
    double worst = 0.0;
    for (int i = 1; i < M; ++i)
        for (int j = 1; j < M; ++j) {
            const double a = v[g.flatten({i, j, 0})];
            worst = std::max(worst, std::abs(a - v[g.flatten({j, i, 0})]));
            worst = std::max(worst, std::abs(a - v[g.flatten({M - i, j, 0})]));
            worst = std::max(worst, std::abs(a - v[g.flatten({i, M - j, 0})]));
        }
    CHECK(worst < 1e-15);
    CHECK(integral(v) == doctest::Approx(integral(u)).epsilon(1e-13));
}

TEST_CASE("seeds") {
    BoxGrid g(2, 8.0, 64);
    const ModelSpec m;
    SeedSpec s;
    const RealField p = make_seed(s, g, m);
    CHECK(sup_norm(p) == doctest::Approx(m.nl.zeta + 1.0));
    s.kind = SeedKind::Gaussian;
    s.height = 3.0;
    const RealField q = make_seed(s, g, m);
    CHECK(q[g.flatten({32, 32, 0})] == doctest::Approx(3.0));

    const auto path = std::filesystem::temp_directory_path() / "fracground_seed_test.csv";
    {
        std::ofstream f(path);
        f << "x,y,u\n";
        for (std::size_t i = 0; i < q.size(); ++i) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.point(i)[0], g.point(i)[1], q[i]);
            f << buf;
        }
    }
    s.kind = SeedKind::File;
    s.path = path.string();
    CHECK(max_abs_diff(make_seed(s, g, m), q) == 0.0);
    s.path = "/nonexistent/seed.csv";
    CHECK_THROWS(make_seed(s, g, m));
    std::filesystem::remove(path);
}

TEST_CASE("fixed-point ground state in one dimension") {
    const ModelSpec m = model_1d();
    BoxGrid g(1, 32.0, 2048);
    const SolveConfig cfg = tight();
    const SolveResult r = fixed_point_solve(m, 1.0, cfg, make_seed(cfg.seed, g, m));
    REQUIRE(r.converged);
    CHECK(r.status == SolveStatus::Converged);
    CHECK(r.residual_norm < 1e-10);
    CHECK(r.residual_untruncated == doctest::Approx(r.residual_norm));
    CHECK(std::abs(nehari(r.u, m)) < 1e-9);
    CHECK(r.level > 0.0);
    CHECK(r.level == doctest::Approx(r.energy.I));
    double mn = 0.0;
    for (double v : r.u.values) mn = std::min(mn, v);
    CHECK(mn > -1e-6 * sup_norm(r.u));
    CHECK(r.u[g.flatten({1024, 0, 0})] == doctest::Approx(sup_norm(r.u)));
}

TEST_CASE("Pohozaev residual decays like L^{-(N+2s)} at fixed spacing") {
    const ModelSpec m = model_1d();
    const SolveConfig cfg = tight();
    double res[2];
    for (int k = 0; k < 2; ++k) {
        const double L = 32.0 * (1 << k);
        BoxGrid g(1, L, int(32 * L));
        const SolveResult r = fixed_point_solve(m, 1.0, cfg, make_seed(cfg.seed, g, m));
        REQUIRE(r.converged);
        res[k] = r.pohozaev.residual_rel;
    }
    CHECK(res[0] < 1.5e-3);
    CHECK(res[0] / res[1] == doctest::Approx(std::pow(2.0, 2.2)).epsilon(0.15));
}

TEST_CASE("power-family lambda scaling is exact") {
    // For g1 = t^3, g2 = t: u_lambda = u_1 / sqrt(lambda) and c_lambda = c_1 / lambda.
    const ModelSpec m = model_1d();
    BoxGrid g(1, 32.0, 1024);
    const SolveConfig cfg = tight();
    const SolveResult r1 = fixed_point_solve(m, 1.0, cfg, make_seed(cfg.seed, g, m));
    REQUIRE(r1.converged);
    for (double lambda : {0.5, 0.8}) {
        CAPTURE(lambda);
        const SolveResult rl = fixed_point_solve(m, lambda, cfg, make_seed(cfg.seed, g, m));
        REQUIRE(rl.converged);
        CHECK(max_abs_diff(rl.u, (1.0 / std::sqrt(lambda)) * r1.u) < 1e-7 * sup_norm(rl.u));
        CHECK(rl.level == doctest::Approx(r1.level / lambda).epsilon(1e-8));
        CHECK(rl.pohozaev.residual_rel == doctest::Approx(r1.pohozaev.residual_rel).epsilon(1e-5));
    }
}

TEST_CASE("fixed-point and mountain-pass solutions agree") {
    const ModelSpec m = model_1d();
    BoxGrid g(1, 32.0, 1024);
    const SolveConfig cfg = tight();
    const RealField z = make_seed(cfg.seed, g, m);
    const SolveResult fp = fixed_point_solve(m, 1.0, cfg, z);
    const SolveResult mp = mountain_pass_solve(m, 1.0, cfg, z, delta_bar(z, m));
    REQUIRE(fp.converged);
    REQUIRE(mp.converged);
    CHECK(l2_norm(fp.u - mp.u) / l2_norm(fp.u) < 1e-6);
    CHECK(mp.level == doctest::Approx(fp.level).epsilon(1e-9));
    CHECK(mp.diagnostics.level_relation_residual / mp.level < 1e-3);
}

TEST_CASE("ray path through a critical point peaks at t = 1") {
    const ModelSpec m = model_1d();
    BoxGrid g(1, 32.0, 1024);
    const SolveConfig cfg = tight();
    const SolveResult r = fixed_point_solve(m, 1.0, cfg, make_seed(cfg.seed, g, m));
    const PathSpec p = ray_path(r.u, m, 1.0, 16);
    REQUIRE(p.vertices.size() == 17);
    const std::size_t j = p.argmax();
    CHECK(j == 8);
    CHECK(p.t[j] * p.theta_end == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(p.energies[j] == doctest::Approx(r.level).epsilon(1e-10));
    CHECK(p.endpoint_energy() < 0.0);
    for (int k = 1; k <= 8; ++k) CHECK(p.energies[k] - p.energies[k - 1] == doctest::Approx(p.energies[8] / 8).epsilon(1e-6));
    CHECK_THROWS_AS(ray_path(r.u, m, 1.0, 7), DomainError);
}

TEST_CASE("lambda continuation") {
    const ModelSpec m = model_1d();
    BoxGrid g(1, 32.0, 1024);
    const SolveConfig cfg = tight();
    const RealField z = make_seed(cfg.seed, g, m);
    const ContinuationTrace tr = lambda_continuation(m, cfg, 5, z);
    REQUIRE(tr.complete);
    REQUIRE(tr.records.size() == 5);
    CHECK(tr.positive);
    CHECK(tr.non_increasing);
    CHECK(tr.delta_bar == doctest::Approx(delta_bar(z, m)));
    CHECK(tr.records.front().lambda == doctest::Approx(tr.delta_bar));
    CHECK(tr.records.back().lambda == 1.0);
    for (const auto& rec : tr.records) {
        CAPTURE(rec.lambda);
        CHECK(rec.result.converged);
        CHECK(rec.level_relation_rel < 1e-3);
        CHECK(rec.c_lambda * rec.lambda == doctest::Approx(tr.records.back().c_lambda).epsilon(1e-8));
        CHECK(rec.alpha == doctest::Approx(rec.result.energy.kinetic));
    }
    CHECK_THROWS_AS(lambda_continuation(m, cfg, 2, z), DomainError);
}

TEST_CASE("failure statuses") {
    const ModelSpec m = model_1d();
    BoxGrid g(1, 16.0, 256);
    SolveConfig cfg = tight();
    cfg.stabilization = false;
    SeedSpec small;
    small.kind = SeedKind::Gaussian;
    small.height = 0.05;
    CHECK(fixed_point_solve(m, 1.0, cfg, make_seed(small, g, m)).status == SolveStatus::Collapsed);
    SeedSpec large = small;
    large.height = 50.0;
    CHECK(fixed_point_solve(m, 1.0, cfg, make_seed(large, g, m)).status == SolveStatus::Diverged);
    SolveConfig few = tight();
    few.max_iters = 3;
    const SolveResult r = fixed_point_solve(m, 1.0, few, make_seed(few.seed, g, m));
    CHECK(r.status == SolveStatus::MaxIters);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
}

TEST_CASE("free ground state and translation control") {
    // With V = 0 the Pohozaev set is translation invariant, so every theta_y equals 1.
    const ModelSpec m = ModelSpec{}.free();
    BoxGrid g(2, 8.0, 256);
    const SolveConfig cfg = tight();
    const SolveResult w = ground_state_free(m, cfg, make_seed(cfg.seed, g, m));
    REQUIRE(w.converged);
    const double b0 = b0_level(w, m);
    CHECK(b0 == doctest::Approx(w.energy.I));
    CHECK(w.pohozaev.free_residual_rel < 1e-2);
    for (const ThetaRecord& t : theta_translation_experiment(w.u, m, {1.0, 2.0, 3.0}, 1e-3)) {
        CAPTURE(t.radius);
        REQUIRE(t.ok);
        CHECK(t.deviation < 1e-2);
        CHECK(t.energy == doctest::Approx(b0).epsilon(1e-3));
    }
    const auto far = theta_translation_experiment(w.u, m, {9.0}, 1e-3);
    CHECK_FALSE(far.front().ok);
    CHECK_THROWS_AS(ground_state_free(ModelSpec{}, cfg, w.u), DomainError);
}

TEST_CASE("Pohozaev-constrained descent with V = 0 stays at b0") {
    const ModelSpec m = ModelSpec{}.free();
    BoxGrid g(2, 8.0, 256);
    SolveConfig cfg = tight();
    cfg.symmetrize = false;
    const SolveResult w = ground_state_free(m, cfg, make_seed(cfg.seed, g, m));
    const MinimizeTrace tr = pohozaev_minimize(m, cfg, 10, translate(w.u, {1.0, 0.5, 0.0}));
    REQUIRE(tr.steps.size() == 11);
    CHECK(tr.b_est == doctest::Approx(b0_level(w, m)).epsilon(1e-2));
    for (const auto& s : tr.steps) CHECK(s.pohozaev_rel < 1e-3);
    CHECK(tr.steps.front().centroid_radius > 1.0);
    CHECK(tr.last.grid == g);
    CHECK_THROWS_AS(pohozaev_minimize(m, cfg, 0, w.u), DomainError);
}

TEST_CASE("decay fit on a synthetic algebraic tail") {
    BoxGrid g(2, 32.0, 512);
    const RealField u = RealField::from_function(g, [](const Point& x) {
        return std::pow(1.0 + x[0] * x[0] + x[1] * x[1], -1.6);
    });
    const DecayFit f = decay_fit(u, 6.0, 15.0, 0.6);
    CHECK(f.exponent == doctest::Approx(-3.2).epsilon(2e-2));
    CHECK(f.rms < 2e-2);
    CHECK(f.radii.size() == f.shell_means.size());
    CHECK(f.radii.front() >= 6.0);
    CHECK(f.radii.back() <= 15.0);
    CHECK_THROWS_AS(decay_fit(u, 6.0, 20.0, 0.6), DomainError);
}

TEST_CASE("Sobolev quotient invariances") {
    BoxGrid g(2, 12.0, 128);
    const RealField u = RealField::from_function(g, [](const Point& x) {
        return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]));
    });
    const double q = sobolev_quotient(u, 0.6);
    CHECK(sobolev_quotient(3.7 * u, 0.6) == doctest::Approx(q).epsilon(1e-12));
    for (double th : {0.5, 1.3, 2.0}) CHECK(sobolev_quotient(dilate(u, th, 1e-6), 0.6) == doctest::Approx(q).epsilon(1e-2));
    // The sharp constant 2^{2s} pi^s Gamma((N+2s)/2)/Gamma((N-2s)/2) (Gamma(N/2)/Gamma(N))^{2s/N}
    // is attained by (1+|x|^2)^{-(N-2s)/2}, so a Gaussian sits above it.
    const double sharp = std::pow(2.0, 1.2) * std::pow(std::numbers::pi, 0.6) * std::tgamma(1.6) / std::tgamma(0.4);
    CHECK(sharp == doctest::Approx(1.83922624615).epsilon(1e-10));
    CHECK(q > sharp);
    CHECK_THROWS_AS(sobolev_quotient(RealField(g), 0.6), DomainError);
}

TEST_CASE("Sobolev constant estimate is seed independent") {
    BoxGrid g(2, 8.0, 128);
    SobolevConfig a;
    a.tol = 1e-10;
    SobolevConfig b = a;
    b.width = 1.7;
    const double sa = estimate_sobolev_constant(2, 0.6, g, a);
    const double sb = estimate_sobolev_constant(2, 0.6, g, b);
    CHECK(sa == doctest::Approx(sb).epsilon(2e-2));
    CHECK(sa == doctest::Approx(1.839).epsilon(5e-2));
    SobolevConfig starved = a;
    starved.max_iters = 2;
    CHECK_THROWS(estimate_sobolev_constant(2, 0.6, g, starved));
    CHECK_THROWS_AS(estimate_sobolev_constant(1, 0.6, BoxGrid(1, 8.0, 128), a), DomainError);
}
