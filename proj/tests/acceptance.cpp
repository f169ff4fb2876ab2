// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any line fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fracground/config.hpp"
#include "fracground/energy.hpp"
#include "fracground/experiments.hpp"
#include "fracground/grid_spectral.hpp"
#include "fracground/kernel.hpp"
#include "fracground/solver.hpp"

using namespace fracground;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

void run(const std::string& id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = budget_s <= 0.0 || dt <= budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::string timing = fmt("%.1f s", dt);
    if (budget_s > 0.0) timing += fmt(" / budget %.0f s", budget_s);
    std::printf("%s %-5s %-34s %s [%s]\n", pass ? "PASS" : "FAIL", id.c_str(), name.c_str(), o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
}

ExperimentConfig config(const std::string& name) {
    ExperimentConfig c = load_config(std::string(FRACGROUND_CONFIG_DIR) + "/" + name);
    validate(c);
    return c;
}

RealField gaussian(const BoxGrid& g, double width) {
    return RealField::from_function(g, [&](const Point& x) {
        return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (width * width));
    });
}

double rel_l2(const RealField& a, const RealField& b) { return l2_norm(a - b) / l2_norm(a); }

struct Witness {
    SolveResult fp, mp;
};

Witness solve_both(ExperimentConfig cfg, int points) {
    cfg.points = points;
    const ModelSpec model = cfg.model();
    const RealField seed = make_seed(cfg.solver.seed, cfg.grid(), model);
    return {fixed_point_solve(model, 1.0, cfg.solver, seed),
            mountain_pass_solve(model, 1.0, cfg.solver, seed, delta_bar(seed, model))};
}

std::string witness_detail(const Witness& w) {
    return "fp_res=" + sci(w.fp.residual_norm) + " mp_res=" + sci(w.mp.residual_norm) +
           " l2_gap=" + sci(rel_l2(w.fp.u, w.mp.u)) + " pohozaev_rel=" + sci(w.fp.pohozaev.residual_rel);
}

bool witness_ok(const Witness& w) {
    return w.fp.converged && w.mp.converged && w.fp.residual_norm < 1e-8 && w.mp.residual_norm < 1e-8 &&
           rel_l2(w.fp.u, w.mp.u) < 0.05;
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "fracground_acceptance";
    fs::create_directories(out);

    run("C1", "Gagliardo vs spectral seminorm", 10.0, [] {
        const BoxGrid g(1, 10.0, 64);
        const std::vector<std::pair<std::string, RealField>> inputs{{"gaussian", gaussian(g, 1.5)},
                                                                    {"plateau", plateau_profile(1.0, 1.0, g)}};
        double worst = 0.0;
        for (const auto& [label, u] : inputs)
            for (double s : {0.3, 0.5, 0.75}) {
                const double lhs = gagliardo_seminorm_sq(u, s);
                const double rhs = 2.0 / normalization_constant(1, s) * kinetic_energy(pad_field(u, 16), s);
                worst = std::max(worst, std::abs(lhs / rhs - 1.0));
            }
        return Outcome{worst < 2e-2, "max_rel_dev=" + sci(worst) + " (tol 2e-2, 2 inputs x 3 orders)"};
    });

    run("C2", "principal value vs spectral", 30.0, [] {
        const BoxGrid g(1, 20.0, 256);
        const RealField u = gaussian(g, 1.0);
        const RealField a = frac_laplacian_pv(u, 0.5, 1e-3);
        const RealField b = frac_laplacian(u, 0.5);
        double d = 0.0, n = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (std::abs(g.point(i)[0]) > 0.5 * g.half_width) continue;
            d = std::max(d, std::abs(a[i] - b[i]));
            n = std::max(n, std::abs(b[i]));
        }
        return Outcome{d / n < 5e-3, "rel_sup=" + sci(d / n) + " (tol 5e-3, |x| <= L/2)"};
    });

    // The commutator residual is set by periodic images of the padded box, so it scales with
    // (padding * L)^-2 and not with M at fixed L.
    constexpr int kPad = 256;
    run("C3", "commutator, M-doubling at fixed L", 30.0, [] {
        const double r1 = pohozaev_pointwise_residual(gaussian(BoxGrid(1, 8.0, 512), std::sqrt(2.0)), 0.5, kPad);
        const double r2 = pohozaev_pointwise_residual(gaussian(BoxGrid(1, 8.0, 1024), std::sqrt(2.0)), 0.5, kPad);
        return Outcome{r1 < 1e-6 && r1 / r2 >= 4.0, "res_M512=" + sci(r1) + " res_M1024=" + sci(r2) +
                                                        " reduction=" + fmt("%.3f", r1 / r2) + " (need < 1e-6, >= 4)"};
    });
    run("C3s", "commutator, M-doubling at fixed h", 30.0, [] {
        const double r1 = pohozaev_pointwise_residual(gaussian(BoxGrid(1, 8.0, 512), std::sqrt(2.0)), 0.5, kPad);
        const double r2 = pohozaev_pointwise_residual(gaussian(BoxGrid(1, 16.0, 1024), std::sqrt(2.0)), 0.5, kPad);
        return Outcome{r1 < 1e-6 && r1 / r2 >= 4.0, "res_M512=" + sci(r1) + " res_M1024=" + sci(r2) +
                                                        " reduction=" + fmt("%.3f", r1 / r2) + " (need < 1e-6, >= 4)"};
    });

    const ExperimentConfig canonical = config("canonical.ini");
    run("C4", "solution witness, L=16 M=256/512", 300.0, [&] {
        const Witness a = solve_both(canonical, 256);
        const Witness b = solve_both(canonical, 512);
        const bool ok = witness_ok(a) && witness_ok(b) && a.fp.pohozaev.residual_rel < 1e-2 &&
                        b.fp.pohozaev.residual_rel < a.fp.pohozaev.residual_rel;
        return Outcome{ok, "M256: " + witness_detail(a) + " | M512: " + witness_detail(b) +
                               " (need res < 1e-8, l2 < 5e-2, pohozaev < 1e-2 then smaller)"};
    });
    run("C4s", "solution witness, L=16 M=1024", 0.0, [&] {
        const Witness c = solve_both(canonical, 1024);
        return Outcome{witness_ok(c) && c.fp.pohozaev.residual_rel < 1e-2,
                       "M1024: " + witness_detail(c) + " sup=" + fmt("%.4f", sup_norm(c.fp.u)) +
                           " I=" + fmt("%.5f", c.fp.energy.I)};
    });

    RunRecord sweep;
    run("C5", "level relation on every record", 900.0, [&] {
        sweep = cmd_sweep(config("sweep.ini"), out.string());
        double worst = 0.0;
        bool all = sweep.summary["complete"].get<bool>();
        for (const auto& rec : sweep.summary["records"]) {
            worst = std::max(worst, rec["level_relation_rel"].get<double>());
            all = all && rec["converged"].get<bool>();
        }
        return Outcome{all && worst < 5e-2, "records=" + std::to_string(sweep.summary["records"].size()) +
                                                " max_rel=" + sci(worst) + " (tol 5e-2)"};
    });
    run("C6", "c_lambda positive, non-increasing", 0.0, [&] {
        const auto& recs = sweep.summary["records"];
        if (recs.empty()) return Outcome{false, "no continuation records"};
        double cmin = recs[0]["c_lambda"].get<double>(), worst_rise = -1e300;
        for (std::size_t i = 0; i < recs.size(); ++i) {
            cmin = std::min(cmin, recs[i]["c_lambda"].get<double>());
            if (i) worst_rise = std::max(worst_rise, recs[i]["c_lambda"].get<double>() - recs[i - 1]["c_lambda"].get<double>());
        }
        return Outcome{cmin > 0.0 && worst_rise <= 1e-6,
                       "min_c=" + fmt("%.6f", cmin) + " max_step=" + sci(worst_rise) + " (slack 1e-6)"};
    });

    run("C7", "non-attainment shadow", 600.0, [&] {
        const ExperimentConfig cfg = config("noncrit.ini");
        const RunRecord r = cmd_noncrit(cfg, out.string());
        const auto& s = r.summary;
        const double b0 = s["b0"].get<double>(), ratio = s["b_est_over_b0"].get<double>();
        bool energy_down = true, theta_down = true, all_ok = true;
        double prev_e = 1e300, prev_d = 1e300, last_d = 1.0;
        for (const auto& t : s["theta_y"]) {
            all_ok = all_ok && t["ok"].get<bool>();
            if (!t["ok"].get<bool>()) continue;
            const double e = t["energy"].get<double>(), d = t["deviation"].get<double>();
            energy_down = energy_down && e < prev_e && e > b0 * (1.0 - 1e-3);
            theta_down = theta_down && d < prev_d;
            prev_e = e;
            prev_d = d;
            last_d = d;
        }
        const double min_res = s["min_residual"].get<double>();
        const bool ok = s["ground_state"]["converged"].get<bool>() && all_ok && ratio <= 1.05 && energy_down &&
                        theta_down && last_d < 0.05 && min_res >= 10.0 * cfg.solver.tol;
        return Outcome{ok, "b_est/b0=" + fmt("%.4f", ratio) + " energies_decreasing=" + (energy_down ? "yes" : "no") +
                               " |theta-1| monotone=" + (theta_down ? "yes" : "no") + " last=" + sci(last_d) +
                               " min_residual=" + sci(min_res) + " (need >= " + sci(10.0 * cfg.solver.tol) + ")"};
    });

    run("C8", "decay exponents", 120.0, [&] {
        const RunRecord sol = cmd_solve(config("decay.ini"), out.string());
        const RunRecord ker = cmd_kernel(config("kernel.ini"), out.string());
        const double e = sol.summary["decay"]["exponent"].get<double>();
        const double ex = sol.summary["decay"]["expected"].get<double>();
        const double k = ker.summary["decay"]["tail_exponent"].get<double>();
        const bool ok = sol.success && std::abs(e / ex - 1.0) <= 0.15 && std::abs(k / -2.0 - 1.0) <= 0.10;
        return Outcome{ok, "solution=" + fmt("%.4f", e) + " vs " + fmt("%.1f", ex) + " (+-15%) kernel=" + fmt("%.4f", k) +
                               " vs -2 (+-10%)"};
    });

    run("C9", "resolvent identity", 10.0, [] {
        std::mt19937_64 rng(20240601);
        std::normal_distribution<double> n(0.0, 1.0);
        const BoxGrid g(2, 8.0, 64);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            RealField u(g);
            for (double& v : u.values) v = n(rng);
            const RealField Ku = convolve_kernel(u, 0.6);
            const RealField back = frac_laplacian(Ku, 0.6) + Ku;
            worst = std::max(worst, sup_norm(back - u) / sup_norm(u));
        }
        return Outcome{worst < 1e-10, "max_rel=" + sci(worst) + " over 50 fields (tol 1e-10)"};
    });

    run("C10", "determinism of cmd_solve", 0.0, [&] {
        const RunRecord a = cmd_solve(canonical, out.string());
        const RunRecord b = cmd_solve(canonical, out.string());
        return Outcome{a.summary_hash() == b.summary_hash(), "hash=" + a.summary_hash().substr(0, 12) + " / " +
                                                                 b.summary_hash().substr(0, 12)};
    });

    std::printf("%d criterion line(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
