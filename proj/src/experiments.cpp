#include "fracground/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "fracground/energy.hpp"
#include "fracground/kernel.hpp"
#include "fracground/solver.hpp"

namespace fracground {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string RunRecord::summary_hash() const { return git_blob_hash(summary.dump()); }

json RunRecord::to_json() const {
    json j;
    j["command"] = command;
    j["config_hash"] = config_hash;
    j["summary_hash"] = summary_hash();
    j["timestamp"] = timestamp;
    j["success"] = success;
    j["config"] = config_echo;
    json outs = json::array();
    for (const auto& o : outputs) outs.push_back({{"name", o.name}, {"format", o.format}});
    j["outputs"] = outs;
    j["summary"] = summary;
    return j;
}

void write_csv(const std::string& path, const Table& t) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    for (std::size_t i = 0; i < t.header.size(); ++i) f << (i ? "," : "") << t.header[i];
    f << '\n';
    char buf[40];
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            f << (i ? "," : "") << buf;
        }
        f << '\n';
    }
}

Table read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    Table t;
    std::string line, item;
    if (!std::getline(f, line)) throw std::runtime_error("empty csv " + path);
    std::stringstream hs(line);
    while (std::getline(hs, item, ',')) t.header.push_back(item);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        while (std::getline(ss, item, ',')) row.push_back(std::stod(item));
        if (row.size() != t.header.size()) throw std::runtime_error("ragged csv row in " + path);
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table radial_profile_table(const RealField& u) {
    const BoxGrid& g = u.grid;
    const int M = g.points_per_axis;
    std::map<long, std::pair<double, int>> shells;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto j = g.unflatten(i);
        long r2 = 0;
        for (int a = 0; a < g.dim; ++a) r2 += long(j[a] - M / 2) * (j[a] - M / 2);
        auto& e = shells[r2];
        e.first += u[i];
        e.second += 1;
    }
    Table t{{"r", "u"}, {}};
    const double h = g.spacing();
    for (const auto& [r2, e] : shells) {
        const double r = std::sqrt(double(r2)) * h;
        if (r >= g.half_width) break;
        t.rows.push_back({r, e.first / e.second});
    }
    return t;
}

namespace {

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

RunRecord start_record(const std::string& command, const ExperimentConfig& cfg, const std::string& out_dir) {
    RunRecord r;
    r.command = command;
    r.config_echo = cfg.canonical();
    r.config_hash = git_blob_hash(r.config_echo);
    r.timestamp = utc_now();
    r.run_dir = (fs::path(out_dir) / (command + "-" + r.config_hash.substr(0, 12))).string();
    fs::create_directories(r.run_dir);
    return r;
}

void add_csv(RunRecord& r, const std::string& name, const Table& t) {
    write_csv((fs::path(r.run_dir) / name).string(), t);
    r.outputs.push_back({name, "csv"});
}

void add_plot_script(RunRecord& r, const std::string& body) {
    const std::string name = "plot.py";
    std::ofstream f(fs::path(r.run_dir) / name);
    f << "# Regenerates the figures of this run directory with matplotlib.\n"
         "import csv, sys\nimport matplotlib\nmatplotlib.use('Agg')\nimport matplotlib.pyplot as plt\n\n"
         "def load(name):\n    with open(name) as f:\n        rows = list(csv.reader(f))\n"
         "    head, data = rows[0], rows[1:]\n"
         "    return {h: [float(r[i]) for r in data] for i, h in enumerate(head)}\n\n"
      << body;
    r.outputs.push_back({name, "py"});
}

void finish(RunRecord& r) {
    r.outputs.push_back({"record.json", "json"});
    std::ofstream f(fs::path(r.run_dir) / "record.json");
    f << r.to_json().dump(2) << '\n';
}

json pohozaev_json(const PohozaevReport& p) {
    return {{"kinetic_term", p.kinetic_term}, {"potential_term", p.potential_term},
            {"virial_term", p.virial_term},   {"rhs", p.rhs},
            {"residual", p.residual},         {"residual_rel", p.residual_rel},
            {"free_residual", p.free_residual}, {"free_residual_rel", p.free_residual_rel}};
}

json result_json(const SolveResult& r) {
    return {{"status", to_string(r.status)},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"lambda", r.lambda},
            {"residual_norm", r.residual_norm},
            {"residual_untruncated", r.residual_untruncated},
            {"level", r.level},
            {"I", r.energy.I},
            {"kinetic", r.energy.kinetic},
            {"potential", r.energy.potential},
            {"virial", r.energy.virial},
            {"G", r.energy.G_total},
            {"sup_norm", sup_norm(r.u)},
            {"tail_mass", r.tail_mass},
            {"level_relation_residual", r.diagnostics.level_relation_residual},
            {"nehari_like", r.diagnostics.nehari_like},
            {"pohozaev", pohozaev_json(r.pohozaev)}};
}

SolveResult run_solver(const ExperimentConfig& cfg, const ModelSpec& model, double lambda = 1.0) {
    const BoxGrid g = cfg.grid();
    const RealField seed = make_seed(cfg.solver.seed, g, model);
    if (cfg.method == "mountain_pass") return mountain_pass_solve(model, lambda, cfg.solver, seed, delta_bar(seed, model));
    return fixed_point_solve(model, lambda, cfg.solver, seed);
}

// ---- property suite ------------------------------------------------------------------

RealField random_field(const BoxGrid& g, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    RealField u(g);
    for (auto& v : u.values) v = nd(rng);
    return u;
}

RealField gaussian(const BoxGrid& g, double amp, double width) {
    return RealField::from_function(g, [&](const Point& x) {
        return amp * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (width * width));
    });
}

double rel_sup(const RealField& a, const RealField& b) {
    double d = 0.0, n = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
        n = std::max(n, std::abs(b[i]));
    }
    return n > 0.0 ? d / n : d;
}

PropertyResult below(std::string name, double value, double bound) { return {std::move(name), value < bound, value, bound}; }

}  // namespace

std::vector<PropertyResult> run_properties(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<PropertyResult> out;
    const ModelSpec canon;
    auto guarded = [&](const std::string& name, const std::function<PropertyResult()>& f) {
        try {
            out.push_back(f());
        } catch (const std::exception&) {
            out.push_back({name, false, std::nan(""), 0.0});
        }
    };

    guarded("frac_order_rejects_endpoints", [] {
        int rejected = 0;
        for (double s : {0.0, 1.0, -0.2, 1.2}) {
            try {
                FracOrder o(s);
            } catch (const DomainError&) {
                ++rejected;
            }
        }
        return PropertyResult{"frac_order_rejects_endpoints", rejected == 4, double(rejected), 4.0};
    });
    const BoxGrid g2(2, 5.0, 32);
    guarded("transform_roundtrip", [&] {
        const RealField u = random_field(g2, rng);
        return below("transform_roundtrip", rel_sup(inverse_transform(forward_transform(u)), u), 1e-12);
    });
    guarded("plane_wave_eigenrelation", [&] {
        const double s = 0.6;
        const double k0 = g2.frequency(3), k1 = g2.frequency(2);
        const RealField u = RealField::from_function(g2, [&](const Point& x) { return std::cos(k0 * x[0] + k1 * x[1]); });
        RealField expect = u;
        expect *= std::pow(k0 * k0 + k1 * k1, s);
        return below("plane_wave_eigenrelation", rel_sup(frac_laplacian(u, s), expect), 1e-10);
    });
    guarded("fractional_semigroup", [&] {
        const RealField u = random_field(g2, rng);
        return below("fractional_semigroup", rel_sup(frac_laplacian(frac_laplacian(u, 0.3), 0.4), frac_laplacian(u, 0.7)),
                     1e-10);
    });
    guarded("kinetic_nonnegative", [&] {
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) worst = std::min(worst, kinetic_energy(random_field(g2, rng), 0.4));
        return PropertyResult{"kinetic_nonnegative", worst >= 0.0, worst, 0.0};
    });
    guarded("normalization_constant_closed_form", [] {
        double worst = 0.0;
        for (int N = 1; N <= 3; ++N)
            for (double s : {0.3, 0.6}) {
                const double exact = s * std::pow(4.0, s) * boost::math::tgamma(N / 2.0 + s) /
                                     (std::pow(std::numbers::pi, N / 2.0) * boost::math::tgamma(1.0 - s));
                worst = std::max(worst, std::abs(normalization_constant(N, s) / exact - 1.0));
            }
        return below("normalization_constant_closed_form", worst, 1e-8);
    });
    guarded("gagliardo_spectral_equivalence", [] {
        const BoxGrid g(1, 10.0, 64);
        const RealField u = gaussian(g, 1.0, 1.5);
        const double s = 0.5;
        const double lhs = gagliardo_seminorm_sq(u, s);
        const double rhs = 2.0 / normalization_constant(1, s) * kinetic_energy(pad_field(u, 16), s);
        return below("gagliardo_spectral_equivalence", std::abs(lhs / rhs - 1.0), 2e-2);
    });
    guarded("pv_matches_spectral", [] {
        const BoxGrid g(1, 20.0, 256);
        const RealField u = gaussian(g, 1.0, 1.0);
        const RealField a = frac_laplacian(u, 0.5), b = frac_laplacian_pv(u, 0.5, 1e-3);
        double d = 0.0, n = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (std::abs(g.point(i)[0]) <= 10.0) {
                d = std::max(d, std::abs(a[i] - b[i]));
                n = std::max(n, std::abs(a[i]));
            }
        return below("pv_matches_spectral", d / n, 5e-3);
    });
    guarded("dilation_kinetic_scaling", [] {
        const BoxGrid g(2, 16.0, 128);
        const RealField u = gaussian(g, 1.0, 1.0);
        const double s = 0.6, th = 1.5;
        const double ratio = kinetic_energy(dilate(u, th, 1e-6), s) / kinetic_energy(u, s);
        return below("dilation_kinetic_scaling", std::abs(ratio / std::pow(th, 2.0 - 2.0 * s) - 1.0), 1e-3);
    });
    guarded("lattice_translation_inverse", [&] {
        const RealField u = random_field(g2, rng);
        const double h = g2.spacing();
        const RealField back = translate(translate(u, {3 * h, -5 * h, 0.0}), {-3 * h, 5 * h, 0.0});
        return below("lattice_translation_inverse", rel_sup(back, u), 1e-15);
    });
    guarded("spectral_translation_isometry", [&] {
        const BoxGrid g(2, 8.0, 64);
        const RealField u = gaussian(g, 1.0, 1.0);
        const double n0 = l2_norm(u), n1 = l2_norm(translate(u, {0.37, -0.81, 0.0}));
        return below("spectral_translation_isometry", std::abs(n1 / n0 - 1.0), 1e-12);
    });
    guarded("radial_symmetrize_idempotent", [&] {
        const RealField a = radial_symmetrize(random_field(g2, rng));
        return below("radial_symmetrize_idempotent", rel_sup(radial_symmetrize(a), a), 1e-14);
    });
    guarded("split_identity", [&] {
        const SplitPair sp = split(canon.nl);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double t = -10.0 + 20.0 * k / 999.0;
            worst = std::max(worst, std::abs(sp.g1(t) - sp.g2(t) - canon.nl.g(t)) / (1.0 + std::abs(canon.nl.g(t))));
        }
        return below("split_identity", worst, 1e-13);
    });
    guarded("g1_superlinear_at_zero", [&] {
        const SplitPair sp = split(canon.nl);
        return below("g1_superlinear_at_zero", sp.g1(1e-4) / 1e-4, 1e-6);
    });
    guarded("G2_quadratic_lower_bound", [&] {
        const SplitPair sp = split(canon.nl);
        double worst = 1.0;
        for (int k = 1; k <= 200; ++k) {
            const double t = 0.05 * k;
            worst = std::min(worst, sp.G2(t) - 0.5 * canon.nl.m * t * t + 1.0);
        }
        return PropertyResult{"G2_quadratic_lower_bound", worst >= 1.0 - 1e-14, worst - 1.0, 0.0};
    });
    guarded("epsilon_bound_finite", [&] {
        const double c = epsilon_bound_constant(split(canon.nl), 0.5, 2, canon.s);
        return PropertyResult{"epsilon_bound_finite", std::isfinite(c) && c > 0.0, c, 0.0};
    });
    guarded("canonical_growth_assumptions", [&] {
        const AssumptionReport rep = check_assumptions(canon.nl, canon.V, BoxGrid(2, 8.0, 32), canon.s, 1.8);
        const bool ok = rep.all({"g1", "g2", "g3", "g4"});
        return PropertyResult{"canonical_growth_assumptions", ok, ok ? 1.0 : 0.0, 1.0};
    });
    guarded("energy_of_zero", [&] {
        const EnergyBreakdown e = energy(RealField(BoxGrid(2, 8.0, 32)), canon);
        return below("energy_of_zero", std::abs(e.I) + std::abs(e.I_lambda), 1e-300);
    });
    guarded("project_to_P0_lands", [&] {
        const BoxGrid g(2, 8.0, 64);
        const Projection p = project_to_P0(gaussian(g, 3.0, 1.0), canon.free(), {0.01, 100.0, 1e-6});
        return below("project_to_P0_lands", pohozaev_report(p.field, canon.free()).free_residual_rel, 1e-3);
    });
    guarded("project_to_P_idempotent", [&] {
        const BoxGrid g(2, 8.0, 64);
        const Projection p = project_to_P(gaussian(g, 3.0, 1.0), canon, {0.01, 100.0, 1e-6});
        const Projection q = project_to_P(p.field, canon, {0.01, 100.0, 1e-6});
        return below("project_to_P_idempotent", std::abs(q.theta - 1.0), 1e-3);
    });
    guarded("mountain_path_geometry", [&] {
        const BoxGrid g(2, 8.0, 64);
        const RealField z = plateau_profile(canon.nl.zeta + 1.0, 1.0, g);
        const PathSpec path = mountain_path(z, 1.0, 16, canon, 1.0, delta_bar(z, canon), 1e-3);
        const bool ok = path.endpoint_energy() < 0.0 && path.energies[path.argmax()] > 0.0;
        return PropertyResult{"mountain_path_geometry", ok, path.endpoint_energy(), 0.0};
    });
    guarded("resolvent_identity", [&] {
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            const RealField u = random_field(g2, rng);
            const RealField v = convolve_kernel(u, 0.6);
            worst = std::max(worst, rel_sup(frac_laplacian(v, 0.6) + v, u));
        }
        return below("resolvent_identity", worst, 1e-10);
    });
    guarded("kernel_contraction", [&] {
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            const RealField u = random_field(g2, rng);
            worst = std::max(worst, l2_norm(convolve_kernel(u, 0.6)) / l2_norm(u));
        }
        return PropertyResult{"kernel_contraction", worst <= 1.0, worst, 1.0};
    });
    std::vector<double> radii;
    for (int k = 0; k <= 40; ++k) radii.push_back(0.1 * std::pow(200.0, k / 40.0));
    guarded("kernel_positive_monotone", [&] {
        const KernelProfile p = kernel_profile_quadrature(0.5, radii);
        const KernelDecayReport rep = kernel_decay_report(p, 10.0, 20.0);
        const bool ok = rep.positive && rep.non_increasing;
        return PropertyResult{"kernel_positive_monotone", ok, p.values.back(), 0.0};
    });
    guarded("kernel_methods_agree", [] {
        const BoxGrid g(1, 64.0, 4096);
        const KernelProfile grid = kernel_profile_grid(g, 0.5, 5.0);
        std::vector<double> rr;
        std::vector<double> kv;
        for (std::size_t i = 0; i < grid.radii.size(); ++i)
            if (grid.radii[i] >= 0.5) {
                rr.push_back(grid.radii[i]);
                kv.push_back(grid.values[i]);
            }
        const KernelProfile quad = kernel_profile_quadrature(0.5, rr);
        double worst = 0.0;
        for (std::size_t i = 0; i < rr.size(); ++i) worst = std::max(worst, std::abs(kv[i] / quad.values[i] - 1.0));
        return below("kernel_methods_agree", worst, 1e-2);
    });
    guarded("kernel_unit_mass", [] {
        const RealField K = kernel_field(BoxGrid(2, 16.0, 128), 0.6);
        return below("kernel_unit_mass", std::abs(integral(K) - 1.0), 2e-2);
    });
    guarded("kernel_shell_symmetry", [] {
        const KernelProfile p = kernel_profile_grid(BoxGrid(2, 16.0, 1024), 0.6, 4.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < p.radii.size(); ++i)
            if (p.radii[i] >= 0.5) worst = std::max(worst, p.shell_spread[i]);
        return below("kernel_shell_symmetry", worst, 1e-2);
    });
    guarded("pohozaev_commutator", [] {
        const BoxGrid g(1, 10.0, 128);
        return below("pohozaev_commutator", pohozaev_pointwise_residual(gaussian(g, 1.0, 1.0), 0.5, 64), 1e-5);
    });
    guarded("sobolev_quotient_homogeneous", [] {
        const BoxGrid g(2, 8.0, 64);
        const RealField u = gaussian(g, 1.0, 1.0);
        const double q1 = sobolev_quotient(u, 0.6), q2 = sobolev_quotient(7.5 * u, 0.6);
        return below("sobolev_quotient_homogeneous", std::abs(q2 / q1 - 1.0), 1e-12);
    });
    return out;
}

RunRecord cmd_verify(const ExperimentConfig& cfg, const std::string& out_dir, std::uint64_t seed) {
    RunRecord r = start_record("verify", cfg, out_dir);
    const auto props = run_properties(seed);
    json list = json::array();
    int passed = 0;
    for (const auto& p : props) {
        list.push_back({{"name", p.name}, {"passed", p.passed}, {"value", p.value}, {"threshold", p.threshold}});
        passed += p.passed;
    }
    r.success = passed == static_cast<int>(props.size());
    r.summary["seed"] = seed;
    r.summary["passed"] = passed;
    r.summary["failed"] = static_cast<int>(props.size()) - passed;
    r.summary["properties"] = list;
    std::ofstream(fs::path(r.run_dir) / "properties.json") << list.dump(2) << '\n';
    r.outputs.push_back({"properties.json", "json"});
    finish(r);
    return r;
}

RunRecord cmd_solve(const ExperimentConfig& cfg, const std::string& out_dir) {
    RunRecord r = start_record("solve", cfg, out_dir);
    const ModelSpec model = cfg.model();
    const SolveResult res = run_solver(cfg, model);
    r.success = res.converged;
    r.summary["method"] = cfg.method;
    r.summary["result"] = result_json(res);
    r.summary["energy_on_P_gap"] = std::abs(model.s * res.energy.kinetic / cfg.dim -
                                            res.energy.virial / (2.0 * cfg.dim) - res.energy.I);
    const double hi = cfg.fit_hi > 0.0 ? cfg.fit_hi : cfg.half_width / 3.0;
    try {
        const DecayFit fit = decay_fit(res.u, cfg.fit_lo, hi, model.s);
        r.summary["decay"] = {{"window", {cfg.fit_lo, hi}},
                              {"exponent", fit.exponent},
                              {"expected", -(cfg.dim + 2.0 * model.s)},
                              {"prefactor", fit.prefactor},
                              {"rms", fit.rms},
                              {"radial_bound", fit.radial_bound}};
        add_csv(r, "decay_shells.csv", {{"r", "shell_mean_abs_u"}, [&] {
                                           std::vector<std::vector<double>> rows;
                                           for (std::size_t i = 0; i < fit.radii.size(); ++i)
                                               rows.push_back({fit.radii[i], fit.shell_means[i]});
                                           return rows;
                                       }()});
    } catch (const std::exception& e) {
        r.summary["decay"] = {{"error", e.what()}};
    }
    add_csv(r, "profile.csv", radial_profile_table(res.u));
    add_plot_script(r,
                    "p = load('profile.csv')\nplt.plot(p['r'], p['u'])\nplt.xlabel('r'); plt.ylabel('u')\n"
                    "plt.savefig('profile.png', dpi=120)\n");
    finish(r);
    return r;
}

RunRecord cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
    RunRecord r = start_record("sweep", cfg, out_dir);
    const ModelSpec model = cfg.model();
    const BoxGrid g = cfg.grid();
    const RealField z = make_seed(cfg.solver.seed, g, model);
    const ContinuationTrace tr = lambda_continuation(model, cfg.solver, cfg.lambda_count, z);
    Table t{{"lambda", "c_lambda", "alpha", "level_relation_rel", "residual_norm", "pohozaev_rel"}, {}};
    json recs = json::array();
    for (const auto& rec : tr.records) {
        t.rows.push_back({rec.lambda, rec.c_lambda, rec.alpha, rec.level_relation_rel, rec.result.residual_norm,
                          rec.result.pohozaev.residual_rel});
        json jr = result_json(rec.result);
        jr["c_lambda"] = rec.c_lambda;
        jr["level_relation_rel"] = rec.level_relation_rel;
        recs.push_back(jr);
    }
    r.success = tr.complete && tr.positive && tr.non_increasing;
    r.summary["delta_bar"] = tr.delta_bar;
    r.summary["complete"] = tr.complete;
    r.summary["positive"] = tr.positive;
    r.summary["non_increasing"] = tr.non_increasing;
    r.summary["failure"] = tr.failure;
    r.summary["records"] = recs;
    add_csv(r, "continuation.csv", t);
    add_plot_script(r,
                    "t = load('continuation.csv')\nplt.plot(t['lambda'], t['c_lambda'], 'o-')\n"
                    "plt.xlabel('lambda'); plt.ylabel('c_lambda')\nplt.savefig('continuation.png', dpi=120)\n");
    finish(r);
    return r;
}

RunRecord cmd_noncrit(const ExperimentConfig& cfg, const std::string& out_dir) {
    RunRecord r = start_record("noncrit", cfg, out_dir);
    const ModelSpec model = cfg.model();
    const ModelSpec free = model.free();
    const BoxGrid g = cfg.grid();
    const SolveResult w = ground_state_free(free, cfg.solver, make_seed(cfg.solver.seed, g, free));
    const double b0 = b0_level(w, free);
    r.summary["ground_state"] = result_json(w);
    r.summary["b0"] = b0;

    // S only enters (V2); it is undefined for N <= 2s, where the check is skipped.
    const bool has_S = 2.0 * model.s < g.dim;
    const double S = has_S ? estimate_sobolev_constant(g.dim, model.s, BoxGrid(g.dim, 8.0, g.dim == 3 ? 32 : 128), {})
                           : 1.0;
    const AssumptionReport rep = check_assumptions(model.nl, model.V, g, model.s, S);
    r.summary["sobolev_estimate"] = has_S ? json(S) : json(nullptr);
    r.summary["V2"] = rep.satisfied("V2");
    r.summary["V5"] = rep.satisfied("V5");
    r.summary["V6"] = rep.satisfied("V6");

    const auto theta = theta_translation_experiment(w.u, model, cfg.radii, cfg.solver.guard);
    Table tt{{"radius", "theta", "deviation", "energy"}, {}};
    json jt = json::array();
    for (const auto& t : theta) {
        if (t.ok) tt.rows.push_back({t.radius, t.theta, t.deviation, t.energy});
        jt.push_back({{"radius", t.radius}, {"theta", t.theta}, {"deviation", t.deviation}, {"energy", t.energy},
                      {"ok", t.ok}, {"error", t.error}});
    }
    r.summary["theta_y"] = jt;
    add_csv(r, "theta_y.csv", tt);

    SolveConfig sc = cfg.solver;
    sc.symmetrize = false;
    const double d = cfg.noncrit_shift;
    const RealField start = translate(w.u, {d, 0.5 * d, 0.0});
    const MinimizeTrace tr = pohozaev_minimize(model, sc, cfg.noncrit_steps, start);
    Table mt{{"k", "I", "residual", "centroid_radius", "pohozaev_rel", "theta"}, {}};
    for (const auto& s : tr.steps) mt.rows.push_back({double(s.k), s.I, s.residual, s.centroid_radius, s.pohozaev_rel, s.theta});
    add_csv(r, "minimize.csv", mt);
    r.summary["b_est"] = tr.b_est;
    r.summary["b_est_over_b0"] = tr.b_est / b0;
    r.summary["min_residual"] = tr.min_residual;
    r.summary["drift_slope"] = tr.drift_slope;
    r.summary["max_pohozaev_rel"] =
        std::max_element(tr.steps.begin(), tr.steps.end(), [](auto& a, auto& b) { return a.pohozaev_rel < b.pohozaev_rel; })
            ->pohozaev_rel;
    r.success = w.converged && tr.b_est <= 1.05 * b0;
    add_plot_script(r,
                    "m = load('minimize.csv')\nfig, ax = plt.subplots(1, 2, figsize=(9, 3.5))\n"
                    "ax[0].plot(m['k'], m['I']); ax[0].set_xlabel('step'); ax[0].set_ylabel('I')\n"
                    "ax[1].semilogy(m['k'], m['residual']); ax[1].set_xlabel('step'); ax[1].set_ylabel('residual')\n"
                    "fig.tight_layout(); fig.savefig('minimize.png', dpi=120)\n");
    finish(r);
    return r;
}

RunRecord cmd_kernel(const ExperimentConfig& cfg, const std::string& out_dir) {
    RunRecord r = start_record("kernel", cfg, out_dir);
    const int N = cfg.kernel_dim;
    const double s = cfg.kernel_s;
    KernelProfile prof;
    if (N == 1) {
        std::vector<double> radii;
        const double rmax = std::max(64.0, 1.5 * cfg.kernel_fit_hi);
        for (int k = 0; k <= 120; ++k) radii.push_back(0.1 * std::pow(rmax / 0.1, k / 120.0));
        prof = kernel_profile_quadrature(s, radii);
    } else {
        const double L = std::max(2.0 * cfg.kernel_fit_hi, 16.0);
        const int M = N == 2 ? 1024 : 128;
        prof = kernel_profile_grid(BoxGrid(N, L, M), s, 0.5 * L);
        r.summary["grid"] = {{"half_width", L}, {"points", M}};
        json lq = json::array();
        const BoxGrid lg(N, L, M);
        for (double q : {1.5, 0.4}) {
            const LqStability st = kernel_lq_stability(lg, s, q, 0.25 * L);
            lq.push_back({{"q", q}, {"radius", st.radius}, {"value", st.value}, {"value_doubled", st.value_doubled},
                          {"relative_change", st.relative_change}, {"in_window", st.in_window}});
        }
        r.summary["lq_stability"] = lq;
    }
    Table t{{"r", "K", "method"}, {}};
    const double tag = prof.method == KernelMethod::Quadrature1D ? 0.0 : 1.0;
    for (std::size_t i = 0; i < prof.radii.size(); ++i) t.rows.push_back({prof.radii[i], prof.values[i], tag});
    add_csv(r, "kernel_profile.csv", t);
    r.summary["method"] = to_string(prof.method);
    r.summary["method_code"] = "0 = quadrature_1d, 1 = grid_fft";
    try {
        const KernelDecayReport rep = kernel_decay_report(prof, cfg.kernel_fit_lo, cfg.kernel_fit_hi);
        r.summary["decay"] = {{"far_sup", rep.far_sup},
                              {"near_sup", rep.near_sup},
                              {"gradient_sup", rep.gradient_sup},
                              {"tail_exponent", rep.tail_exponent},
                              {"expected_exponent", rep.expected_exponent},
                              {"tail_rms", rep.tail_rms},
                              {"fit_window", {rep.fit_lo, rep.fit_hi}},
                              {"positive", rep.positive},
                              {"non_increasing", rep.non_increasing}};
        r.success = rep.positive && std::abs(rep.tail_exponent / rep.expected_exponent - 1.0) < 0.1;
    } catch (const std::exception& e) {
        r.summary["decay"] = {{"error", e.what()}};
        r.success = false;
    }
    add_plot_script(r,
                    "k = load('kernel_profile.csv')\nplt.loglog(k['r'], k['K'])\nplt.xlabel('r'); plt.ylabel('K(r)')\n"
                    "plt.savefig('kernel_profile.png', dpi=120)\n");
    finish(r);
    return r;
}

}  // namespace fracground
