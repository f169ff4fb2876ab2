#include "fracground/config.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fracground {

namespace {

namespace pt = boost::property_tree;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError("config: " + key + " expects an integer");
    return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config: " + key + " expects a boolean");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    return out;
}

std::string seed_name(SeedKind k) {
    switch (k) {
        case SeedKind::Plateau: return "plateau";
        case SeedKind::Gaussian: return "gaussian";
        case SeedKind::File: return "file";
    }
    return "plateau";
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"model.dim", [](auto& c, auto& v) { c.dim = to_int("model.dim", v); }},
        {"model.s", [](auto& c, auto& v) { c.s = to_double("model.s", v); }},
        {"model.m", [](auto& c, auto& v) { c.m = to_double("model.m", v); }},
        {"model.a", [](auto& c, auto& v) { c.a = to_double("model.a", v); }},
        {"model.p", [](auto& c, auto& v) { c.p = to_double("model.p", v); }},
        {"model.potential", [](auto& c, auto& v) { c.potential = v; }},
        {"model.v0", [](auto& c, auto& v) { c.V0 = to_double("model.v0", v); }},
        {"model.beta", [](auto& c, auto& v) { c.beta = to_double("model.beta", v); }},
        {"model.cap", [](auto& c, auto& v) { c.cap = to_double("model.cap", v); }},
        {"grid.half_width", [](auto& c, auto& v) { c.half_width = to_double("grid.half_width", v); }},
        {"grid.points", [](auto& c, auto& v) { c.points = to_int("grid.points", v); }},
        {"solver.method", [](auto& c, auto& v) { c.method = v; }},
        {"solver.max_iters", [](auto& c, auto& v) { c.solver.max_iters = to_int("solver.max_iters", v); }},
        {"solver.tol", [](auto& c, auto& v) { c.solver.tol = to_double("solver.tol", v); }},
        {"solver.damping", [](auto& c, auto& v) { c.solver.damping = to_double("solver.damping", v); }},
        {"solver.stabilization",
         [](auto& c, auto& v) { c.solver.stabilization = to_bool("solver.stabilization", v); }},
        {"solver.symmetrize", [](auto& c, auto& v) { c.solver.symmetrize = to_bool("solver.symmetrize", v); }},
        {"solver.seed", [](auto& c, auto& v) { c.seed_kind = v; }},
        {"solver.seed_height", [](auto& c, auto& v) { c.solver.seed.height = to_double("solver.seed_height", v); }},
        {"solver.seed_radius", [](auto& c, auto& v) { c.solver.seed.radius = to_double("solver.seed_radius", v); }},
        {"solver.seed_file", [](auto& c, auto& v) { c.solver.seed.path = v; }},
        {"solver.path_segments",
         [](auto& c, auto& v) { c.solver.path_segments = to_int("solver.path_segments", v); }},
        {"solver.step", [](auto& c, auto& v) { c.solver.step = to_double("solver.step", v); }},
        {"solver.guard", [](auto& c, auto& v) { c.solver.guard = to_double("solver.guard", v); }},
        {"solver.lambda_count", [](auto& c, auto& v) { c.lambda_count = to_int("solver.lambda_count", v); }},
        {"experiment.name", [](auto& c, auto& v) { c.experiment = v; }},
        {"experiment.radii", [](auto& c, auto& v) { c.radii = to_list("experiment.radii", v); }},
        {"experiment.fit_lo", [](auto& c, auto& v) { c.fit_lo = to_double("experiment.fit_lo", v); }},
        {"experiment.fit_hi", [](auto& c, auto& v) { c.fit_hi = to_double("experiment.fit_hi", v); }},
        {"experiment.noncrit_steps",
         [](auto& c, auto& v) { c.noncrit_steps = to_int("experiment.noncrit_steps", v); }},
        {"experiment.noncrit_shift",
         [](auto& c, auto& v) { c.noncrit_shift = to_double("experiment.noncrit_shift", v); }},
        {"experiment.kernel_dim", [](auto& c, auto& v) { c.kernel_dim = to_int("experiment.kernel_dim", v); }},
        {"experiment.kernel_s", [](auto& c, auto& v) { c.kernel_s = to_double("experiment.kernel_s", v); }},
        {"experiment.kernel_fit_lo",
         [](auto& c, auto& v) { c.kernel_fit_lo = to_double("experiment.kernel_fit_lo", v); }},
        {"experiment.kernel_fit_hi",
         [](auto& c, auto& v) { c.kernel_fit_hi = to_double("experiment.kernel_fit_hi", v); }},
    };
    return table;
}

}  // namespace

ModelSpec ExperimentConfig::model() const {
    ModelSpec spec;
    spec.s = s;
    spec.nl = Nonlinearity::power(m, a, p, cap);
    if (potential == "inverse_power") spec.V = Potential::inverse_power(V0, beta);
    else if (potential == "gaussian") spec.V = Potential::gaussian(V0, beta);
    else spec.V = Potential::zero();
    return spec;
}

BoxGrid ExperimentConfig::grid() const { return BoxGrid(dim, half_width, points); }

std::string ExperimentConfig::canonical() const {
    std::map<std::string, std::string> kv;
    kv["model.dim"] = std::to_string(dim);
    kv["model.s"] = fmt(s);
    kv["model.m"] = fmt(m);
    kv["model.a"] = fmt(a);
    kv["model.p"] = fmt(p);
    kv["model.potential"] = potential;
    kv["model.v0"] = fmt(V0);
    kv["model.beta"] = fmt(beta);
    kv["model.cap"] = cap ? fmt(*cap) : "none";
    kv["grid.half_width"] = fmt(half_width);
    kv["grid.points"] = std::to_string(points);
    kv["solver.method"] = method;
    kv["solver.max_iters"] = std::to_string(solver.max_iters);
    kv["solver.tol"] = fmt(solver.tol);
    kv["solver.damping"] = fmt(solver.damping);
    kv["solver.stabilization"] = solver.stabilization ? "true" : "false";
    kv["solver.symmetrize"] = solver.symmetrize ? "true" : "false";
    kv["solver.seed"] = seed_name(solver.seed.kind);
    kv["solver.seed_height"] = fmt(solver.seed.height);
    kv["solver.seed_radius"] = fmt(solver.seed.radius);
    kv["solver.seed_file"] = solver.seed.path;
    kv["solver.path_segments"] = std::to_string(solver.path_segments);
    kv["solver.step"] = fmt(solver.step);
    kv["solver.guard"] = fmt(solver.guard);
    kv["solver.lambda_count"] = std::to_string(lambda_count);
    kv["experiment.name"] = experiment;
    std::string r;
    for (std::size_t i = 0; i < radii.size(); ++i) r += (i ? "," : "") + fmt(radii[i]);
    kv["experiment.radii"] = r;
    kv["experiment.fit_lo"] = fmt(fit_lo);
    kv["experiment.fit_hi"] = fmt(fit_hi);
    kv["experiment.noncrit_steps"] = std::to_string(noncrit_steps);
    kv["experiment.noncrit_shift"] = fmt(noncrit_shift);
    kv["experiment.kernel_dim"] = std::to_string(kernel_dim);
    kv["experiment.kernel_s"] = fmt(kernel_s);
    kv["experiment.kernel_fit_lo"] = fmt(kernel_fit_lo);
    kv["experiment.kernel_fit_hi"] = fmt(kernel_fit_hi);
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

ExperimentConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::stringstream in;
    // The INI reader only knows ';' comments; accept '#' as well.
    std::stringstream raw(text);
    std::string line;
    while (std::getline(raw, line)) {
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string::npos && line[first] == '#') continue;
        in << line << '\n';
    }
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg;
    const auto& table = setters();
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("config: key '" + section + "' must appear inside a [section]");
        for (const auto& [key, val] : body) {
            const std::string full = section + "." + key;
            const auto it = table.find(full);
            if (it == table.end()) throw ConfigError("config: unknown key '" + full + "'");
            it->second(cfg, val.data());
        }
    }
    if (cfg.seed_kind == "plateau") cfg.solver.seed.kind = SeedKind::Plateau;
    else if (cfg.seed_kind == "gaussian") cfg.solver.seed.kind = SeedKind::Gaussian;
    else if (cfg.seed_kind == "file") cfg.solver.seed.kind = SeedKind::File;
    else throw ConfigError("config: solver.seed must be plateau, gaussian or file");
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

void validate(const ExperimentConfig& c) {
    if (c.dim < 1 || c.dim > 3) throw ConfigError("config: model.dim must be 1, 2 or 3");
    if (!(c.s > 0.0 && c.s < 1.0)) throw ConfigError("config: model.s must lie in (0, 1) (fractional order)");
    if (c.experiment == "existence" && !(c.s > 0.5))
        throw ConfigError("config: experiment 'existence' requires s > 1/2");
    if (c.experiment != "existence" && c.experiment != "existence2")
        throw ConfigError("config: experiment.name must be existence or existence2");
    if (!(c.m > 0.0 && c.a > 0.0)) throw ConfigError("config: model.m and model.a must be positive");
    if (!(c.p > 1.0)) throw ConfigError("config: model.p must exceed 1");
    const double crit = critical_exponent(c.dim, c.s);
    if (!(c.p + 1.0 < crit))
        throw ConfigError("config: subcriticality check failed: p + 1 = " + fmt(c.p + 1.0) +
                          " must be below 2* = " + fmt(crit));
    if (c.potential != "inverse_power" && c.potential != "gaussian" && c.potential != "zero")
        throw ConfigError("config: model.potential must be inverse_power, gaussian or zero");
    if (!(c.V0 >= 0.0 && c.beta > 0.0)) throw ConfigError("config: need v0 >= 0 and beta > 0");
    if (!(c.half_width > 0.0)) throw ConfigError("config: grid.half_width must be positive");
    if (c.points < 8 || c.points % 2 != 0) throw ConfigError("config: grid.points must be even and >= 8");
    if (c.method != "fixed_point" && c.method != "mountain_pass")
        throw ConfigError("config: solver.method must be fixed_point or mountain_pass");
    if (!(c.solver.damping > 0.0 && c.solver.damping <= 1.0))
        throw ConfigError("config: solver.damping must lie in (0, 1]");
    if (!(c.solver.tol > 0.0)) throw ConfigError("config: solver.tol must be positive");
    if (c.solver.max_iters < 1) throw ConfigError("config: solver.max_iters must be positive");
    if (c.solver.path_segments < 8) throw ConfigError("config: solver.path_segments must be at least 8");
    if (c.lambda_count < 3) throw ConfigError("config: solver.lambda_count must be at least 3");
    if (c.cap && !(*c.cap > 0.0)) throw ConfigError("config: model.cap must be positive");
    for (double r : c.radii)
        if (!(r >= 0.0 && r < c.half_width)) throw ConfigError("config: experiment.radii must lie in [0, L)");
    if (c.kernel_dim < 1 || c.kernel_dim > 3) throw ConfigError("config: experiment.kernel_dim must be 1, 2 or 3");
    if (!(c.kernel_s > 0.0 && c.kernel_s < 1.0)) throw ConfigError("config: experiment.kernel_s must lie in (0, 1)");
    if (!(c.kernel_fit_hi > c.kernel_fit_lo && c.kernel_fit_lo > 0.0))
        throw ConfigError("config: kernel fit window must satisfy 0 < lo < hi");
    try {
        (void)c.model();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::string git_blob_hash(const std::string& content) {
    const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
    EVP_DigestUpdate(ctx, header.data(), header.size());
    EVP_DigestUpdate(ctx, content.data(), content.size());
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

}  // namespace fracground
