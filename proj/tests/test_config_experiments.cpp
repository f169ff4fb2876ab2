#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "fracground/config.hpp"
#include "fracground/experiments.hpp"

using namespace fracground;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fracground_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p.string();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FRACGROUND_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kSmall1D =
    "[model]\ndim = 1\n[grid]\nhalf_width = 32\npoints = 1024\n[solver]\ntol = 1e-10\n"
    "[experiment]\nfit_lo = 4\nfit_hi = 12\n";

}  // namespace

TEST_CASE("git blob hash matches git hash-object") {
    CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
    CHECK(git_blob_hash("model.s = 0.6") == "b4adffb01e885cabc3ddcbae258bffe083de8e58");
}

TEST_CASE("defaults describe the canonical model") {
    const ExperimentConfig c = parse_config("");
    CHECK_NOTHROW(validate(c));
    const ModelSpec m = c.model();
    CHECK(m.s == 0.6);
    CHECK(m.nl.p == 3.0);
    CHECK(m.V.family == PotentialFamily::InversePower);
    CHECK(m.V.V0 == 0.5);
    CHECK(c.grid() == BoxGrid(2, 16.0, 256));
}

TEST_CASE("parsing sections, comments and lists") {
    const ExperimentConfig c = parse_config(
        "# comment line\n[model]\ns = 0.7\npotential = gaussian\nv0 = 0.25\n\n[grid]\npoints = 128\n"
        "[solver]\nmethod = mountain_pass\nsymmetrize = false\n[experiment]\nradii = 1, 3,5\n");
    CHECK(c.s == 0.7);
    CHECK(c.potential == "gaussian");
    CHECK(c.V0 == 0.25);
    CHECK(c.points == 128);
    CHECK(c.method == "mountain_pass");
    CHECK_FALSE(c.solver.symmetrize);
    CHECK(c.radii == std::vector<double>{1.0, 3.0, 5.0});
    CHECK(c.model().V.family == PotentialFamily::Gaussian);
}

TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(parse_config("[model]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[model]\ns = abc\n"), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("[model]\ns = 1.2\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("[model]\ns = 0.4\n")), ConfigError);
    CHECK_NOTHROW(validate(parse_config("[model]\ns = 0.4\np = 2\n[experiment]\nname = existence2\n")));
    CHECK_THROWS_AS(validate(parse_config("[grid]\npoints = 255\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("[solver]\ndamping = 0\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("[experiment]\nradii = 2, 20\n")), ConfigError);
    try {
        validate(parse_config("[model]\np = 5\n"));
        FAIL("p = 5 is supercritical for N = 2, s = 0.6");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("subcriticality check failed") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("canonical form and config hash") {
    const ExperimentConfig a = parse_config("[model]\ns = 0.7\n[grid]\npoints = 128\n");
    const ExperimentConfig b = parse_config("[grid]\npoints = 128\n[model]\ns = 0.70\n");
    CHECK(a.canonical() == b.canonical());
    CHECK(git_blob_hash(a.canonical()) == git_blob_hash(b.canonical()));
    CHECK(a.canonical() != parse_config("").canonical());
    CHECK(a.canonical().find("model.s = 0.69999999999999996") != std::string::npos);
    std::istringstream lines(a.canonical());
    std::string prev, line;
    while (std::getline(lines, line)) {
        CHECK(prev < line);
        prev = line;
    }
}

TEST_CASE("CSV round trip is exact") {
    const fs::path dir = scratch_dir("csv");
    Table t{{"x", "y"}, {{0.1, 1.0 / 3.0}, {-2.5e-300, 6.02214076e23}, {1e-17, -0.0}}};
    write_csv((dir / "t.csv").string(), t);
    const Table back = read_csv((dir / "t.csv").string());
    CHECK(back.header == t.header);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(back.rows[i] == t.rows[i]);
    fs::remove_all(dir);
}

TEST_CASE("solve runs are deterministic and write their artifacts") {
    const fs::path dir = scratch_dir("solve");
    const ExperimentConfig cfg = parse_config(kSmall1D);
    validate(cfg);
    const RunRecord a = cmd_solve(cfg, dir.string());
    const RunRecord b = cmd_solve(cfg, dir.string());
    CHECK(a.success);
    CHECK(a.summary_hash() == b.summary_hash());
    CHECK(a.config_hash == git_blob_hash(cfg.canonical()));
    CHECK(fs::path(a.run_dir).filename() == "solve-" + a.config_hash.substr(0, 12));
    for (const char* f : {"record.json", "profile.csv", "plot.py", "decay_shells.csv"}) CHECK(fs::exists(fs::path(a.run_dir) / f));
    const Table prof = read_csv((fs::path(a.run_dir) / "profile.csv").string());
    CHECK(prof.header == std::vector<std::string>{"r", "u"});
    CHECK(prof.rows.size() > 100);
    RunRecord c = a;
    c.timestamp = "1970-01-01T00:00:00Z";
    CHECK(c.summary_hash() == a.summary_hash());
    CHECK(a.to_json()["summary_hash"] == a.summary_hash());
    fs::remove_all(dir);
}

TEST_CASE("kernel command in one dimension") {
    const fs::path dir = scratch_dir("kernel");
    const RunRecord r = cmd_kernel(parse_config(""), dir.string());
    CHECK(r.success);
    CHECK(r.summary["method"] == "quadrature_1d");
    const double e = r.summary["decay"]["tail_exponent"];
    CHECK(e == doctest::Approx(-2.0).epsilon(0.1));
    CHECK(fs::exists(fs::path(r.run_dir) / "kernel_profile.csv"));
    fs::remove_all(dir);
}

TEST_CASE("property suite") {
    for (const PropertyResult& p : run_properties(20240601)) {
        CAPTURE(p.name);
        CAPTURE(p.value);
        CHECK(p.passed);
    }
}

TEST_CASE("command-line exit codes") {
    const fs::path dir = scratch_dir("cli");
    const std::string out = " --out " + dir.string();
    const std::string good = write_file(dir / "good.ini", kSmall1D);
    const std::string bad_s = write_file(dir / "bad_s.ini", "[model]\ns = 1.2\n");
    const std::string bad_p = write_file(dir / "bad_p.ini", "[model]\np = 5\n");
    const std::string bad_key = write_file(dir / "bad_key.ini", "[grid]\nwidth = 3\n");
    CHECK(run_cli("solve --config " + good + out) == 0);
    CHECK(run_cli("solve --config " + bad_s + out) == 2);
    CHECK(run_cli("solve --config " + bad_p + out) == 2);
    CHECK(run_cli("solve --config " + bad_key + out) == 2);
    CHECK(run_cli("solve --config /nonexistent.ini" + out) == 2);
    CHECK(run_cli("frobnicate" + out) == 2);
    CHECK(run_cli("--help") == 0);
    const std::string starved =
        write_file(dir / "starved.ini", "[model]\ndim = 1\n[grid]\nhalf_width = 32\npoints = 1024\n[solver]\nmax_iters = 2\n");
    CHECK(run_cli("solve --config " + starved + out) == 1);
    fs::remove_all(dir);
}
