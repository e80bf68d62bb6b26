// End-to-end checks of the command-line tool: exit codes, file outputs,
// validation diagnostics, and byte-level determinism of reruns.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kBin = FRACFRONT_BIN;

struct Invocation {
    int exit_code = -1;
    std::string output;
};

Invocation run_cli(const std::string& args) {
    const std::string log = (fs::temp_directory_path() / "fracfront_cli_log.txt").string();
    const std::string cmd = kBin + " " + args + " > " + log + " 2>&1";
    const int rc = std::system(cmd.c_str());
    Invocation inv;
    inv.exit_code = WEXITSTATUS(rc);
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    inv.output = ss.str();
    return inv;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "fracfront_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("print-defaults exits zero and is valid JSON-ish") {
    const auto inv = run_cli("--print-defaults");
    CHECK(inv.exit_code == 0);
    CHECK(inv.output.find("\"kernel\"") != std::string::npos);
    CHECK(inv.output.find("\"subsolution\"") != std::string::npos);
}

TEST_CASE("missing subcommand or config file fail with exit 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("symbol").exit_code == 2);

    const auto dir = fresh_dir("bad_config");
    write_file(dir / "c.json", "{ not json");
    const auto inv = run_cli("symbol --config " + (dir / "c.json").string());
    CHECK(inv.exit_code == 2);
}

TEST_CASE("validation errors name the offending field") {
    const auto dir = fresh_dir("badfield");
    write_file(dir / "c.json", R"({"kernel": {"family": "fractional_pure", "s": 0.8}})");
    auto inv = run_cli("symbol --config " + (dir / "c.json").string());
    CHECK(inv.exit_code == 2);
    CHECK(inv.output.find("kernel") != std::string::npos);

    // missing section: the kernel block explicitly nulled out
    write_file(dir / "c2.json", R"({"kernel": null})");
    inv = run_cli("symbol --config " + (dir / "c2.json").string());
    CHECK(inv.exit_code == 2);
    CHECK(inv.output.find("kernel") != std::string::npos);

    // one-point frequency grid cannot support the fit
    write_file(dir / "c3.json", R"({"symbol": {"n_points": 1}})");
    inv = run_cli("symbol --config " + (dir / "c3.json").string());
    CHECK(inv.exit_code == 2);
    CHECK(inv.output.find("n_points") != std::string::npos);

    // unknown keys are rejected rather than ignored
    write_file(dir / "c4.json", R"({"kernle": {"s": 0.3}})");
    inv = run_cli("symbol --config " + (dir / "c4.json").string());
    CHECK(inv.exit_code == 2);
}

TEST_CASE("symbol command writes csv and report; reruns are byte-identical") {
    const auto dir = fresh_dir("symbol");
    write_file(dir / "c.json", R"({
        "kernel": {"family": "fractional_pure", "s": 0.25},
        "symbol": {"xi_min": 1e-3, "xi_max": 1.0, "n_points": 24},
        "output_dir": ")" + (dir / "out").string() + R"("
    })");
    const auto inv = run_cli("symbol --config " + (dir / "c.json").string());
    REQUIRE(inv.exit_code == 0);
    REQUIRE(fs::exists(dir / "out/symbol.csv"));
    REQUIRE(fs::exists(dir / "out/symbol_report.json"));

    const std::string csv1 = slurp(dir / "out/symbol.csv");
    const std::string rep1 = slurp(dir / "out/symbol_report.json");
    CHECK(csv1.rfind("xi,W\n", 0) == 0);
    CHECK(rep1.find("\"slope\"") != std::string::npos);

    REQUIRE(run_cli("symbol --config " + (dir / "c.json").string()).exit_code == 0);
    CHECK(slurp(dir / "out/symbol.csv") == csv1);
    CHECK(slurp(dir / "out/symbol_report.json") == rep1);
}

TEST_CASE("simulate writes trace, snapshots, and a fit report") {
    const auto dir = fresh_dir("simulate");
    write_file(dir / "c.json", R"({
        "kernel": {"family": "fractional_pure", "s": 0.25},
        "reaction": {"theta": 0.25, "amplitude": 1.0},
        "sim": {"x_left": -20.0, "x_right": 40.0, "dx": 0.5, "t_end": 4.0,
                "levels": [0.5], "snapshot_times": [2.0, 4.0], "regrid_margin": 8.0},
        "output_dir": ")" + (dir / "out").string() + R"("
    })");
    const auto inv = run_cli("simulate --config " + (dir / "c.json").string() + " --threads 2");
    REQUIRE(inv.exit_code == 0);
    CHECK(fs::exists(dir / "out/trace.csv"));
    CHECK(fs::exists(dir / "out/run_report.json"));
    CHECK(fs::exists(dir / "out/snapshots/u_t2.csv"));
    CHECK(fs::exists(dir / "out/snapshots/u_t4.csv"));
    const std::string trace = slurp(dir / "out/trace.csv");
    CHECK(trace.rfind("t,lambda,x_lambda\n", 0) == 0);
    const std::string rep = slurp(dir / "out/run_report.json");
    CHECK(rep.find("\"completed\": true") != std::string::npos);
}

TEST_CASE("greens writes tables and the flattening report") {
    const auto dir = fresh_dir("greens");
    write_file(dir / "c.json", R"({
        "kernel": {"family": "fractional_pure", "s": 0.5, "c": 0.3183098861837907},
        "greens": {"t": 1.0, "x_max": 40.0, "n_points": 40, "flat_lo": 10.0,
                   "flat_hi": 30.0, "n_heaviside": 8},
        "output_dir": ")" + (dir / "out").string() + R"("
    })");
    const auto inv = run_cli("greens --config " + (dir / "c.json").string());
    REQUIRE(inv.exit_code == 0);
    CHECK(fs::exists(dir / "out/greens.csv"));
    CHECK(fs::exists(dir / "out/heaviside.csv"));
    const std::string rep = slurp(dir / "out/flattening_report.json");
    CHECK(rep.find("\"flattening_pass\": true") != std::string::npos);
    CHECK(rep.find("cauchy_crosscheck_max_rel_err") != std::string::npos);
}

TEST_CASE("certify emits the certificate and distinct not-found exit code") {
    const auto dir = fresh_dir("certify");
    write_file(dir / "c.json", R"({
        "kernel": {"family": "fractional_pure", "s": 0.25},
        "reaction": {"theta": 0.25},
        "subsolution": {"epsilon": 0.5, "sigma": 0.05, "residuals_csv": true},
        "output_dir": ")" + (dir / "out").string() + R"("
    })");
    const auto inv = run_cli("certify --config " + (dir / "c.json").string() + " --threads 2");
    REQUIRE(inv.exit_code == 0);
    REQUIRE(fs::exists(dir / "out/certificate.json"));
    const std::string rep = slurp(dir / "out/certificate.json");
    CHECK(rep.find("\"pass\": true") != std::string::npos);
    CHECK(rep.find("\"t_star\"") != std::string::npos);
    const std::string res = slurp(dir / "out/residuals.csv");
    CHECK(res.rfind("t,x,zone,residual\n", 0) == 0);

    // reruns are byte-identical
    const std::string cert1 = slurp(dir / "out/certificate.json");
    REQUIRE(run_cli("certify --config " + (dir / "c.json").string() + " --threads 2")
                .exit_code == 0);
    CHECK(slurp(dir / "out/certificate.json") == cert1);

    // scan horizon too short for any onset: exit 4, not a generic failure
    write_file(dir / "c2.json", R"({
        "kernel": {"family": "fractional_pure", "s": 0.25},
        "reaction": {"theta": 0.25},
        "subsolution": {"epsilon": 0.5, "sigma": 0.05, "t_max": 1.0},
        "output_dir": ")" + (dir / "out2").string() + R"("
    })");
    CHECK(run_cli("certify --config " + (dir / "c2.json").string()).exit_code == 4);
}

TEST_CASE("tabulated kernel flows through the config layer") {
    const auto dir = fresh_dir("tabkernel");
    std::ostringstream csv;
    csv << "z,J\n";
    for (int i = 0; i <= 40; ++i) {
        const double z = 0.01 * std::pow(5000.0 / 0.01, i / 40.0);
        csv << z << ',' << std::pow(z, -1.5) << '\n';
    }
    write_file(dir / "k.csv", csv.str());
    write_file(dir / "c.json", R"({
        "kernel": {"family": "tabulated", "s": 0.25,
                   "table_path": ")" + (dir / "k.csv").string() + R"("},
        "symbol": {"xi_min": 1e-3, "xi_max": 0.3, "n_points": 16},
        "output_dir": ")" + (dir / "out").string() + R"("
    })");
    const auto inv = run_cli("symbol --config " + (dir / "c.json").string());
    REQUIRE(inv.exit_code == 0);
    const std::string rep = slurp(dir / "out/symbol_report.json");
    CHECK(rep.find("\"slope\"") != std::string::npos);
}

TEST_CASE("--output overrides the configured directory") {
    const auto dir = fresh_dir("outflag");
    write_file(dir / "c.json", R"({
        "kernel": {"family": "fractional_pure", "s": 0.25},
        "symbol": {"xi_min": 1e-3, "xi_max": 0.1, "n_points": 8},
        "output_dir": ")" + (dir / "ignored").string() + R"("
    })");
    const auto inv = run_cli("symbol --config " + (dir / "c.json").string() + " --output " +
                             (dir / "chosen").string());
    REQUIRE(inv.exit_code == 0);
    CHECK(fs::exists(dir / "chosen/symbol.csv"));
    CHECK_FALSE(fs::exists(dir / "ignored"));
}
