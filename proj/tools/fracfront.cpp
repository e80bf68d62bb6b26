#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "fracfront/config.hpp"
#include "fracfront/csv.hpp"
#include "fracfront/errors.hpp"
#include "fracfront/greens.hpp"
#include "fracfront/numerics.hpp"

namespace ff = fracfront;
namespace cfg = fracfront::config;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitNotFound = 4;

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void write_json(const std::string& path, const cfg::Json& j) {
    ff::atomic_write_file(path, j.dump(2) + "\n");
}

cfg::Json report_header(const cfg::Json& root) {
    cfg::Json j;
    j["version"] = cfg::kVersion;
    j["config"] = root;
    return j;
}

int cmd_symbol(const cfg::Json& root, const std::string& outdir) {
    const auto spec = cfg::make_kernel(root);
    const auto sec = cfg::make_symbol(root);

    const auto grid = ff::logspace(sec.xi_min, sec.xi_max, sec.n_points);
    const auto table = ff::symbol_table(spec, grid);

    ff::CsvWriter csv({"xi", "W"});
    for (std::size_t i = 0; i < table.xi_grid.size(); ++i)
        csv.row({table.xi_grid[i], table.W_values[i]});
    csv.write(join_path(outdir, "symbol.csv"));

    const auto fit = ff::fit_small_freq_exponent(spec, sec.fit_lo, sec.fit_hi);
    cfg::Json rep = report_header(root);
    rep["fit"] = {{"slope", fit.slope},
                  {"constant", fit.constant},
                  {"theoretical_slope", 2.0 * spec.s},
                  {"slope_deviation", fit.slope - 2.0 * spec.s}};
    rep["small_freq_constant"] = table.small_freq_constant;
    write_json(join_path(outdir, "symbol_report.json"), rep);
    return kExitOk;
}

int cmd_simulate(const cfg::Json& root, const std::string& outdir, unsigned threads) {
    auto sim = cfg::make_sim(root);
    sim.threads = threads;
    const auto result = ff::run(sim);

    ff::CsvWriter trace({"t", "lambda", "x_lambda"});
    for (const auto& row : result.trace.rows) trace.row({row.t, row.lambda, row.x});
    trace.write(join_path(outdir, "trace.csv"));

    auto requested = sim.snapshot_times;
    std::sort(requested.begin(), requested.end());
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
        const auto& snap = result.snapshots[k];
        const double label = k < requested.size() ? requested[k] : snap.time;
        ff::CsvWriter scsv({"x", "u"});
        for (std::size_t i = 0; i < snap.values.size(); ++i)
            scsv.row({snap.x_at(static_cast<std::ptrdiff_t>(i)), snap.values[i]});
        scsv.write(join_path(outdir, "snapshots/u_t" + ff::format_double(label) + ".csv"));
    }

    cfg::Json rep = report_header(root);
    rep["dt"] = result.dt_used;
    rep["stability_dt"] = result.stability_dt;
    rep["completed"] = result.completed;
    if (!result.completed) rep["stop_reason"] = result.stop_reason;
    rep["window_history"] = cfg::Json::array();
    for (const auto& [t, xr] : result.window_history)
        rep["window_history"].push_back({{"t", t}, {"x_right", xr}});

    const double theo = 1.0 / (2.0 * sim.kernel.s);
    rep["theoretical_exponent"] = theo;
    rep["fits"] = cfg::Json::array();
    for (double lam : sim.levels) {
        cfg::Json f;
        f["lambda"] = lam;
        try {
            const auto fit =
                ff::fit_spreading_exponent(result.trace, lam, sim.t_end / 10.0, sim.t_end);
            f["slope"] = fit.slope;
            f["intercept"] = fit.intercept;
            f["residual_rms"] = fit.residual_rms;
            f["n_samples"] = fit.n_samples;
            f["ratio_to_theoretical"] = fit.slope / theo;
        } catch (const ff::DomainError& e) {
            f["error"] = e.what();
        }
        rep["fits"].push_back(f);
    }
    write_json(join_path(outdir, "run_report.json"), rep);
    return result.completed ? kExitOk : kExitTolerance;
}

int cmd_greens(const cfg::Json& root, const std::string& outdir) {
    const auto spec = cfg::make_kernel(root);
    const auto sec = cfg::make_greens(root);
    ff::greens::Evaluator ev(spec);

    std::vector<double> grid{0.0};
    for (double x : ff::logspace(sec.x_max * 1e-4, sec.x_max, sec.n_points - 1))
        grid.push_back(x);
    const auto table = ff::greens::greens_table(ev, sec.t, grid, sec.flat_lo, sec.flat_hi);

    ff::CsvWriter gcsv({"x", "G"});
    for (std::size_t i = 0; i < table.x_grid.size(); ++i)
        gcsv.row({table.x_grid[i], table.G_values[i]});
    gcsv.write(join_path(outdir, "greens.csv"));

    ff::CsvWriter vcsv({"x", "v"});
    std::vector<double> vxs{0.0};
    for (double x : ff::logspace(sec.x_max * 1e-3, sec.x_max, sec.n_heaviside)) {
        vxs.push_back(x);
        vxs.push_back(-x);
    }
    std::sort(vxs.begin(), vxs.end());
    const auto vvals = ev.heaviside_table(sec.t, vxs);
    for (std::size_t i = 0; i < vxs.size(); ++i) vcsv.row({vxs[i], vvals[i].value});
    vcsv.write(join_path(outdir, "heaviside.csv"));

    cfg::Json rep = report_header(root);
    rep["t"] = sec.t;
    rep["C0_estimate"] = table.C0_estimate;
    rep["flattening_pass"] = table.flattening_pass;
    rep["tail_constant_estimate"] = table.tail_constant_estimate;
    rep["mass"] = table.mass;
    rep["atom_mass"] = ev.atom_mass(sec.t);
    rep["flattening_worst_error"] = table.flattening_worst_error;
    rep["max_G_error"] = *std::max_element(table.G_errors.begin(), table.G_errors.end());
    if (spec.family == ff::KernelFamily::FractionalPure && std::abs(spec.s - 0.5) < 1e-12) {
        // closed-form cross-check available in the Cauchy case
        double worst = 0.0;
        const double scale = ff::symbol(spec, 1.0).value;  // -c * pi
        for (double x : {0.0, 1.0, 5.0, 20.0}) {
            const double exact =
                (-scale * sec.t) / (M_PI * (scale * scale * sec.t * sec.t + x * x));
            const double got = ev.density(sec.t, x).value;
            worst = std::max(worst, std::abs(got - exact) / exact);
        }
        rep["cauchy_crosscheck_max_rel_err"] = worst;
    }
    write_json(join_path(outdir, "flattening_report.json"), rep);
    return kExitOk;
}

cfg::Json params_json(const ff::subsol::SubsolutionParams& p) {
    return {{"s", p.s},           {"theta", p.theta}, {"epsilon", p.epsilon},
            {"gamma", p.gamma},   {"sigma", p.sigma}, {"kappa", p.kappa},
            {"eta", p.eta},       {"t_star", p.t_star}, {"kernel_J0", p.kernel_J0},
            {"kernel_J1", p.kernel_J1}, {"kernel_R0", p.kernel_R0}};
}

cfg::Json sample_json(const ff::subsol::ZoneSample& s) {
    return {{"t", s.t},
            {"x", s.x},
            {"zone", ff::subsol::zone_name(s.zone)},
            {"residual", s.residual},
            {"scale", s.scale},
            {"D", s.D},
            {"ubar_t", s.ubar_t},
            {"f", s.f_val},
            {"quad_error", s.quad_error}};
}

int cmd_certify(const cfg::Json& root, const std::string& outdir, unsigned threads) {
    const auto spec = cfg::make_kernel(root);
    const auto f = cfg::make_reaction(root);
    const auto sec = cfg::make_subsolution(root);

    double kappa = sec.kappa;
    if (kappa == 0.0)
        kappa = ff::subsol::kappa_star(spec.J0, spec.s, sec.epsilon) * sec.kappa_star_fraction;
    auto params = ff::subsol::make_params(spec.s, f.theta, sec.epsilon, sec.sigma, kappa, spec);

    const auto scan =
        ff::subsol::find_t_star(params, spec, f, sec.t_max, sec.grid, sec.tol, threads);

    cfg::Json rep = report_header(root);
    rep["kappa"] = kappa;
    rep["t_star_found"] = scan.found;

    const auto constants = ff::subsol::compute_proof_constants(params, f);
    rep["proof_constants"] = {{"B_split", constants.B_split},
                              {"C0_split", constants.C0_split},
                              {"nu0", constants.nu0},
                              {"nu0_uses_f_at_epsilon", constants.nu0_uses_f_at_epsilon},
                              {"C1", constants.C1},
                              {"C2", constants.C2},
                              {"frakC2", constants.frakC2},
                              {"C3", constants.C3},
                              {"m0", constants.m0},
                              {"gamma0", constants.gamma0},
                              {"kappa_star", constants.kappa_star},
                              {"delta", constants.delta}};

    if (!scan.found) {
        rep["diagnostic"] = scan.diagnostic;
        rep["params"] = params_json(params);
        write_json(join_path(outdir, "certificate.json"), rep);
        std::cerr << "certify: no t* up to t_max (" << scan.diagnostic << ")\n";
        return kExitNotFound;
    }

    params.t_star = scan.t_star;
    const auto t_grid =
        ff::logspace(scan.t_star, scan.t_star * sec.t_grid_factor, sec.n_t);
    const auto cert = ff::subsol::certify(params, spec, f, t_grid, sec.grid, sec.tol, threads);

    rep["params"] = params_json(params);
    rep["t_star"] = scan.t_star;
    rep["pass"] = cert.pass;
    rep["n_samples"] = cert.samples.size();
    rep["n_failures"] = cert.n_failures;
    rep["worst"] = {{"blue", sample_json(cert.worst_blue)},
                    {"orange", sample_json(cert.worst_orange)},
                    {"green", sample_json(cert.worst_green)}};

    if (sec.onset_times) {
        auto pc = constants;
        ff::subsol::compute_onset_times(pc, params, spec, f, sec.t_max, sec.grid, sec.tol);
        rep["onset_times"] = {{"t0", pc.t0}, {"t1", pc.t1}, {"t2", pc.t2},
                              {"t3", pc.t3}, {"t4", pc.t4}, {"t5", pc.t5}};
    }
    write_json(join_path(outdir, "certificate.json"), rep);

    if (sec.residuals_csv) {
        std::string csv = "t,x,zone,residual\n";
        for (const auto& s : cert.samples) {
            csv += ff::format_double(s.t) + ',' + ff::format_double(s.x) + ',' +
                   ff::subsol::zone_name(s.zone) + ',' + ff::format_double(s.residual) + '\n';
        }
        ff::atomic_write_file(join_path(outdir, "residuals.csv"), csv);
    }
    return cert.pass ? kExitOk : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracfront: nonlocal reaction-diffusion fronts with heavy-tailed kernels"};
    app.require_subcommand(0, 1);

    std::string config_path, output_override;
    int threads_flag = 0;
    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults,
                 "print the full default configuration and exit");
    app.add_option("--config", config_path, "path to the JSON run configuration");
    app.add_option("--output", output_override, "output directory (overrides output_dir)");
    app.add_option("--threads", threads_flag, "worker threads (0 = hardware)")
        ->envname("FRACFRONT_THREADS");

    auto* sub_symbol = app.add_subcommand("symbol", "tabulate the Fourier symbol W(xi)");
    auto* sub_sim = app.add_subcommand("simulate", "run the front simulation");
    auto* sub_greens = app.add_subcommand("greens", "fundamental solution and flattening");
    auto* sub_cert = app.add_subcommand("certify", "construct and check the sub-solution");
    for (auto* sub : {sub_symbol, sub_sim, sub_greens, sub_cert}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    if (print_defaults) {
        std::cout << cfg::defaults().dump(2) << "\n";
        return kExitOk;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << "error: no subcommand (symbol | simulate | greens | certify)\n";
        return kExitValidation;
    }
    if (config_path.empty()) {
        std::cerr << "error: --config is required\n";
        return kExitValidation;
    }

    try {
        const cfg::Json root = cfg::load(config_path);
        std::string outdir = output_override.empty()
                                 ? root.at("output_dir").get<std::string>()
                                 : output_override;
        fs::create_directories(outdir);
        const unsigned threads = cfg::resolve_threads(root, threads_flag);

        if (sub_symbol->parsed()) return cmd_symbol(root, outdir);
        if (sub_sim->parsed()) return cmd_simulate(root, outdir, threads);
        if (sub_greens->parsed()) return cmd_greens(root, outdir);
        if (sub_cert->parsed()) return cmd_certify(root, outdir, threads);
        return kExitValidation;
    } catch (const ff::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ff::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ff::InvariantError& e) {
        std::cerr << "invariant error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ff::NotFoundError& e) {
        std::cerr << "not found: " << e.what() << "\n";
        return kExitNotFound;
    } catch (const ff::ToleranceError& e) {
        std::cerr << "numerical tolerance failure: " << e.what()
                  << " (estimate " << e.estimate << ", bound " << e.error_bound << ")\n";
        return kExitTolerance;
    } catch (const ff::StabilityError& e) {
        std::cerr << "stability failure: " << e.what() << "\n";
        return kExitTolerance;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
