#include "fracfront/config.hpp"

#include <fstream>

#include "fracfront/errors.hpp"
#include "fracfront/numerics.hpp"

namespace fracfront::config {

const char* kVersion = "0.1.0";

namespace {

void deep_merge(Json& base, const Json& over, const std::string& path) {
    for (auto it = over.begin(); it != over.end(); ++it) {
        const std::string sub = path.empty() ? it.key() : path + "." + it.key();
        if (!base.contains(it.key())) throw ConfigError(sub, "unknown configuration key");
        if (base[it.key()].is_object() && it.value().is_object())
            deep_merge(base[it.key()], it.value(), sub);
        else
            base[it.key()] = it.value();
    }
}

double num(const Json& sec, const std::string& section, const std::string& key) {
    const Json& v = sec.at(key);
    if (!v.is_number()) throw ConfigError(section + "." + key, "expected a number");
    return v.get<double>();
}

std::size_t index_of(const Json& sec, const std::string& section, const std::string& key) {
    const double d = num(sec, section, key);
    if (d < 0.0 || d != static_cast<double>(static_cast<std::size_t>(d)))
        throw ConfigError(section + "." + key, "expected a nonnegative integer");
    return static_cast<std::size_t>(d);
}

const Json& section(const Json& root, const std::string& name) {
    if (!root.contains(name) || root.at(name).is_null())
        throw ConfigError(name, "missing section");
    return root.at(name);
}

}  // namespace

Json defaults() {
    Json j;
    j["seed"] = 0;
    j["output_dir"] = "out";
    j["threads"] = 0;
    j["kernel"] = {{"family", "fractional_pure"},
                   {"s", 0.25},
                   {"c", 1.0},
                   {"unit_symbol", false},
                   {"unit_mass", false},
                   {"J0", nullptr},
                   {"J1", nullptr},
                   {"R0", 1.0},
                   {"table_path", nullptr}};
    j["reaction"] = {{"family", "quadratic_bump"},
                     {"theta", 0.25},
                     {"amplitude", 1.0},
                     {"table_path", nullptr}};
    j["symbol"] = {{"xi_min", 1e-3}, {"xi_max", 10.0}, {"n_points", 64},
                   {"fit_lo", 1e-3}, {"fit_hi", 1e-2}};
    j["sim"] = {{"x_left", -50.0},
                {"x_right", 100.0},
                {"dx", 1.0},
                {"dt", 0.0},
                {"t_end", 10.0},
                {"levels", Json::array({0.25, 0.5, 0.75})},
                {"snapshot_times", Json::array()},
                {"regrid_margin", 25.0},
                {"window_safety", 4.0},
                {"max_nodes", 65536},
                {"trace_stride", 1}};
    j["greens"] = {{"t", 1.0},      {"x_max", 100.0},  {"n_points", 120},
                   {"flat_lo", 10.0}, {"flat_hi", 100.0}, {"n_heaviside", 40}};
    j["subsolution"] = {{"epsilon", 0.5},
                        {"sigma", 0.05},
                        {"kappa", 0.0},
                        {"kappa_star_fraction", 1.0},
                        {"t_max", 1e6},
                        {"tol", 1e-8},
                        {"t_grid_factor", 4.0},
                        {"n_t", 6},
                        {"residuals_csv", false},
                        {"onset_times", false},
                        {"blue_extent", 50.0},
                        {"green_factor", 50.0},
                        {"n_blue", 10},
                        {"n_orange", 12},
                        {"n_green", 16}};
    return j;
}

Json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    Json file;
    try {
        file = Json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError(path, std::string("JSON parse error: ") + e.what());
    }
    Json merged = defaults();
    deep_merge(merged, file, "");
    return merged;
}

KernelSpec make_kernel(const Json& root) {
    const Json& k = section(root, "kernel");
    const std::string family = k.at("family").get<std::string>();
    const double s = num(k, "kernel", "s");
    if (!(s > 0.0) || !(s <= 0.5)) throw ConfigError("kernel.s", "must be in (0, 1/2]");

    KernelSpec spec;
    try {
        if (family == "fractional_pure") {
            spec = k.at("unit_symbol").get<bool>()
                       ? fractional_pure_unit_symbol(s)
                       : fractional_pure(s, num(k, "kernel", "c"));
        } else if (family == "truncated_power_tail") {
            spec = k.at("unit_mass").get<bool>()
                       ? truncated_power_tail_unit_mass(s)
                       : truncated_power_tail(s, num(k, "kernel", "c"));
        } else if (family == "tabulated") {
            if (k.at("table_path").is_null())
                throw ConfigError("kernel.table_path", "required for the tabulated family");
            spec = tabulated_kernel_from_csv(s, k.at("table_path").get<std::string>(),
                                             num(k, "kernel", "R0"));
        } else {
            throw ConfigError("kernel.family", "unknown family '" + family + "'");
        }
        if (!k.at("J0").is_null()) spec.J0 = num(k, "kernel", "J0");
        if (!k.at("J1").is_null()) spec.J1 = num(k, "kernel", "J1");
        if (!k.at("R0").is_null()) spec.R0 = num(k, "kernel", "R0");
        spec.validate();
    } catch (const InvariantError& e) {
        throw ConfigError("kernel", e.what());
    }
    return spec;
}

IgnitionNonlinearity make_reaction(const Json& root) {
    const Json& r = section(root, "reaction");
    const std::string family = r.at("family").get<std::string>();
    const double theta = num(r, "reaction", "theta");
    try {
        if (family == "quadratic_bump")
            return quadratic_bump(theta, num(r, "reaction", "amplitude"));
        if (family == "tabulated") {
            if (r.at("table_path").is_null())
                throw ConfigError("reaction.table_path", "required for the tabulated family");
            return tabulated_reaction_from_csv(theta, r.at("table_path").get<std::string>());
        }
    } catch (const InvariantError& e) {
        throw ConfigError("reaction", e.what());
    }
    throw ConfigError("reaction.family", "unknown family '" + family + "'");
}

SimConfig make_sim(const Json& root) {
    const Json& s = section(root, "sim");
    SimConfig cfg;
    cfg.kernel = make_kernel(root);
    cfg.reaction = make_reaction(root);
    cfg.window.x_left = num(s, "sim", "x_left");
    cfg.window.x_right = num(s, "sim", "x_right");
    cfg.window.dx = num(s, "sim", "dx");
    cfg.dt = num(s, "sim", "dt");
    cfg.t_end = num(s, "sim", "t_end");
    cfg.levels.clear();
    for (const auto& v : s.at("levels")) cfg.levels.push_back(v.get<double>());
    cfg.snapshot_times.clear();
    for (const auto& v : s.at("snapshot_times")) cfg.snapshot_times.push_back(v.get<double>());
    cfg.regrid_margin = num(s, "sim", "regrid_margin");
    cfg.window_safety = num(s, "sim", "window_safety");
    cfg.max_nodes = index_of(s, "sim", "max_nodes");
    cfg.trace_stride = std::max<std::size_t>(1, index_of(s, "sim", "trace_stride"));
    try {
        cfg.validate();
    } catch (const InvariantError& e) {
        throw ConfigError("sim", e.what());
    }
    return cfg;
}

GreensSection make_greens(const Json& root) {
    const Json& g = section(root, "greens");
    GreensSection out;
    out.t = num(g, "greens", "t");
    out.x_max = num(g, "greens", "x_max");
    out.n_points = index_of(g, "greens", "n_points");
    out.flat_lo = num(g, "greens", "flat_lo");
    out.flat_hi = num(g, "greens", "flat_hi");
    out.n_heaviside = index_of(g, "greens", "n_heaviside");
    if (!(out.t > 0.0)) throw ConfigError("greens.t", "must be positive");
    if (!(out.x_max > 0.0)) throw ConfigError("greens.x_max", "must be positive");
    if (out.n_points < 2) throw ConfigError("greens.n_points", "need at least 2");
    if (!(out.flat_lo > 0.0) || !(out.flat_hi > out.flat_lo))
        throw ConfigError("greens.flat_lo", "need 0 < flat_lo < flat_hi");
    return out;
}

SymbolSection make_symbol(const Json& root) {
    const Json& s = section(root, "symbol");
    SymbolSection out;
    out.xi_min = num(s, "symbol", "xi_min");
    out.xi_max = num(s, "symbol", "xi_max");
    out.n_points = index_of(s, "symbol", "n_points");
    out.fit_lo = num(s, "symbol", "fit_lo");
    out.fit_hi = num(s, "symbol", "fit_hi");
    if (!(out.xi_min > 0.0) || !(out.xi_max > out.xi_min))
        throw ConfigError("symbol.xi_min", "need 0 < xi_min < xi_max");
    if (out.n_points < 2)
        throw ConfigError("symbol.n_points", "the small-frequency fit needs at least 2 points");
    if (!(out.fit_lo > 0.0) || !(out.fit_hi > out.fit_lo))
        throw ConfigError("symbol.fit_lo", "need 0 < fit_lo < fit_hi");
    return out;
}

SubsolutionSection make_subsolution(const Json& root) {
    const Json& s = section(root, "subsolution");
    SubsolutionSection out;
    out.epsilon = num(s, "subsolution", "epsilon");
    out.sigma = num(s, "subsolution", "sigma");
    out.kappa = num(s, "subsolution", "kappa");
    out.kappa_star_fraction = num(s, "subsolution", "kappa_star_fraction");
    out.t_max = num(s, "subsolution", "t_max");
    out.tol = num(s, "subsolution", "tol");
    out.t_grid_factor = num(s, "subsolution", "t_grid_factor");
    out.n_t = std::max<std::size_t>(2, index_of(s, "subsolution", "n_t"));
    out.residuals_csv = s.at("residuals_csv").get<bool>();
    out.onset_times = s.at("onset_times").get<bool>();
    out.grid.blue_extent = num(s, "subsolution", "blue_extent");
    out.grid.green_factor = num(s, "subsolution", "green_factor");
    out.grid.n_blue = index_of(s, "subsolution", "n_blue");
    out.grid.n_orange = index_of(s, "subsolution", "n_orange");
    out.grid.n_green = index_of(s, "subsolution", "n_green");
    if (!(out.epsilon > 0.0) || !(out.epsilon < 1.0))
        throw ConfigError("subsolution.epsilon", "must be in (0, 1)");
    if (!(out.sigma > 0.0) || !(out.sigma < 1.0))
        throw ConfigError("subsolution.sigma", "must be in (0, 1)");
    if (out.kappa < 0.0) throw ConfigError("subsolution.kappa", "must be >= 0 (0 = kappa_star)");
    if (!(out.tol > 0.0)) throw ConfigError("subsolution.tol", "must be positive");
    if (!(out.t_max >= 1.0)) throw ConfigError("subsolution.t_max", "must be >= 1");
    if (!(out.t_grid_factor > 1.0)) throw ConfigError("subsolution.t_grid_factor", "must be > 1");
    return out;
}

unsigned resolve_threads(const Json& root, int cli_threads) {
    if (cli_threads > 0) return static_cast<unsigned>(cli_threads);
    const auto cfg = root.at("threads").get<int>();
    if (cfg > 0) return static_cast<unsigned>(cfg);
    return default_threads();
}

}  // namespace fracfront::config
