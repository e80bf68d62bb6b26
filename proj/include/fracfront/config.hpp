#pragma once

#include <string>

#include <json.hpp>

#include "fracfront/kernel.hpp"
#include "fracfront/reaction.hpp"
#include "fracfront/solver.hpp"
#include "fracfront/subsolution.hpp"

namespace fracfront::config {

using Json = nlohmann::ordered_json;

extern const char* kVersion;

// Full default configuration (what --print-defaults shows).
Json defaults();

// Parse + deep-merge a config file over the defaults.
Json load(const std::string& path);

// Section builders; every validation failure is a ConfigError carrying the
// offending field path.
KernelSpec make_kernel(const Json& root);
IgnitionNonlinearity make_reaction(const Json& root);
SimConfig make_sim(const Json& root);

struct GreensSection {
    double t = 1.0;
    double x_max = 100.0;
    std::size_t n_points = 120;
    double flat_lo = 10.0;
    double flat_hi = 100.0;
    std::size_t n_heaviside = 40;
};
GreensSection make_greens(const Json& root);

struct SymbolSection {
    double xi_min = 1e-3;
    double xi_max = 10.0;
    std::size_t n_points = 64;
    double fit_lo = 1e-3;
    double fit_hi = 1e-2;
};
SymbolSection make_symbol(const Json& root);

struct SubsolutionSection {
    double epsilon = 0.5;
    double sigma = 0.05;
    double kappa = 0.0;  // 0 selects kappa_star * kappa_star_fraction
    double kappa_star_fraction = 1.0;
    double t_max = 1e6;
    double tol = 1e-8;
    double t_grid_factor = 4.0;  // certify on [t*, factor t*]
    std::size_t n_t = 6;
    bool residuals_csv = false;
    bool onset_times = false;
    subsol::CertifyGrid grid{};
};
SubsolutionSection make_subsolution(const Json& root);

unsigned resolve_threads(const Json& root, int cli_threads);

}  // namespace fracfront::config
