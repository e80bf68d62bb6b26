#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fracfront {

enum class ReactionFamily { QuadraticBump, Tabulated };

// Ignition nonlinearity: f = 0 on [0, theta], f(1) = 0, f > 0 on (theta, 1).
// QuadraticBump: f(u) = a (u - theta)(1 - u) for u > theta, else 0.
struct IgnitionNonlinearity {
    ReactionFamily family = ReactionFamily::QuadraticBump;
    double theta = 0.25;
    double amplitude = 1.0;
    std::vector<std::pair<double, double>> table{};  // (u, f) rows on [0, 1]

    void validate() const;
};

IgnitionNonlinearity quadratic_bump(double theta, double amplitude = 1.0);
IgnitionNonlinearity tabulated_reaction(double theta,
                                        std::vector<std::pair<double, double>> table);
IgnitionNonlinearity tabulated_reaction_from_csv(double theta, const std::string& path);

// u may stray outside [0, 1] by at most 1e-8 (clamped); beyond that the
// call signals a solver overshoot with DomainError.
double eval_f(const IgnitionNonlinearity& nl, double u);

// min of f over [lo, hi] with theta < lo <= hi <= 1. Closed form for the
// concave QuadraticBump (endpoint minimum), exact breakpoint scan for
// piecewise-linear tables.
double min_on_interval(const IgnitionNonlinearity& nl, double lo, double hi);

double max_of_f(const IgnitionNonlinearity& nl);     // sup of f over [0, 1]
double lipschitz_bound(const IgnitionNonlinearity& nl);

}  // namespace fracfront
