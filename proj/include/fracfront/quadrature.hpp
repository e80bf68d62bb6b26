#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fracfront::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error bound
    std::size_t evals = 0;
};

using Fn = std::function<double(double)>;

// One Gauss(7)/Kronrod(15) panel on [a, b].
Result gk15(const Fn& f, double a, double b);

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_panels = 4000;
    // Optional interior points the integrand is not smooth across
    // (kernel kinks, piecewise junctions); panels never straddle them.
    std::vector<double> split_points{};
};

// Globally adaptive bisection on [a, b]. Throws ToleranceError if the
// panel budget is exhausted before the tolerance is met.
Result integrate(const Fn& f, double a, double b, const Options& opt = {});

// As above but never throws: returns the best estimate with its bound.
Result integrate_lenient(const Fn& f, double a, double b, const Options& opt = {});

// ∫_a^b f, 0 < a < b, where f may have an integrable algebraic
// singularity at 0. Integrates in the log variable z = e^v.
Result integrate_log(const Fn& f, double a, double b, const Options& opt = {});

// ∫_a^b F(xi) cos(omega xi) dxi for smooth slowly-varying F and possibly
// large omega. Each panel interpolates F by a cubic and integrates
// cubic x cosine in closed form (Filon); short panels fall back to gk15.
// The initial partition is geometric from `a + first` outward so an
// algebraic kink of F at `a` is resolved.
Result oscillatory_cos(const Fn& F, double a, double b, double omega,
                       double abs_tol, double first = 1e-8,
                       std::size_t max_panels = 20000,
                       const std::vector<double>& splits = {});

}  // namespace fracfront::quad
