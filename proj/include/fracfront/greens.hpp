#pragma once

#include <mutex>
#include <vector>

#include "fracfront/kernel.hpp"

namespace fracfront::greens {

struct Value {
    double value = 0.0;
    double error = 0.0;  // absolute bound: quadrature + truncation (+ extrapolation)
};

// Fundamental solution G(t, x) of G_t = D[G], G(0,.) = delta_0, via the
// fixed 1/(2pi) inverse convention: G = (1/pi) Integral_0^inf e^{W(xi) t}
// cos(x xi) dxi.
//
// FractionalPure kernels use the exact power scaling of W from one
// quadrature value; other kernels interpolate a log-log symbol table.
// Integrable kernels have a plateau symbol (W -> -mass): their transform
// carries an atom e^{-mass t} delta_0, and the continuous part is
// computed with Gaussian damping e^{-delta xi^2}, Richardson-extrapolated
// over delta in {1e-4, 5e-5, 2.5e-5}.
class Evaluator {
  public:
    explicit Evaluator(KernelSpec spec, double rel_tol = 1e-9);

    const KernelSpec& kernel() const { return spec_; }
    bool plateau_symbol() const { return plateau_; }
    // mass of the atom at x = 0 (zero for non-integrable kernels)
    double atom_mass(double t) const;

    double symbol_at(double xi) const;

    Value density(double t, double x) const;
    Value heaviside(double t, double x) const;
    // v at many abscissae sharing one density sweep (the economical path
    // for plateau kernels, whose damped inversions are expensive).
    std::vector<Value> heaviside_table(double t, std::vector<double> xs) const;
    double tail_constant(double t, double x_probe) const;

    struct FlatteningReport {
        double C0_estimate = 0.0;
        bool pass = false;
        double x_at_min = 0.0;
        double worst_error = 0.0;  // largest rescaled quadrature bound
    };
    FlatteningReport flattening_check(double t, double x_lo, double x_hi,
                                      std::size_t n_samples = 16) const;

  private:
    double W_interp(double xi) const;
    double xi_cutoff(double t, double log_floor) const;
    void ensure_table(double xi_max) const;
    Value density_damped(double t, double x, double delta) const;
    Value density_direct(double t, double x) const;

    KernelSpec spec_;
    double rel_tol_;
    bool pure_ = false;
    double W1_ = 0.0;  // symbol at xi = 1 for the pure scaling path
    bool plateau_ = false;
    double mass_ = 0.0;

    mutable std::mutex mu_;
    mutable std::vector<double> tab_logxi_;
    mutable std::vector<double> tab_logw_;  // ln(-W)
    mutable double tab_ximax_ = 0.0;
};

struct GreensResult {
    double t = 0.0;
    std::vector<double> x_grid;
    std::vector<double> G_values;
    std::vector<double> G_errors;
    double tail_constant_estimate = 0.0;
    double C0_estimate = 0.0;
    bool flattening_pass = false;
    double flattening_worst_error = 0.0;
    double mass = 0.0;  // grid quadrature + analytic tails + atom
};

// Tabulates G on x_grid (sorted, starting at 0 for a meaningful mass) and
// attaches the tail-constant / flattening diagnostics over [flat_lo, flat_hi].
GreensResult greens_table(const Evaluator& ev, double t, const std::vector<double>& x_grid,
                          double flat_lo, double flat_hi);

// Free-function forms of the operation contracts (each builds an Evaluator).
Value greens_eval(const KernelSpec& spec, double t, double x);
double tail_constant(const KernelSpec& spec, double t, double x_probe);
Evaluator::FlatteningReport flattening_check(const KernelSpec& spec, double t, double x_lo,
                                             double x_hi);
Value heaviside_linear_solution(const KernelSpec& spec, double t, double x);

}  // namespace fracfront::greens
