#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracfront {

enum class KernelFamily { FractionalPure, TruncatedPowerTail, TabulatedSymmetric };

// A symmetric jump kernel with tail exponent s in (0, 1/2] and the
// comparability constants (J0, J1, R0) its hypotheses are stated with.
//
//   FractionalPure      J(z) = c |z|^{-1-2s} on all of R \ {0}
//   TruncatedPowerTail  J(z) = c        for |z| <= 1
//                       J(z) = c |z|^{-1-2s}  for |z| >  1
//   TabulatedSymmetric  log-log linear interpolation of samples, power
//                       extrapolation with exponent -(1+2s) past the
//                       last node, first-segment slope below the first.
struct KernelSpec {
    KernelFamily family = KernelFamily::FractionalPure;
    double s = 0.25;
    double c = 1.0;
    double J0 = 1.0;
    double J1 = 1.0;
    double R0 = 1.0;
    // Tabulated samples (z, J(z)), strictly increasing z. Normally all
    // z > 0 (two-sided by symmetry); explicit negative-z rows make the
    // table directional, which verify_hypothesis will flag.
    std::vector<std::pair<double, double>> table{};

    void validate() const;  // throws InvariantError / ConfigError
};

KernelSpec fractional_pure(double s, double c = 1.0);
// c chosen so the symbol is exactly -|xi|^{2s}.
KernelSpec fractional_pure_unit_symbol(double s);
KernelSpec truncated_power_tail(double s, double c);
KernelSpec truncated_power_tail_unit_mass(double s);
KernelSpec tabulated_kernel(double s, std::vector<std::pair<double, double>> table,
                            double R0 = 1.0);
KernelSpec tabulated_kernel_from_csv(double s, const std::string& path, double R0 = 1.0);

// Closed form of 2*Integral_0^inf (1-cos u) u^{-1-2s} du, so that the
// FractionalPure symbol is W(xi) = -c * stable_symbol_constant(s) * |xi|^{2s}.
double stable_symbol_constant(double s);

double eval_kernel(const KernelSpec& spec, double z);

// Integral_a^b z^m J(z) dz over z > 0, in closed form per power-law piece.
// b may be +infinity when the integral converges (m = 0).
double partial_moment(const KernelSpec& spec, int m, double a, double b);

// Where the declared power tail c_tail * z^{-1-2s} holds exactly.
double power_tail_start(const KernelSpec& spec);
double power_tail_amplitude(const KernelSpec& spec);

// True when Integral J is finite, i.e. the symbol plateaus at -2*mass
// instead of diverging (convolution-type kernels).
bool has_finite_mass(const KernelSpec& spec);
double total_mass(const KernelSpec& spec);  // throws DomainError if infinite

struct HypothesisReport {
    bool symmetric = true;
    bool moment_bound = true;
    bool tail_upper = true;
    bool tail_lower = true;
    std::optional<double> witness_symmetric{};
    std::optional<double> witness_moment{};  // the computed moment when it fails
    std::optional<double> witness_tail_upper{};
    std::optional<double> witness_tail_lower{};
    bool all() const { return symmetric && moment_bound && tail_upper && tail_lower; }
};

HypothesisReport verify_hypothesis(const KernelSpec& spec, const std::vector<double>& z_samples);

struct SymbolValue {
    double value = 0.0;
    double error = 0.0;
};

// W(xi) = Integral (cos(xi y) - 1) J(y) dy, computed by splitting into a
// small-z Taylor zone, a Filon cosine quadrature against the exact
// minus-mass, and an integrated-by-parts power tail. Always <= 0,
// even in xi, exactly 0 at xi = 0.
SymbolValue symbol(const KernelSpec& spec, double xi, double rel_tol = 1e-10);

struct FourierSymbol {
    std::vector<double> xi_grid;   // sorted positive frequencies
    std::vector<double> W_values;  // all <= 0
    double small_freq_constant = 0.0;  // fitted coefficient of -|xi|^{2s}
};

FourierSymbol symbol_table(const KernelSpec& spec, const std::vector<double>& xi_grid);

struct SmallFreqFit {
    double slope = 0.0;     // estimates 2s
    double constant = 0.0;  // prefactor of -|xi|^{slope}
};

SmallFreqFit fit_small_freq_exponent(const KernelSpec& spec, double xi_lo, double xi_hi,
                                     std::size_t n_points = 24);

}  // namespace fracfront
