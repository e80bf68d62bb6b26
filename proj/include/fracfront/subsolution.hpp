#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fracfront/kernel.hpp"
#include "fracfront/profile.hpp"
#include "fracfront/reaction.hpp"

namespace fracfront::subsol {

// Parameters of the explicit sub-solution
//   w(t,x)    = [x^{2s}/(kappa t) + gamma]^{-1}
//   X(t)      = [1/eps - gamma]^{1/2s} (kappa t)^{1/2s}
//   ubar(t,x) = eps                                   for x <= X(t)
//             = 3 (1 - w/eps + w^2/(3 eps^2)) w       for x >  X(t)
// with gamma = (1 - sigma)/eps and eta the smallest positive root of
// z^3/eps^2 + z - (eps - theta).
struct SubsolutionParams {
    double s = 0.25;      // in (0, 1/2): the green-zone estimates need s < 1/2
    double theta = 0.25;
    double epsilon = 0.5;
    double gamma = 1.9;
    double sigma = 0.05;  // gamma = (1 - sigma)/epsilon
    double kappa = 1.0 / 27.0;
    double eta = 0.0;     // derived
    double t_star = 0.0;  // 0 until found
    double kernel_J0 = 1.0;
    double kernel_J1 = 1.0;
    double kernel_R0 = 1.0;

    void validate() const;
};

SubsolutionParams make_params(double s, double theta, double epsilon, double sigma, double kappa,
                              const KernelSpec& kernel);

// Smallest positive root of z^3/eps^2 + z - (eps - theta), bisected to 1e-14.
double eta_root(double epsilon, double theta);

double w_eval(const SubsolutionParams& p, double t, double x);
struct WDerivs {
    double w, wt, wx, wxx;
};
// wxx derived from the definition of w: 8 s^2 w^3 x^{4s-2}/(kappa t)^2
// + 2 s (1-2s) w^2 x^{2s-2}/(kappa t); cross-checked by finite differences.
WDerivs w_derivatives(const SubsolutionParams& p, double t, double x);

double X_of_t(const SubsolutionParams& p, double t);
double X_eta_of_t(const SubsolutionParams& p, double t);

double ubar_eval(const SubsolutionParams& p, double t, double x);

struct UbarDerivs {
    double ut = 0.0, ux = 0.0, uxx = 0.0;
    bool at_junction = false;  // one-sided limits coincide (C^2 matching)
};
UbarDerivs ubar_derivatives(const SubsolutionParams& p, double t, double x);

// Closed-form bookkeeping constants of the sub-solution argument.
struct ProofConstants {
    // split radius balancing the long-jump remainder against f(eps),
    // and the second-moment constant it produces
    double B_split = 0.0;   // (eps (J0+1)/(s f(eps)))^{1/2s}
    double C0_split = 0.0;  // 3 (J1 + J0 Integral_1^B z^{1-2s} dz)
    double nu0 = 0.0;          // max(4^{1/2s}, s f(eps)/(J0 eps) + 1)
    bool nu0_uses_f_at_epsilon = true;  // the printed form is ill-typed
    double C1 = 0.0;           // J0^2 / eta
    double C2 = 0.0;           // 12 s^2
    double frakC2 = 0.0;       // C2 / (1-2s), s < 1/2 only
    double C3 = 0.0;
    double m0 = 0.0;           // min f on [theta+eta, eps]
    double gamma0 = 0.0;       // (1 - sigma_max)/eps, sigma_max from the final bracket
    double kappa_star = 0.0;   // 1/(48 J0 s (1+eps)^2)
    double delta = 0.0;        // x-free admissible offset sup{R0, B}
    // numerically found onset times (0 until compute_onset_times runs)
    double t0 = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0, t5 = 0.0;
};

ProofConstants compute_proof_constants(const SubsolutionParams& p, const IgnitionNonlinearity& f);

double kappa_star(double J0, double s, double epsilon);

// D[ubar](t, x) by quadrature against the exact closed-form ubar on all of
// R (no window truncation): symmetrized near part on |z| <= 1 split at the
// junction, exact plateau mass on the left, log-variable adaptive panels
// for the curved parts, analytic remainder bound past the far cut.
struct OperatorValue {
    double value = 0.0;
    double error = 0.0;
};
OperatorValue operator_on_ubar(const SubsolutionParams& p, const KernelSpec& spec, double t,
                               double x);

enum class Zone { Blue, Orange, Green };
const char* zone_name(Zone z);

struct CertifyGrid {
    double blue_extent = 50.0;   // sample x down to X(t) - blue_extent
    double green_factor = 50.0;  // sample x up to green_factor * X_eta(t)
    std::size_t n_blue = 10;
    std::size_t n_orange = 12;
    std::size_t n_green = 16;
    std::vector<double> far_probe_factors{10.0, 100.0, 1000.0};  // times X_eta(t)
};

struct ZoneSample {
    double t = 0.0, x = 0.0;
    Zone zone = Zone::Blue;
    double residual = 0.0;  // ubar_t - D[ubar] - f(ubar), <= 0 when certified
    double scale = 0.0;     // max(|D|, range of f, |ubar_t|)
    double D = 0.0, ubar_t = 0.0, f_val = 0.0;
    double quad_error = 0.0;
};

struct CertificateReport {
    bool pass = false;
    double tol = 0.0;
    SubsolutionParams params;
    std::vector<ZoneSample> samples;
    ZoneSample worst_blue, worst_orange, worst_green;  // largest residual/scale
    std::size_t n_failures = 0;
};

// Checks ubar_t <= D[ubar] + f(ubar) (and its blue-zone reduction
// 0 <= D + f(eps)) at every (t, x) sample; pass iff residual <= tol*scale.
CertificateReport certify(const SubsolutionParams& p, const KernelSpec& spec,
                          const IgnitionNonlinearity& f, const std::vector<double>& t_grid,
                          const CertifyGrid& grid, double tol = 1e-8, unsigned threads = 1);

struct TStarResult {
    bool found = false;
    double t_star = 0.0;
    std::vector<double> scanned_t;
    std::vector<bool> scan_pass;
    std::string diagnostic;  // worst zone when not found
};

// Geometric scan (ratio 1.25 from t = 1): the smallest scanned t from
// which certification passes at every later scanned time up to t_max.
TStarResult find_t_star(const SubsolutionParams& p, const KernelSpec& spec,
                        const IgnitionNonlinearity& f, double t_max, const CertifyGrid& grid,
                        double tol = 1e-8, unsigned threads = 1);

// Fills ProofConstants.t0..t5 with scan-resolution onset times for the
// individual zone estimates (diagnostics mirroring the existence claims).
void compute_onset_times(ProofConstants& pc, const SubsolutionParams& p, const KernelSpec& spec,
                         const IgnitionNonlinearity& f, double t_max, const CertifyGrid& grid,
                         double tol = 1e-8);

struct ComparisonReport {
    bool aligned = false;
    bool pass = false;
    double shift = 0.0;
    double t_align = 0.0;
    double min_margin = 0.0;  // min over snapshots of min_x (u - ubar_shifted)
    std::size_t snapshots_checked = 0;
    double implied_exponent = 0.0;  // 1/(2s) from the X(t) power law
};

// After aligning ubar(. - t_offset, . - shift) under the first usable
// snapshot, checks domination at every later snapshot; the certified
// sub-solution then implies x_lambda(t) >= X(t - t_offset) + shift for
// lambda <= eps.
ComparisonReport compare_with_simulation(const SubsolutionParams& p,
                                         const std::vector<Profile>& snapshots, double t_offset,
                                         double tol = 1e-6, bool require_plateau_overlap = true);

}  // namespace fracfront::subsol
