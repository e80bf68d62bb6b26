#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fracfront/kernel.hpp"
#include "fracfront/nonlocal_operator.hpp"
#include "fracfront/profile.hpp"
#include "fracfront/reaction.hpp"

namespace fracfront {

struct WindowSpec {
    double x_left = -50.0;
    double x_right = 100.0;
    double dx = 1.0;
};

struct SimConfig {
    KernelSpec kernel{};
    IgnitionNonlinearity reaction{};
    WindowSpec window{};
    double dt = 0.0;  // 0 selects the stability bound automatically
    double t_end = 10.0;
    std::vector<double> levels{0.5};
    std::vector<double> snapshot_times{};
    double regrid_margin = 25.0;
    // keep the right edge at least this multiple ahead of the tracked
    // levels (0 disables): with algebraic tails a fixed margin lets the
    // truncation bias at the edge self-limit the front
    double window_safety = 4.0;
    std::size_t max_nodes = std::size_t{1} << 16;
    std::size_t trace_stride = 1;
    unsigned threads = 1;

    void validate() const;  // structural checks (dt bound checked in run)
};

struct TraceRow {
    double t;
    double lambda;
    double x;
};

struct ExponentFit {
    double lambda = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    double slope = 0.0;      // estimates 1/(2s)
    double intercept = 0.0;  // of log x vs log t
    double residual_rms = 0.0;
    std::size_t n_samples = 0;
};

struct LevelSetTrace {
    std::vector<TraceRow> rows;
    std::vector<ExponentFit> fits;
};

struct RunResult {
    LevelSetTrace trace;
    std::vector<Profile> snapshots;
    std::vector<std::pair<double, double>> window_history;  // (t, x_right)
    double dt_used = 0.0;
    double stability_dt = 0.0;
    bool completed = false;
    std::string stop_reason;  // set when completed is false
};

// Explicit Euler bound 0.9 / (discrete diagonal + Lip f).
double stability_bound(const SimConfig& config);

// Mollified Heaviside: 1 for x <= -dx, 0 for x >= dx, linear between.
Profile init_profile(const SimConfig& config);

// One forward-Euler update u <- u + dt (D[u] + f(u)). Values may drift
// outside [0,1] by at most 1e-8 (clipped); beyond that throws
// StabilityError. The two-argument form is a convenience that rebuilds
// the operator plan.
void step(const SimConfig& config, const OperatorPlan& plan, Profile& p);
Profile step(const SimConfig& config, const Profile& p);

// Time-steps from Heaviside data on a rightward-expanding window (the
// left plateau is never trimmed; its mass enters through the analytic
// tail closure). Exceeding max_nodes ends the run early with the partial
// trace and completed = false.
RunResult run(const SimConfig& config);

// Rightmost crossing sup{x : u >= lam} by right-to-left scan and linear
// interpolation. Requires a monotone profile and
// right_state < lam < left_state.
double level_position(const Profile& p, double lam);

ExponentFit fit_spreading_exponent(const LevelSetTrace& trace, double lam, double t_lo,
                                   double t_hi);

}  // namespace fracfront
