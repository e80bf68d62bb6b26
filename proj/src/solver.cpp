#include "fracfront/solver.hpp"

#include <algorithm>
#include <cmath>

#include "fracfront/csv.hpp"
#include "fracfront/errors.hpp"
#include "fracfront/numerics.hpp"

namespace fracfront {

void SimConfig::validate() const {
    kernel.validate();
    reaction.validate();
    if (!(window.dx > 0.0)) throw InvariantError("sim: dx must be positive");
    if (!(window.x_left < 0.0) || !(window.x_right > 0.0))
        throw InvariantError("sim: window must satisfy x_left < 0 < x_right");
    if (!(t_end > 0.0)) throw InvariantError("sim: t_end must be positive");
    if (dt < 0.0) throw InvariantError("sim: dt must be nonnegative");
    if (levels.empty()) throw InvariantError("sim: need at least one level");
    for (double lam : levels)
        if (!(lam > 0.0) || !(lam < 1.0))
            throw InvariantError("sim: levels must lie strictly inside (0, 1)");
    if (!(regrid_margin > 0.0)) throw InvariantError("sim: regrid_margin must be positive");
    if (window_safety < 0.0 || (window_safety > 0.0 && window_safety < 1.0))
        throw InvariantError("sim: window_safety must be 0 (off) or >= 1");
    if (max_nodes < 16) throw InvariantError("sim: max_nodes too small");
    if (trace_stride == 0) throw InvariantError("sim: trace_stride must be >= 1");
}

double stability_bound(const SimConfig& config) {
    OperatorPlan plan(config.kernel, config.window.dx);
    return 0.9 / (plan.diagonal_bound() + lipschitz_bound(config.reaction));
}

Profile init_profile(const SimConfig& config) {
    config.validate();
    const double dx = config.window.dx;
    Profile p;
    p.x0 = config.window.x_left;
    p.dx = dx;
    const auto n = static_cast<std::size_t>(
                       std::llround((config.window.x_right - config.window.x_left) / dx)) +
                   1;
    p.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = p.x_at(static_cast<std::ptrdiff_t>(i));
        if (x <= -dx)
            p.values[i] = 1.0;
        else if (x >= dx)
            p.values[i] = 0.0;
        else
            p.values[i] = (dx - x) / (2.0 * dx);
    }
    p.left_state = 1.0;
    p.right_state = 0.0;
    p.time = 0.0;
    p.monotone_decreasing = true;
    return p;
}

void step(const SimConfig& config, const OperatorPlan& plan, Profile& p) {
    static thread_local std::vector<double> rhs;
    plan.apply_all(p, rhs, config.threads);
    const std::size_t n = p.values.size();
    for (std::size_t i = 0; i < n; ++i) rhs[i] += eval_f(config.reaction, p.values[i]);

    const double dt = config.dt;
    for (std::size_t i = 0; i < n; ++i) {
        double v = p.values[i] + dt * rhs[i];
        if (v < -1e-8 || v > 1.0 + 1e-8)
            throw StabilityError("step: overshoot beyond 1e-8 at t = " + format_double(p.time) +
                                 "; reduce dt below the stability bound");
        p.values[i] = std::clamp(v, 0.0, 1.0);
    }
    p.time += dt;
}

Profile step(const SimConfig& config, const Profile& p) {
    OperatorPlan plan(config.kernel, config.window.dx);
    plan.set_relaxed_window(true);
    Profile out = p;
    step(config, plan, out);
    return out;
}

namespace {

void grow_window(Profile& p, double factor, std::size_t max_nodes, bool& budget_hit) {
    const std::size_t n = p.values.size();
    auto target = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * factor));
    if (target > max_nodes) {
        target = max_nodes;
        if (target <= n) {
            budget_hit = true;
            return;
        }
    }
    p.values.resize(target, p.right_state);
}

}  // namespace

RunResult run(const SimConfig& config) {
    config.validate();

    RunResult result;
    OperatorPlan plan(config.kernel, config.window.dx);
    plan.set_relaxed_window(true);
    const double bound = 0.9 / (plan.diagonal_bound() + lipschitz_bound(config.reaction));
    result.stability_dt = bound;

    SimConfig cfg = config;
    if (cfg.dt == 0.0) cfg.dt = bound;
    if (cfg.dt > bound * (1.0 + 1e-12))
        throw InvariantError("sim: dt = " + format_double(cfg.dt) +
                             " exceeds the stability bound " + format_double(bound));
    result.dt_used = cfg.dt;

    Profile p = init_profile(cfg);
    result.window_history.emplace_back(0.0, p.x_last());

    std::vector<double> snap_times = cfg.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    std::size_t next_snap = 0;

    bool budget_hit = false;
    std::size_t step_count = 0;
    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-12));

    while (step_count < n_steps) {
        step(cfg, plan, p);
        ++step_count;

        double front = -1e300;
        const bool record = (step_count % cfg.trace_stride == 0) || step_count == n_steps;
        for (double lam : cfg.levels) {
            const double x = level_position(p, lam);
            front = std::max(front, x);
            if (record) result.trace.rows.push_back({p.time, lam, x});
        }

        // record at the first step reaching the requested time
        while (next_snap < snap_times.size() && p.time >= snap_times[next_snap] - 1e-9) {
            result.snapshots.push_back(p);
            ++next_snap;
        }

        const bool margin_hit = front > p.x_last() - cfg.regrid_margin;
        const bool headroom_hit =
            cfg.window_safety > 0.0 && front > p.x_last() / cfg.window_safety;
        if (margin_hit || headroom_hit) {
            grow_window(p, 1.5, cfg.max_nodes, budget_hit);
            result.window_history.emplace_back(p.time, p.x_last());
            if (budget_hit) {
                result.stop_reason = "node budget exhausted at t = " + format_double(p.time);
                return result;
            }
        }
    }

    result.completed = true;
    for (double lam : cfg.levels) {
        try {
            result.trace.fits.push_back(
                fit_spreading_exponent(result.trace, lam, cfg.t_end / 10.0, cfg.t_end));
        } catch (const DomainError&) {
            // level never produced enough positive positions in the window
        }
    }
    return result;
}

double level_position(const Profile& p, double lam) {
    if (!(lam > p.right_state) || !(lam < p.left_state))
        throw DomainError("level_position: lam outside (right_state, left_state)");
    if (!p.is_monotone(1e-8))
        throw InvariantError("level_position: profile is not monotone decreasing");
    const auto n = static_cast<std::ptrdiff_t>(p.values.size());
    std::ptrdiff_t j = -1;
    for (std::ptrdiff_t i = n - 1; i >= 0; --i) {
        if (p.values[static_cast<std::size_t>(i)] >= lam) {
            j = i;
            break;
        }
    }
    if (j < 0) return p.x0;  // level sits left of the window
    if (j == n - 1) return p.x_last();
    const double uj = p.values[static_cast<std::size_t>(j)];
    const double un = p.values[static_cast<std::size_t>(j + 1)];
    if (!(uj > un)) return p.x_at(j);
    return p.x_at(j) + p.dx * (uj - lam) / (uj - un);
}

ExponentFit fit_spreading_exponent(const LevelSetTrace& trace, double lam, double t_lo,
                                   double t_hi) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo))
        throw DomainError("fit_spreading_exponent: need 0 < t_lo < t_hi");
    std::vector<double> lt, lx;
    for (const auto& row : trace.rows) {
        if (std::abs(row.lambda - lam) > 1e-12) continue;
        if (row.t < t_lo || row.t > t_hi) continue;
        if (!(row.x > 0.0))
            throw DomainError("fit_spreading_exponent: nonpositive level position in range");
        lt.push_back(std::log(row.t));
        lx.push_back(std::log(row.x));
    }
    if (lt.size() < 10)
        throw DomainError("fit_spreading_exponent: need >= 10 samples in [t_lo, t_hi]");
    const auto fit = fit_line(lt, lx);
    ExponentFit out;
    out.lambda = lam;
    out.t_lo = t_lo;
    out.t_hi = t_hi;
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.residual_rms = fit.residual_rms;
    out.n_samples = lt.size();
    return out;
}

}  // namespace fracfront
