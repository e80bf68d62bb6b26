#include "fracfront/subsolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracfront/csv.hpp"
#include "fracfront/errors.hpp"
#include "fracfront/numerics.hpp"
#include "fracfront/quadrature.hpp"

namespace fracfront::subsol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// cubic profile factor: q(w) = 3 (1 - w/eps + w^2/(3 eps^2)) w
double cubic_q(double w, double eps) {
    return 3.0 * (1.0 - w / eps + w * w / (3.0 * eps * eps)) * w;
}

}  // namespace

void SubsolutionParams::validate() const {
    if (!(s > 0.0) || !(s < 0.5))
        throw InvariantError("subsolution: s must be in (0, 1/2) (the s = 1/2 endpoint branch "
                             "is not completed)");
    if (!(theta > 0.0) || !(theta < epsilon) || !(epsilon < 1.0))
        throw InvariantError("subsolution: need 0 < theta < epsilon < 1");
    if (!(sigma > 0.0) || !(sigma < 1.0)) throw InvariantError("subsolution: sigma in (0,1)");
    if (!(gamma > 0.0) || !(gamma < 1.0 / epsilon))
        throw InvariantError("subsolution: need 0 < gamma < 1/epsilon");
    if (!(kappa > 0.0)) throw InvariantError("subsolution: kappa must be positive");
    if (!(eta > 0.0) || !(eta < epsilon - theta))
        throw InvariantError("subsolution: eta must lie in (0, epsilon - theta)");
    if (!(kernel_J0 > 0.0) || !(kernel_J1 > 0.0) || !(kernel_R0 >= 1.0))
        throw InvariantError("subsolution: kernel constants invalid");
}

double eta_root(double epsilon, double theta) {
    if (!(epsilon > theta)) throw DomainError("eta_root: need theta < epsilon");
    auto g = [&](double z) { return z * z * z / (epsilon * epsilon) + z - (epsilon - theta); };
    double lo = 0.0, hi = epsilon - theta;
    // g(0) < 0, g(eps - theta) > 0, g strictly increasing
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SubsolutionParams make_params(double s, double theta, double epsilon, double sigma, double kappa,
                              const KernelSpec& kernel) {
    SubsolutionParams p;
    p.s = s;
    p.theta = theta;
    p.epsilon = epsilon;
    p.sigma = sigma;
    p.gamma = (1.0 - sigma) / epsilon;
    p.kappa = kappa;
    p.eta = eta_root(epsilon, theta);
    p.kernel_J0 = kernel.J0;
    p.kernel_J1 = kernel.J1;
    p.kernel_R0 = kernel.R0;
    p.validate();
    return p;
}

double w_eval(const SubsolutionParams& p, double t, double x) {
    if (!(t >= 1.0)) throw DomainError("w_eval: defined for t >= 1");
    if (!(x > 0.0)) throw DomainError("w_eval: defined for x > 0");
    return 1.0 / (std::pow(x, 2.0 * p.s) / (p.kappa * t) + p.gamma);
}

WDerivs w_derivatives(const SubsolutionParams& p, double t, double x) {
    const double s = p.s;
    const double kt = p.kappa * t;
    const double w = w_eval(p, t, x);
    WDerivs d;
    d.w = w;
    d.wt = w * w * std::pow(x, 2.0 * s) / (p.kappa * t * t);
    d.wx = -2.0 * s * w * w * std::pow(x, 2.0 * s - 1.0) / kt;
    d.wxx = 8.0 * s * s * w * w * w * std::pow(x, 4.0 * s - 2.0) / (kt * kt) +
            2.0 * s * (1.0 - 2.0 * s) * w * w * std::pow(x, 2.0 * s - 2.0) / kt;
    return d;
}

double X_of_t(const SubsolutionParams& p, double t) {
    if (!(t >= 1.0)) throw DomainError("X_of_t: defined for t >= 1");
    const double base = 1.0 / p.epsilon - p.gamma;
    if (!(base > 0.0)) throw InvariantError("X_of_t: gamma >= 1/epsilon");
    return std::pow(base, 1.0 / (2.0 * p.s)) * std::pow(p.kappa * t, 1.0 / (2.0 * p.s));
}

double X_eta_of_t(const SubsolutionParams& p, double t) {
    if (!(t >= 1.0)) throw DomainError("X_eta_of_t: defined for t >= 1");
    const double base = 1.0 / (p.epsilon - p.eta) - p.gamma;
    if (!(base > 0.0)) throw InvariantError("X_eta_of_t: gamma >= 1/(epsilon - eta)");
    return std::pow(base, 1.0 / (2.0 * p.s)) * std::pow(p.kappa * t, 1.0 / (2.0 * p.s));
}

double ubar_eval(const SubsolutionParams& p, double t, double x) {
    if (!(t >= 1.0)) throw DomainError("ubar_eval: defined for t >= 1");
    if (x <= X_of_t(p, t)) return p.epsilon;
    return cubic_q(w_eval(p, t, x), p.epsilon);
}

UbarDerivs ubar_derivatives(const SubsolutionParams& p, double t, double x) {
    const double X = X_of_t(p, t);
    UbarDerivs d;
    if (x == X) {
        d.at_junction = true;  // both one-sided limits vanish (C^2 junction)
        return d;
    }
    if (x < X) return d;
    const WDerivs w = w_derivatives(p, t, x);
    const double g = 1.0 - w.w / p.epsilon;
    d.ut = 3.0 * w.wt * g * g;
    d.ux = 3.0 * w.wx * g * g;
    d.uxx = 3.0 * g * (w.wxx * g - 2.0 * w.wx * w.wx / p.epsilon);
    return d;
}

double kappa_star(double J0, double s, double epsilon) {
    return 1.0 / (48.0 * J0 * s * (1.0 + epsilon) * (1.0 + epsilon));
}

ProofConstants compute_proof_constants(const SubsolutionParams& p,
                                       const IgnitionNonlinearity& f) {
    const double s = p.s, eps = p.epsilon, J0 = p.kernel_J0, J1 = p.kernel_J1;
    if (s >= 0.5)
        throw DomainError("compute_proof_constants: the s = 1/2 branch of the far-field "
                          "estimate is not available");
    p.validate();
    const double f_eps = eval_f(f, eps);
    if (!(f_eps > 0.0)) throw DomainError("compute_proof_constants: need f(epsilon) > 0");

    ProofConstants pc;
    pc.B_split = std::pow(eps * (J0 + 1.0) / (s * f_eps), 1.0 / (2.0 * s));
    const double zint = (std::pow(pc.B_split, 2.0 - 2.0 * s) - 1.0) / (2.0 - 2.0 * s);
    pc.C0_split = 3.0 * (J1 + J0 * zint);
    pc.nu0 = std::max(std::pow(4.0, 1.0 / (2.0 * s)), s * f_eps / (J0 * eps) + 1.0);
    pc.nu0_uses_f_at_epsilon = true;
    pc.C1 = J0 * J0 / p.eta;
    pc.C2 = 12.0 * s * s;
    pc.frakC2 = pc.C2 / (1.0 - 2.0 * s);
    const double a = 2.0 * s, b = 1.0 - 2.0 * s;
    pc.C3 = std::pow(pc.frakC2, a) *
            (std::pow(b, a) / std::pow(a, a) + std::pow(a, b) / std::pow(b, b));
    pc.m0 = min_on_interval(f, p.theta + p.eta, eps);
    // sigma small enough that the final green-zone bracket stays >= 1/8,
    // which preserves the eta/(16 J0 s x^{2s}) floor
    const double sigma_max = std::pow(5.0 / (8.0 * pc.C1 * pc.C3), 1.0 / (2.0 * s));
    pc.gamma0 = (1.0 - std::min(sigma_max, 1.0)) / eps;
    pc.kappa_star = kappa_star(J0, s, eps);
    pc.delta = std::max(p.kernel_R0, pc.B_split);
    return pc;
}

namespace {

struct UbarContext {
    const SubsolutionParams& p;
    double t;
    double X;      // X(t)
    double X_eta;  // X_eta(t)

    double operator()(double y) const {
        if (y <= X) return p.epsilon;
        return cubic_q(w_eval(p, t, y), p.epsilon);
    }
};

}  // namespace

OperatorValue operator_on_ubar(const SubsolutionParams& p, const KernelSpec& spec, double t,
                               double x) {
    p.validate();
    spec.validate();
    const UbarContext ubar{p, t, X_of_t(p, t), X_eta_of_t(p, t)};
    const double X = ubar.X;
    const double ux = ubar(x);
    const double s = spec.s;
    const double c_tail = power_tail_amplitude(spec);

    double value = 0.0, error = 0.0;

    // absolute quadrature target tied to the local operator scale
    const double plateau_dist = std::max(1.0, x - X);
    const double scale =
        std::max({std::abs(ubar_derivatives(p, t, x).ut), 1e-6,
                  p.epsilon * partial_moment(spec, 0, plateau_dist, kInf)});
    quad::Options opt;
    opt.abs_tol = 1e-11 * std::max(scale, 1e-4);
    opt.rel_tol = 1e-9;
    opt.max_panels = 20000;

    // ---- symmetrized near part: z in (0, 1]
    if (x + 1.0 > X) {  // otherwise the whole neighborhood sits in the plateau
        // keep the junction outside the Taylor zone so one-sided ubar_xx
        // is exact there; the difference d2 carries ~4 eps |ubar| noise,
        // so z_floor also controls the attainable absolute accuracy
        const double zj = std::abs(x - X);
        double z_floor = 1e-3;
        if (zj > 0.0) z_floor = std::max(std::min(z_floor, 0.5 * zj), 1e-7);
        auto d2 = [&](double z) { return ubar(x + z) + ubar(x - z) - 2.0 * ux; };
        quad::Options nopt = opt;
        const double noise = 4e-16 * partial_moment(spec, 0, z_floor, 1.0);
        nopt.abs_tol = std::max(opt.abs_tol, 3.0 * noise);
        if (zj > z_floor && zj < 1.0) nopt.split_points.push_back(zj);
        if (spec.family == KernelFamily::TabulatedSymmetric)
            for (const auto& r : spec.table)
                if (r.first > z_floor && r.first < 1.0) nopt.split_points.push_back(r.first);
        const auto near = quad::integrate_log(
            [&](double z) { return d2(z) * eval_kernel(spec, z); }, z_floor, 1.0, nopt);
        value += near.value;
        error += near.error + noise;
        // sub-floor: d2 ~ ubar_xx z^2
        const double uxx = ubar_derivatives(p, t, x).uxx;
        const double m2f = partial_moment(spec, 2, 0.0, z_floor);
        value += uxx * m2f;
        error += std::abs(uxx) * m2f * 1e-2 + 1e-300;
    }

    // ---- left far part: z >= 1, y = x - z
    {
        const double z_plateau = std::max(1.0, x - X);  // y <= X beyond this offset
        if (x - X > 1.0) {
            const auto curved = quad::integrate_log(
                [&](double z) { return (ubar(x - z) - ux) * eval_kernel(spec, z); }, 1.0,
                z_plateau, opt);
            value += curved.value;
            error += curved.error;
        }
        value += (p.epsilon - ux) * partial_moment(spec, 0, z_plateau, kInf);
    }

    // ---- right far part: z >= 1, y = x + z
    {
        double z_lo = 1.0;
        if (x < X - 1.0) z_lo = X - x;  // below that offset ubar(y) = ubar(x) = eps exactly
        // far cut where the decaying remainder drops below the target;
        // ubar(y) <= 3 w(y) <= 3 kappa t / y^{2s} (the gamma term in w only
        // helps, so no sigma reduction is available here)
        const double sig_amp = 3.0 * p.kappa * t * c_tail;
        const double Z = std::max({10.0 * (x + ubar.X_eta), 100.0,
                                   std::pow(sig_amp / (4.0 * s * opt.abs_tol), 1.0 / (4.0 * s))});
        const auto right = quad::integrate_log(
            [&](double z) { return (ubar(x + z) - ux) * eval_kernel(spec, z); }, z_lo, Z, opt);
        value += right.value;
        error += right.error;
        value += -ux * partial_moment(spec, 0, Z, kInf);
        // omitted positive part Integral_Z^inf ubar(x+z) J(z) dz (one-sided)
        error += sig_amp / (4.0 * s * std::pow(Z, 4.0 * s));
    }

    return {value, error};
}

const char* zone_name(Zone z) {
    switch (z) {
        case Zone::Blue: return "blue";
        case Zone::Orange: return "orange";
        case Zone::Green: return "green";
    }
    return "?";
}

namespace {

std::vector<std::pair<double, Zone>> sample_points(const SubsolutionParams& p, double t,
                                                   const CertifyGrid& grid) {
    const double X = X_of_t(p, t);
    const double X_eta = X_eta_of_t(p, t);
    const double orange_hi = std::max(X + p.kernel_R0, X_eta);
    std::vector<std::pair<double, Zone>> pts;

    // blue: x <= X, offsets down to blue_extent
    pts.emplace_back(X, Zone::Blue);
    for (double off : logspace(std::min(0.01, 0.01 * X), grid.blue_extent,
                               std::max<std::size_t>(grid.n_blue, 2)))
        pts.emplace_back(X - off, Zone::Blue);

    // orange: (X, orange_hi]
    for (double fr : logspace(1e-3, 1.0, std::max<std::size_t>(grid.n_orange, 2)))
        pts.emplace_back(X + fr * (orange_hi - X), Zone::Orange);

    // green: (orange_hi, green_factor * X_eta] plus far probes
    const double green_hi = std::max(grid.green_factor * X_eta, orange_hi * 2.0);
    for (double fr : logspace(1e-3, 1.0, std::max<std::size_t>(grid.n_green, 2)))
        pts.emplace_back(orange_hi + fr * (green_hi - orange_hi), Zone::Green);
    for (double fac : grid.far_probe_factors) {
        const double xp = fac * X_eta;
        if (xp > green_hi) pts.emplace_back(xp, Zone::Green);
    }
    return pts;
}

ZoneSample evaluate_sample(const SubsolutionParams& p, const KernelSpec& spec,
                           const IgnitionNonlinearity& f, double t, double x, Zone zone) {
    ZoneSample out;
    out.t = t;
    out.x = x;
    out.zone = zone;
    OperatorValue D;
    try {
        D = operator_on_ubar(p, spec, t, x);
    } catch (const ToleranceError& e) {
        throw ToleranceError("certify: operator quadrature failed at (t, x) = (" +
                                 format_double(t) + ", " + format_double(x) + "): " + e.what(),
                             e.estimate, e.error_bound);
    }
    const double ut = (zone == Zone::Blue) ? 0.0 : ubar_derivatives(p, t, x).ut;
    const double fu = eval_f(f, ubar_eval(p, t, x));
    out.D = D.value;
    out.quad_error = D.error;
    out.ubar_t = ut;
    out.f_val = fu;
    out.residual = ut - D.value - fu;
    out.scale = std::max({std::abs(D.value), max_of_f(f), std::abs(ut), 1e-300});
    return out;
}

}  // namespace

CertificateReport certify(const SubsolutionParams& p, const KernelSpec& spec,
                          const IgnitionNonlinearity& f, const std::vector<double>& t_grid,
                          const CertifyGrid& grid, double tol, unsigned threads) {
    p.validate();
    if (t_grid.empty()) throw DomainError("certify: empty t grid");
    CertificateReport rep;
    rep.tol = tol;
    rep.params = p;

    std::vector<std::tuple<double, double, Zone>> work;
    for (double t : t_grid) {
        if (!(t >= 1.0)) throw DomainError("certify: the construction requires t >= 1");
        for (const auto& [x, zone] : sample_points(p, t, grid)) work.emplace_back(t, x, zone);
    }
    rep.samples.resize(work.size());
    parallel_for(work.size(), threads, [&](std::size_t i) {
        const auto& [t, x, zone] = work[i];
        rep.samples[i] = evaluate_sample(p, spec, f, t, x, zone);
    });

    rep.worst_blue.residual = rep.worst_orange.residual = rep.worst_green.residual = -kInf;
    rep.pass = true;
    for (const auto& sample : rep.samples) {
        ZoneSample& worst = sample.zone == Zone::Blue
                                ? rep.worst_blue
                                : (sample.zone == Zone::Orange ? rep.worst_orange
                                                               : rep.worst_green);
        if (sample.residual / sample.scale >
            (worst.scale > 0.0 ? worst.residual / worst.scale : -kInf))
            worst = sample;
        if (!(sample.residual <= tol * sample.scale)) {
            rep.pass = false;
            ++rep.n_failures;
        }
    }
    return rep;
}

TStarResult find_t_star(const SubsolutionParams& p, const KernelSpec& spec,
                        const IgnitionNonlinearity& f, double t_max, const CertifyGrid& grid,
                        double tol, unsigned threads) {
    p.validate();
    const double ks = kappa_star(p.kernel_J0, p.s, p.epsilon);
    if (p.kappa > ks * (1.0 + 1e-12))
        throw DomainError("find_t_star: kappa exceeds kappa_star = " + format_double(ks));
    if (!(t_max >= 1.0)) throw DomainError("find_t_star: need t_max >= 1");

    TStarResult res;
    for (double t = 1.0; t <= t_max * (1.0 + 1e-12); t *= 1.25) res.scanned_t.push_back(t);
    res.scan_pass.resize(res.scanned_t.size());

    std::string last_diag;
    for (std::size_t i = 0; i < res.scanned_t.size(); ++i) {
        const auto rep = certify(p, spec, f, {res.scanned_t[i]}, grid, tol, threads);
        res.scan_pass[i] = rep.pass;
        if (!rep.pass) {
            const ZoneSample* worst = &rep.worst_blue;
            for (const ZoneSample* cand : {&rep.worst_orange, &rep.worst_green})
                if (cand->residual / cand->scale > worst->residual / worst->scale) worst = cand;
            last_diag = "worst zone " + std::string(zone_name(worst->zone)) + " at (t, x) = (" +
                        format_double(worst->t) + ", " + format_double(worst->x) +
                        "), residual/scale = " + format_double(worst->residual / worst->scale);
        }
    }

    // smallest scanned t from which every later scan passes
    std::size_t first_ok = res.scanned_t.size();
    for (std::size_t i = res.scanned_t.size(); i-- > 0;) {
        if (!res.scan_pass[i]) break;
        first_ok = i;
    }
    if (first_ok < res.scanned_t.size()) {
        res.found = true;
        res.t_star = res.scanned_t[first_ok];
    } else {
        res.diagnostic = last_diag.empty() ? "no scanned time passed" : last_diag;
    }
    return res;
}

void compute_onset_times(ProofConstants& pc, const SubsolutionParams& p, const KernelSpec& spec,
                         const IgnitionNonlinearity& f, double t_max, const CertifyGrid& grid,
                         double tol) {
    auto scan = [&](auto&& pred) -> double {
        for (double t = 1.0; t <= t_max * (1.0 + 1e-12); t *= 1.25)
            if (pred(t)) return t;
        return 0.0;
    };

    // t0: the blue-zone inequality 0 <= D + f(eps)
    pc.t0 = scan([&](double t) {
        for (const auto& [x, zone] : sample_points(p, t, grid)) {
            if (zone != Zone::Blue) continue;
            const auto s = evaluate_sample(p, spec, f, t, x, zone);
            if (!(s.residual <= tol * s.scale)) return false;
        }
        return true;
    });
    // t1: orange zone keeps D + f(ubar) >= f(ubar)/2
    pc.t1 = scan([&](double t) {
        for (const auto& [x, zone] : sample_points(p, t, grid)) {
            if (zone != Zone::Orange) continue;
            const auto s = evaluate_sample(p, spec, f, t, x, zone);
            if (!(s.D + s.f_val >= 0.5 * s.f_val - tol * s.scale)) return false;
        }
        return true;
    });
    // t2: ubar >= theta + eta up to sup{X + R0, X_eta}
    pc.t2 = scan([&](double t) {
        for (const auto& [x, zone] : sample_points(p, t, grid)) {
            if (zone != Zone::Orange) continue;
            if (ubar_eval(p, t, x) < p.theta + p.eta - 1e-12) return false;
        }
        return true;
    });
    // t3: green-zone floor D >= eta/(16 J0 s x^{2s})
    pc.t3 = scan([&](double t) {
        for (const auto& [x, zone] : sample_points(p, t, grid)) {
            if (zone != Zone::Green) continue;
            const auto s = evaluate_sample(p, spec, f, t, x, zone);
            const double floor = p.eta / (16.0 * p.kernel_J0 * p.s * std::pow(x, 2.0 * p.s));
            if (!(s.D >= floor - tol * s.scale)) return false;
        }
        return true;
    });
    // t4: ubar_t <= m0/2 on [X, X_eta]
    pc.t4 = scan([&](double t) {
        for (const auto& [x, zone] : sample_points(p, t, grid)) {
            if (zone != Zone::Orange) continue;
            if (!(ubar_derivatives(p, t, x).ut <= 0.5 * pc.m0 + tol)) return false;
        }
        return true;
    });
    // t5: the full green-zone residual inequality
    pc.t5 = scan([&](double t) {
        for (const auto& [x, zone] : sample_points(p, t, grid)) {
            if (zone != Zone::Green) continue;
            const auto s = evaluate_sample(p, spec, f, t, x, zone);
            if (!(s.residual <= tol * s.scale)) return false;
        }
        return true;
    });
}

ComparisonReport compare_with_simulation(const SubsolutionParams& p,
                                         const std::vector<Profile>& snapshots, double t_offset,
                                         double tol, bool require_plateau_overlap) {
    p.validate();
    if (snapshots.empty()) throw DomainError("compare_with_simulation: no snapshots");

    ComparisonReport rep;
    rep.implied_exponent = 1.0 / (2.0 * p.s);

    // first snapshot with a defined sub-solution time
    std::size_t first = snapshots.size();
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        if (snapshots[i].time - t_offset >= std::max(1.0, p.t_star)) {
            first = i;
            break;
        }
    }
    if (first == snapshots.size())
        throw AlignmentError("compare_with_simulation: no snapshot after the alignment time");

    const Profile& snap = snapshots[first];
    const double tau = snap.time - t_offset;
    // The right quarter of an expanding window is headroom: nodes there can
    // be freshly padded with the far-field state and have not yet received
    // their tail feed, so domination is only meaningful below it.
    constexpr double kTrustFraction = 0.25;
    auto margin = [&](const Profile& u, double t_sub, double shift) {
        const double x_hi =
            u.x_last() > 0.0 ? kTrustFraction * u.x_last() : u.x_last();
        double m = kInf;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            const double xi = u.x_at(static_cast<std::ptrdiff_t>(i));
            if (xi > x_hi) break;
            const double y = xi - shift;
            const double ub = (y <= X_of_t(p, t_sub)) ? p.epsilon
                                                      : cubic_q(w_eval(p, t_sub, y), p.epsilon);
            m = std::min(m, u.values[i] - ub);
        }
        return m;
    };

    // largest shift with domination at the alignment snapshot
    double lo = snap.x0 - 100.0 * X_eta_of_t(p, tau) - 100.0;
    double hi = snap.x_last();
    if (margin(snap, tau, lo) < -tol)
        throw AlignmentError("compare_with_simulation: domination fails even far left");
    for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        (margin(snap, tau, mid) >= -tol ? lo : hi) = mid;
    }
    rep.shift = lo;
    rep.t_align = snap.time;
    rep.aligned = true;
    if (require_plateau_overlap && X_of_t(p, tau) + rep.shift < snap.x0)
        throw AlignmentError("compare_with_simulation: only a vacuous shift dominates (the "
                             "plateau lies outside the window)");

    rep.min_margin = kInf;
    for (std::size_t i = first; i < snapshots.size(); ++i) {
        const double ti = snapshots[i].time - t_offset;
        rep.min_margin = std::min(rep.min_margin, margin(snapshots[i], ti, rep.shift));
        ++rep.snapshots_checked;
    }
    rep.pass = rep.min_margin >= -tol;
    return rep;
}

}  // namespace fracfront::subsol
