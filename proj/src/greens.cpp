#include "fracfront/greens.hpp"

#include <algorithm>
#include <cmath>

#include "fracfront/errors.hpp"
#include "fracfront/numerics.hpp"
#include "fracfront/quadrature.hpp"

namespace fracfront::greens {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogFloor = -41.45;  // exp() ~ 1e-18
// Below the first table node W follows its asymptotic power law; the
// log-log extension there is more accurate than direct quadrature.
constexpr double kTableXiMin = 1e-4;
constexpr int kNodesPerDecade = 64;

}  // namespace

Evaluator::Evaluator(KernelSpec spec, double rel_tol) : spec_(std::move(spec)), rel_tol_(rel_tol) {
    spec_.validate();
    pure_ = (spec_.family == KernelFamily::FractionalPure);
    if (pure_) W1_ = symbol(spec_, 1.0).value;
    plateau_ = has_finite_mass(spec_);
    if (plateau_) mass_ = total_mass(spec_);
}

double Evaluator::atom_mass(double t) const { return plateau_ ? std::exp(-mass_ * t) : 0.0; }

void Evaluator::ensure_table(double xi_max) const {
    if (pure_) return;
    std::lock_guard<std::mutex> lock(mu_);
    if (tab_ximax_ >= xi_max) return;
    const double hi = xi_max * 1.05;
    const double decades = std::log10(hi / kTableXiMin);
    const auto n = static_cast<std::size_t>(std::ceil(decades * kNodesPerDecade)) + 2;
    const auto grid = logspace(kTableXiMin, hi, n);
    tab_logxi_.clear();
    tab_logw_.clear();
    tab_logxi_.reserve(n);
    tab_logw_.reserve(n);
    for (double xi : grid) {
        double w = symbol(spec_, xi).value;
        if (!(w < 0.0)) w = -1e-300;
        tab_logxi_.push_back(std::log(xi));
        tab_logw_.push_back(std::log(-w));
    }
    tab_ximax_ = xi_max;
}

double Evaluator::W_interp(double xi) const {
    if (pure_) return W1_ * std::pow(xi, 2.0 * spec_.s);
    const auto& L = tab_logxi_;
    const auto& Y = tab_logw_;
    const double l = std::log(xi);
    const std::size_t n = L.size();
    if (l <= L.front()) {
        const double slope = (Y[1] - Y[0]) / (L[1] - L[0]);
        return -std::exp(Y[0] + slope * (l - L[0]));
    }
    if (l >= L.back()) {
        const double slope = (Y[n - 1] - Y[n - 2]) / (L[n - 1] - L[n - 2]);
        return -std::exp(Y[n - 1] + slope * (l - L[n - 1]));
    }
    auto it = std::upper_bound(L.begin(), L.end(), l);
    const std::size_t i = static_cast<std::size_t>(it - L.begin()) - 1;
    const double h = L[i + 1] - L[i];
    const double s = (l - L[i]) / h;
    auto slope_at = [&](std::size_t k) {
        if (k == 0) return (Y[1] - Y[0]) / (L[1] - L[0]);
        if (k + 1 >= n) return (Y[n - 1] - Y[n - 2]) / (L[n - 1] - L[n - 2]);
        return (Y[k + 1] - Y[k - 1]) / (L[k + 1] - L[k - 1]);
    };
    const double m0 = slope_at(i), m1 = slope_at(i + 1);
    const double s2 = s * s, s3 = s2 * s;
    const double y = (2.0 * s3 - 3.0 * s2 + 1.0) * Y[i] + (s3 - 2.0 * s2 + s) * h * m0 +
                     (-2.0 * s3 + 3.0 * s2) * Y[i + 1] + (s3 - s2) * h * m1;
    return -std::exp(y);
}

double Evaluator::symbol_at(double xi) const {
    if (xi == 0.0) return 0.0;
    xi = std::abs(xi);
    if (!pure_) ensure_table(std::max(xi, 10.0));
    return W_interp(xi);
}

// Smallest xi with W(xi) t <= log_floor. Plateau symbols never cross
// -mass t, so the target is clamped to the reachable range.
double Evaluator::xi_cutoff(double t, double log_floor) const {
    if (pure_) return std::pow(log_floor / (W1_ * t), 1.0 / (2.0 * spec_.s));
    if (plateau_) log_floor = std::max(log_floor, -0.9 * mass_ * t);
    double ximax = std::max(tab_ximax_, 10.0);
    ensure_table(ximax);
    while (W_interp(ximax) * t > log_floor) {
        ximax *= 4.0;
        if (ximax > 1e9)
            throw ToleranceError("greens: symbol decays too slowly to truncate", 0.0, 1.0);
        ensure_table(ximax);
    }
    double lo = kTableXiMin, hi = ximax;
    for (int k = 0; k < 200 && hi / lo > 1.0 + 1e-12; ++k) {
        const double mid = std::sqrt(lo * hi);
        (W_interp(mid) * t > log_floor ? lo : hi) = mid;
    }
    return hi;
}

Value Evaluator::density_direct(double t, double x) const {
    const double ximax = xi_cutoff(t, kLogFloor);
    if (!pure_) ensure_table(ximax);
    const double xi_half = xi_cutoff(t, -0.7);
    const double abs_tol = std::max(rel_tol_ * xi_half / kPi, 1e-16);

    auto F = [&](double xi) { return std::exp(W_interp(xi) * t); };
    const double first = std::max(ximax * 1e-12, 1e-280);
    const auto osc = quad::oscillatory_cos(F, 0.0, ximax, std::abs(x), abs_tol, first);

    // tangent-line truncation bound at the cutoff
    const double wp = std::abs(W_interp(ximax * 1.01) - W_interp(ximax)) / (0.01 * ximax);
    const double trunc = std::exp(kLogFloor) / std::max(t * wp, 1e-3);

    return {osc.value / kPi, (osc.error + trunc) / kPi};
}

Value Evaluator::density_damped(double t, double x, double delta) const {
    const double ximax = std::sqrt(-kLogFloor / delta);
    ensure_table(ximax);
    auto F = [&](double xi) { return std::exp(W_interp(xi) * t - delta * xi * xi); };
    const double xi_half = std::min(xi_cutoff(t, -0.7), std::sqrt(0.7 / delta));
    const double abs_tol = std::max(rel_tol_ * xi_half / kPi, 1e-16);
    const double first = std::max(ximax * 1e-12, 1e-280);
    const auto osc = quad::oscillatory_cos(F, 0.0, ximax, std::abs(x), abs_tol, first);
    const double trunc = std::exp(kLogFloor) / std::max(2.0 * delta * ximax * t, 1e-6);
    return {osc.value / kPi, (osc.error + trunc) / kPi};
}

Value Evaluator::density(double t, double x) const {
    if (!(t > 0.0)) throw DomainError("greens density: need t > 0");
    if (!plateau_) return density_direct(t, x);

    // Gaussian damping with Richardson extrapolation delta -> 0
    const double d1 = 1e-4, d2 = 5e-5, d3 = 2.5e-5;
    const Value g1 = density_damped(t, x, d1);
    const Value g2 = density_damped(t, x, d2);
    const Value g3 = density_damped(t, x, d3);
    Value out;
    out.value = 2.0 * g3.value - g2.value;
    const double prev = 2.0 * g2.value - g1.value;
    // smeared-atom leakage near the origin at the finest damping
    const double leak =
        atom_mass(t) * 0.5 / std::sqrt(kPi * d3) * std::exp(-x * x / (4.0 * d3));
    out.error = std::abs(out.value - prev) + 2.0 * g3.error + g2.error + leak;
    return out;
}

double Evaluator::tail_constant(double t, double x_probe) const {
    if (!(x_probe > 0.0)) throw DomainError("tail_constant: need x_probe > 0");
    return std::pow(x_probe, 1.0 + 2.0 * spec_.s) * density(t, x_probe).value / t;
}

Value Evaluator::heaviside(double t, double x) const {
    if (!(t > 0.0)) throw DomainError("greens heaviside: need t > 0");
    if (x == 0.0) return {0.5, 0.0};  // even density
    if (x < 0.0) {
        const Value v = heaviside(t, -x);
        return {1.0 - v.value, v.error};
    }
    if (plateau_) return heaviside_table(t, {x}).front();
    // self-similar scale: where the symbol has decayed by ~e^-1
    const double t_char = 1.0 / xi_cutoff(t, -1.0);
    const double X_h = std::max({4.0 * x, 50.0 * t_char, 0.5});

    const double K_fit = tail_constant(t, X_h);
    const double two_s = 2.0 * spec_.s;
    const double remainder = K_fit * t / (two_s * std::pow(X_h, two_s));

    // keep the quadrature clear of the smeared atom of integrable kernels;
    // the continuous part is flat on that scale
    const double x_safe = plateau_ ? 0.06 : 0.0;
    double bridge = 0.0, x_lo = x;
    if (x < x_safe) {
        bridge = density(t, x_safe).value * (x_safe - x);
        x_lo = x_safe;
    }

    quad::Options opt;
    opt.abs_tol = 1e-8;
    opt.rel_tol = 1e-7;
    opt.max_panels = 160;
    const auto gk =
        quad::integrate_lenient([&](double y) { return density(t, y).value; }, x_lo, X_h, opt);

    const double g_err = density(t, x_lo).error;
    Value out;
    out.value = bridge + gk.value + remainder;
    out.error = gk.error + g_err * std::min(X_h - x_lo, 10.0 * t_char) + 0.05 * remainder +
                0.1 * bridge;
    return out;
}

std::vector<Value> Evaluator::heaviside_table(double t, std::vector<double> xs) const {
    if (!(t > 0.0)) throw DomainError("greens heaviside: need t > 0");
    std::vector<Value> out(xs.size());

    // work on the positive half line; negatives reflect through v(-x) = 1 - v(x)
    std::vector<double> pos;
    for (double x : xs)
        if (x != 0.0) pos.push_back(std::abs(x));
    if (pos.empty()) {
        for (auto& v : out) v = {0.5, 0.0};
        return out;
    }
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());

    const double t_char = 1.0 / xi_cutoff(t, -1.0);
    const double x_safe = plateau_ ? 0.06 : pos.front();
    const double X_h = std::max({4.0 * pos.back(), 50.0 * t_char, 2.0 * x_safe, 0.5});

    // integration nodes: the requested points padded to a <= 12% geometric mesh
    std::vector<double> nodes{std::max(x_safe, 1e-300)};
    for (double x : pos)
        if (x > nodes.front()) nodes.push_back(x);
    nodes.push_back(X_h);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::vector<double> grid;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        grid.push_back(nodes[i]);
        const double ratio = nodes[i + 1] / nodes[i];
        const auto extra = static_cast<std::size_t>(std::ceil(std::log(ratio) / std::log(1.12)));
        for (std::size_t k = 1; k < extra; ++k)
            grid.push_back(nodes[i] * std::pow(ratio, static_cast<double>(k) / extra));
    }
    grid.push_back(nodes.back());

    std::vector<double> G(grid.size()), Gerr(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Value g = density(t, grid[i]);
        G[i] = g.value;
        Gerr[i] = g.error;
    }

    const double two_s = 2.0 * spec_.s;
    const double K_fit = std::pow(X_h, 1.0 + two_s) * G.back() / t;
    const double remainder = K_fit * t / (two_s * std::pow(X_h, two_s));

    // cumulative trapezoid from the horizon inward
    std::vector<double> V(grid.size()), Verr(grid.size());
    V.back() = remainder;
    Verr.back() = 0.05 * remainder;
    for (std::size_t i = grid.size() - 1; i-- > 0;) {
        const double w = grid[i + 1] - grid[i];
        V[i] = V[i + 1] + 0.5 * w * (G[i] + G[i + 1]);
        // second-difference estimate of the panel curvature error
        double curv = 0.0;
        if (i + 2 < grid.size()) curv = std::abs(G[i + 2] - 2.0 * G[i + 1] + G[i]);
        Verr[i] = Verr[i + 1] + 0.5 * w * (Gerr[i] + Gerr[i + 1]) + w * curv / 12.0;
    }

    auto v_at = [&](double x) -> Value {
        if (x >= grid.back()) {
            const double k = std::pow(x, 1.0 + two_s) * G.back() / t;  // frozen tail shape
            return {k * t / (two_s * std::pow(x, two_s)), 0.1 * remainder};
        }
        if (x <= grid.front()) {  // flat continuation across the atom-smear gap
            const double bridge = G.front() * (grid.front() - x);
            return {V.front() + bridge, Verr.front() + 0.1 * bridge};
        }
        const auto it = std::lower_bound(grid.begin(), grid.end(), x);
        const auto i = static_cast<std::size_t>(it - grid.begin());
        if (grid[i] == x) return {V[i], Verr[i]};
        const double w = grid[i] - x;
        return {V[i] + 0.5 * w * (G[i - 1] + G[i]), Verr[i] + 0.5 * w * (Gerr[i - 1] + Gerr[i])};
    };

    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (xs[k] == 0.0) {
            out[k] = {0.5, 0.0};
        } else if (xs[k] > 0.0) {
            out[k] = v_at(xs[k]);
        } else {
            const Value v = v_at(-xs[k]);
            out[k] = {1.0 - v.value, v.error};
        }
    }
    return out;
}

Evaluator::FlatteningReport Evaluator::flattening_check(double t, double x_lo, double x_hi,
                                                        std::size_t n_samples) const {
    if (!(x_lo > 0.0)) throw DomainError("flattening_check: need x_lo > 0");
    if (!(x_hi > x_lo)) throw DomainError("flattening_check: need x_hi > x_lo");
    const auto xs = logspace(x_lo, x_hi, std::max<std::size_t>(n_samples, 2));
    FlatteningReport rep;
    rep.C0_estimate = 1e300;
    const double expo = 1.0 + 2.0 * spec_.s;
    for (double x : xs) {
        const Value g = density(t, x);
        const double scaled = std::pow(x, expo) * g.value / t;
        const double scaled_err = std::pow(x, expo) * g.error / t;
        rep.worst_error = std::max(rep.worst_error, scaled_err);
        if (scaled < rep.C0_estimate) {
            rep.C0_estimate = scaled;
            rep.x_at_min = x;
        }
    }
    rep.pass = rep.C0_estimate > 0.0 && rep.C0_estimate > 10.0 * rep.worst_error;
    return rep;
}

GreensResult greens_table(const Evaluator& ev, double t, const std::vector<double>& x_grid,
                          double flat_lo, double flat_hi) {
    GreensResult out;
    out.t = t;
    out.x_grid = x_grid;
    std::sort(out.x_grid.begin(), out.x_grid.end());
    out.G_values.reserve(x_grid.size());
    out.G_errors.reserve(x_grid.size());
    for (double x : out.x_grid) {
        const Value g = ev.density(t, x);
        out.G_values.push_back(g.value);
        out.G_errors.push_back(g.error);
    }
    const double xmax = out.x_grid.back();
    out.tail_constant_estimate = ev.tail_constant(t, xmax);
    const auto flat = ev.flattening_check(t, flat_lo, flat_hi);
    out.C0_estimate = flat.C0_estimate;
    out.flattening_pass = flat.pass;
    out.flattening_worst_error = flat.worst_error;

    if (out.x_grid.front() == 0.0) {
        // the damped path smears the atom over |x| <~ 8 sqrt(2 delta); keep
        // the quadrature outside it so the analytic atom is not counted twice
        const double x_safe = ev.plateau_symbol() ? 0.06 : 0.0;
        std::size_t i0 = 0;
        while (i0 + 1 < out.x_grid.size() && out.x_grid[i0] < x_safe) ++i0;
        double trapz = out.G_values[i0] * out.x_grid[i0];  // flat continuation on [0, x0]
        for (std::size_t i = i0; i + 1 < out.x_grid.size(); ++i)
            trapz += 0.5 * (out.G_values[i] + out.G_values[i + 1]) *
                     (out.x_grid[i + 1] - out.x_grid[i]);
        const double two_s = 2.0 * ev.kernel().s;
        const double tail = out.tail_constant_estimate * t / (two_s * std::pow(xmax, two_s));
        out.mass = 2.0 * (trapz + tail) + ev.atom_mass(t);
    }
    return out;
}

Value greens_eval(const KernelSpec& spec, double t, double x) {
    return Evaluator(spec).density(t, x);
}

double tail_constant(const KernelSpec& spec, double t, double x_probe) {
    return Evaluator(spec).tail_constant(t, x_probe);
}

Evaluator::FlatteningReport flattening_check(const KernelSpec& spec, double t, double x_lo,
                                             double x_hi) {
    return Evaluator(spec).flattening_check(t, x_lo, x_hi);
}

Value heaviside_linear_solution(const KernelSpec& spec, double t, double x) {
    return Evaluator(spec).heaviside(t, x);
}

}  // namespace fracfront::greens
