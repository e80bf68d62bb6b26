#include "fracfront/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracfront/csv.hpp"
#include "fracfront/errors.hpp"
#include "fracfront/numerics.hpp"
#include "fracfront/quadrature.hpp"

namespace fracfront {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// J restricted to z > 0 as a chain of exact power pieces A z^p.
struct PowerPiece {
    double lo, hi;
    double A, p;
};

std::vector<PowerPiece> positive_pieces(const KernelSpec& spec) {
    const double tail_p = -1.0 - 2.0 * spec.s;
    switch (spec.family) {
        case KernelFamily::FractionalPure:
            return {{0.0, kInf, spec.c, tail_p}};
        case KernelFamily::TruncatedPowerTail:
            return {{0.0, 1.0, spec.c, 0.0}, {1.0, kInf, spec.c, tail_p}};
        case KernelFamily::TabulatedSymmetric: {
            std::vector<std::pair<double, double>> rows;
            for (const auto& r : spec.table)
                if (r.first > 0.0) rows.push_back(r);
            if (rows.size() < 2)
                throw InvariantError("tabulated kernel: need >= 2 positive-z samples");
            std::vector<PowerPiece> pieces;
            // below the first node: extend the first segment's slope
            {
                const double p = std::log(rows[1].second / rows[0].second) /
                                 std::log(rows[1].first / rows[0].first);
                const double A = rows[0].second / std::pow(rows[0].first, p);
                pieces.push_back({0.0, rows[0].first, A, p});
            }
            for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
                const double p = std::log(rows[i + 1].second / rows[i].second) /
                                 std::log(rows[i + 1].first / rows[i].first);
                const double A = rows[i].second / std::pow(rows[i].first, p);
                pieces.push_back({rows[i].first, rows[i + 1].first, A, p});
            }
            // declared power tail past the last node
            {
                const auto& last = rows.back();
                const double A = last.second * std::pow(last.first, -tail_p);
                pieces.push_back({last.first, kInf, A, tail_p});
            }
            return pieces;
        }
    }
    throw InvariantError("unknown kernel family");
}

double piece_moment(const PowerPiece& pc, int m, double a, double b) {
    const double q = static_cast<double>(m) + pc.p + 1.0;
    if (a == 0.0 && q <= 0.0) throw DomainError("kernel moment diverges at 0");
    if (b == kInf && q >= 0.0) throw DomainError("kernel moment diverges at infinity");
    if (std::abs(q) < 1e-12) return pc.A * std::log(b / a);
    const double upper = (b == kInf) ? 0.0 : pc.A * std::pow(b, q) / q;
    const double lower = (a == 0.0) ? 0.0 : pc.A * std::pow(a, q) / q;
    return upper - lower;
}

double eval_pieces(const std::vector<PowerPiece>& pieces, double z) {
    for (const auto& pc : pieces)
        if (z < pc.hi || pc.hi == kInf) return pc.A * std::pow(z, pc.p);
    return pieces.back().A * std::pow(z, pieces.back().p);
}

// Interior breakpoints where J is not smooth (used as quadrature splits).
std::vector<double> kink_points(const KernelSpec& spec) {
    std::vector<double> out;
    for (const auto& pc : positive_pieces(spec))
        if (pc.lo > 0.0) out.push_back(pc.lo);
    return out;
}

// Integral_Y^inf cos(omega z) A z^p dz, p < -1, by repeated integration by
// parts. Asymptotic series: truncated at its smallest term.
SymbolValue ibp_tail_cos(double A, double p, double Y, double omega, double abs_tol) {
    const double s = std::sin(omega * Y), c = std::cos(omega * Y);
    double coef = A;           // h_k(z) = coef * z^{p-k}
    double mult = 1.0;         // accumulated (+-1/omega) factors
    bool cos_mode = true;
    double value = 0.0;
    double last_term = kInf;
    for (int k = 0; k < 40; ++k) {
        const double hk = coef * std::pow(Y, p - k);
        // trig-free envelope |h_k| / omega^{k+1}; the raw terms alternate
        // sin/cos factors so the divergence test must ignore them
        const double env = std::abs(mult * hk / omega);
        if (env > last_term && k > 2) return {value, last_term};
        double term;
        if (cos_mode) {
            term = mult * (-hk * s / omega);
            mult *= -1.0 / omega;
            cos_mode = false;
        } else {
            term = mult * (hk * c / omega);
            mult *= 1.0 / omega;
            cos_mode = true;
        }
        value += term;
        last_term = env;
        // after adding term k the remainder is mult * I(h_{k+1}) and
        // Integral_Y^inf |h_{k+1}| = |coef_k| Y^{p-k}, which equals env
        if (env < abs_tol) return {value, env};
        coef *= (p - k);
    }
    return {value, last_term};
}

double derive_J1(const KernelSpec& spec) {
    // tight second-moment constant: Integral_0^1 z^2 J dz
    KernelSpec tmp = spec;
    tmp.J1 = 1.0;  // placeholder, not used by moments
    return partial_moment(tmp, 2, 0.0, 1.0);
}

}  // namespace

void KernelSpec::validate() const {
    if (!(s > 0.0) || !(s <= 0.5)) throw InvariantError("kernel: s must be in (0, 1/2]");
    if (!(c > 0.0)) throw InvariantError("kernel: c must be positive");
    if (!(J0 > 0.0)) throw InvariantError("kernel: J0 must be positive");
    if (!(J1 > 0.0)) throw InvariantError("kernel: J1 must be positive");
    if (!(R0 >= 1.0)) throw InvariantError("kernel: R0 must be >= 1");
    if (family == KernelFamily::TabulatedSymmetric) {
        if (table.size() < 2) throw InvariantError("tabulated kernel: need >= 2 samples");
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (!(table[i].second > 0.0))
                throw InvariantError("tabulated kernel: J samples must be positive");
            if (i > 0 && !(table[i].first > table[i - 1].first))
                throw InvariantError("tabulated kernel: z samples must be strictly increasing");
            if (table[i].first == 0.0)
                throw InvariantError("tabulated kernel: z = 0 sample not allowed");
        }
        bool any_pos = false;
        for (const auto& r : table) any_pos |= (r.first > 0.0);
        if (!any_pos) throw InvariantError("tabulated kernel: need positive-z samples");
    }
}

KernelSpec fractional_pure(double s, double c) {
    KernelSpec k;
    k.family = KernelFamily::FractionalPure;
    k.s = s;
    k.c = c;
    k.J0 = std::max(c, 1.0 / c);
    k.J1 = c / (2.0 - 2.0 * s);
    k.R0 = 1.0;
    k.validate();
    return k;
}

double stable_symbol_constant(double s) {
    const double a = 2.0 * s;
    if (!(a > 0.0) || !(a < 2.0)) throw DomainError("stable_symbol_constant: need 2s in (0,2)");
    if (std::abs(a - 1.0) < 1e-12) return 3.14159265358979323846;  // 2 * pi/2
    return 2.0 * std::tgamma(2.0 - a) * std::cos(1.57079632679489661923 * a) / (a * (1.0 - a));
}

KernelSpec fractional_pure_unit_symbol(double s) {
    return fractional_pure(s, 1.0 / stable_symbol_constant(s));
}

KernelSpec truncated_power_tail(double s, double c) {
    KernelSpec k;
    k.family = KernelFamily::TruncatedPowerTail;
    k.s = s;
    k.c = c;
    k.J0 = std::max(c, 1.0 / c);
    k.J1 = c / 3.0;
    k.R0 = 1.0;
    k.validate();
    return k;
}

KernelSpec truncated_power_tail_unit_mass(double s) {
    // mass = 2c + c/s
    return truncated_power_tail(s, s / (2.0 * s + 1.0));
}

KernelSpec tabulated_kernel(double s, std::vector<std::pair<double, double>> table, double R0) {
    KernelSpec k;
    k.family = KernelFamily::TabulatedSymmetric;
    k.s = s;
    k.table = std::move(table);
    std::sort(k.table.begin(), k.table.end());
    k.R0 = R0;
    k.c = power_tail_amplitude(k);
    // J0 large enough that both tail comparisons hold on the sampled range
    double up = 1.0, down = 1.0;
    for (const auto& r : k.table) {
        if (r.first >= 1.0) up = std::max(up, r.second * std::pow(r.first, 1.0 + 2.0 * s));
        if (r.first >= R0) {
            const double jz = r.second * std::pow(r.first, 1.0 + 2.0 * s);
            if (jz > 0.0) down = std::max(down, 1.0 / jz);
        }
    }
    k.J0 = std::max(up, down) * (1.0 + 1e-12);
    k.J1 = derive_J1(k) * (1.0 + 1e-12);
    k.validate();
    return k;
}

KernelSpec tabulated_kernel_from_csv(double s, const std::string& path, double R0) {
    auto rows = read_two_column_csv(path);
    for (const auto& r : rows)
        if (!(r.first > 0.0)) throw ConfigError(path, "tabulated kernel: z must be positive");
    return tabulated_kernel(s, std::move(rows), R0);
}

double eval_kernel(const KernelSpec& spec, double z) {
    if (z == 0.0) throw DomainError("eval_kernel: z = 0 (density singular at the origin)");
    if (spec.family == KernelFamily::TabulatedSymmetric) {
        bool has_negative = false;
        for (const auto& r : spec.table) has_negative |= (r.first < 0.0);
        if (has_negative && z < 0.0) {
            // directional table: mirror the negative rows onto z > 0
            KernelSpec neg = spec;
            neg.table.clear();
            for (const auto& r : spec.table)
                if (r.first < 0.0) neg.table.emplace_back(-r.first, r.second);
            std::sort(neg.table.begin(), neg.table.end());
            if (neg.table.size() < 2) return eval_pieces(positive_pieces(spec), -z);
            return eval_pieces(positive_pieces(neg), -z);
        }
    }
    return eval_pieces(positive_pieces(spec), std::abs(z));
}

double partial_moment(const KernelSpec& spec, int m, double a, double b) {
    if (!(a >= 0.0) || !(b > a)) throw DomainError("partial_moment: need 0 <= a < b");
    double total = 0.0;
    for (const auto& pc : positive_pieces(spec)) {
        const double lo = std::max(a, pc.lo);
        const double hi = std::min(b, pc.hi);
        if (hi > lo) total += piece_moment(pc, m, lo, hi);
    }
    return total;
}

double power_tail_start(const KernelSpec& spec) {
    const auto pieces = positive_pieces(spec);
    return pieces.back().lo;
}

double power_tail_amplitude(const KernelSpec& spec) {
    const auto pieces = positive_pieces(spec);
    return pieces.back().A;
}

bool has_finite_mass(const KernelSpec& spec) {
    const auto first = positive_pieces(spec).front();
    return first.p > -1.0;
}

double total_mass(const KernelSpec& spec) {
    if (!has_finite_mass(spec)) throw DomainError("total_mass: kernel is not integrable");
    return 2.0 * partial_moment(spec, 0, 0.0, kInf);
}

HypothesisReport verify_hypothesis(const KernelSpec& spec, const std::vector<double>& z_samples) {
    if (z_samples.empty()) throw DomainError("verify_hypothesis: empty sample set");
    HypothesisReport rep;
    const double slack = 1e-12;

    for (double z : z_samples) {
        const double jp = eval_kernel(spec, z);
        const double jm = eval_kernel(spec, -z);
        if (std::abs(jp - jm) > slack * std::max(jp, jm)) {
            rep.symmetric = false;
            rep.witness_symmetric = z;
            break;
        }
    }

    {
        // Integral_{|z|<=1} z^2 J dz by quadrature on (0, 1], log variable.
        const double floor = 1e-10;
        auto f = [&](double z) { return z * z * eval_kernel(spec, z); };
        quad::Options opt;
        opt.rel_tol = 1e-12;
        opt.abs_tol = 1e-15;
        for (double kk : kink_points(spec))
            if (kk < 1.0) opt.split_points.push_back(kk);
        const auto q = quad::integrate_log(f, floor, 1.0, opt);
        const double below = partial_moment(spec, 2, 0.0, floor);
        const double two_sided = 2.0 * (q.value + below);
        if (two_sided > 2.0 * spec.J1 * (1.0 + 1e-9) + 1e-15) {
            rep.moment_bound = false;
            rep.witness_moment = two_sided;
        }
    }

    const double expo = 1.0 + 2.0 * spec.s;
    for (double z : z_samples) {
        if (z < 1.0) continue;
        const double bound = spec.J0 * std::pow(z, -expo);
        if (eval_kernel(spec, z) > bound * (1.0 + slack)) {
            rep.tail_upper = false;
            rep.witness_tail_upper = z;
            break;
        }
    }
    for (double z : z_samples) {
        if (z < spec.R0) continue;
        const double bound = std::pow(z, -expo) / spec.J0;
        if (eval_kernel(spec, z) < bound * (1.0 - slack)) {
            rep.tail_lower = false;
            rep.witness_tail_lower = z;
            break;
        }
    }
    return rep;
}

SymbolValue symbol(const KernelSpec& spec, double xi, double rel_tol) {
    spec.validate();
    if (xi == 0.0) return {0.0, 0.0};
    const double omega = std::abs(xi);

    const double zps = power_tail_start(spec);
    const double tail_A = power_tail_amplitude(spec);
    const double tail_p = -1.0 - 2.0 * spec.s;

    double Y = std::max({zps, spec.R0, 32.0 / omega});
    double z_floor = std::min(0.02 / omega, 0.25 * Y);

    // overall scale for absolute tolerances
    const double zc = std::min(1.0 / omega, Y);
    const double scale =
        omega * omega * partial_moment(spec, 2, 0.0, zc) + 2.0 * partial_moment(spec, 0, zc, kInf);
    const double abs_tol = 0.5 * rel_tol * scale;

    // [0, z_floor]: cos(w z) - 1 = -w^2 z^2/2 + w^4 z^4/24 - ...
    const double m2 = partial_moment(spec, 2, 0.0, z_floor);
    const double m4 = partial_moment(spec, 4, 0.0, z_floor);
    const double m6 = partial_moment(spec, 6, 0.0, z_floor);
    const double w2 = omega * omega;
    const double sub = -0.5 * w2 * m2 + w2 * w2 / 24.0 * m4;
    const double sub_err = w2 * w2 * w2 / 720.0 * m6;

    // [z_floor, Y]: Filon cosine integral minus the exact mass
    auto J = [&spec](double z) { return eval_kernel(spec, z); };
    const auto osc =
        quad::oscillatory_cos(J, z_floor, Y, omega, abs_tol, z_floor, 20000, kink_points(spec));
    const double mid = osc.value - partial_moment(spec, 0, z_floor, Y);

    // [Y, inf): pure power piece, integrated by parts
    const auto tail_cos = ibp_tail_cos(tail_A, tail_p, Y, omega, abs_tol);
    const double tail = tail_cos.value - partial_moment(spec, 0, Y, kInf);

    SymbolValue out;
    out.value = 2.0 * (sub + mid + tail);
    out.error = 2.0 * (sub_err + osc.error + tail_cos.error);
    if (out.error > rel_tol * std::max(std::abs(out.value), scale) * 20.0)
        throw ToleranceError("symbol: quadrature tolerance not met", out.value, out.error);
    if (out.value > 0.0) out.value = 0.0;  // clamp round-off at tiny xi
    return out;
}

FourierSymbol symbol_table(const KernelSpec& spec, const std::vector<double>& xi_grid) {
    FourierSymbol out;
    out.xi_grid = xi_grid;
    std::sort(out.xi_grid.begin(), out.xi_grid.end());
    out.W_values.resize(out.xi_grid.size());
    for (std::size_t i = 0; i < out.xi_grid.size(); ++i) {
        if (!(out.xi_grid[i] > 0.0)) throw DomainError("symbol_table: frequencies must be > 0");
        out.W_values[i] = symbol(spec, out.xi_grid[i]).value;
    }
    const double hi = std::min(1e-2, out.xi_grid.front() * 10.0);
    const auto fit = fit_small_freq_exponent(spec, hi * 0.1, hi);
    out.small_freq_constant = fit.constant;
    return out;
}

SmallFreqFit fit_small_freq_exponent(const KernelSpec& spec, double xi_lo, double xi_hi,
                                     std::size_t n_points) {
    if (!(xi_lo > 0.0) || !(xi_hi > xi_lo))
        throw DomainError("fit_small_freq_exponent: need 0 < xi_lo < xi_hi");
    const auto grid = logspace(xi_lo, xi_hi, std::max<std::size_t>(n_points, 2));
    std::vector<double> lx, ly;
    lx.reserve(grid.size());
    ly.reserve(grid.size());
    for (double xi : grid) {
        const double w = symbol(spec, xi).value;
        if (!(w < 0.0))
            throw InvariantError("fit_small_freq_exponent: W(xi) >= 0 at xi = " +
                                 format_double(xi));
        lx.push_back(std::log(xi));
        ly.push_back(std::log(-w));
    }
    const auto fit = fit_line(lx, ly);
    return {fit.slope, std::exp(fit.intercept)};
}

}  // namespace fracfront
