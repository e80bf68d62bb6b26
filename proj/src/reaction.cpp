#include "fracfront/reaction.hpp"

#include <algorithm>
#include <cmath>

#include "fracfront/csv.hpp"
#include "fracfront/errors.hpp"

namespace fracfront {

namespace {

double interp_table(const std::vector<std::pair<double, double>>& t, double u) {
    if (u <= t.front().first) return t.front().second;
    if (u >= t.back().first) return t.back().second;
    auto it = std::upper_bound(t.begin(), t.end(), std::make_pair(u, 0.0));
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (u - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

}  // namespace

void IgnitionNonlinearity::validate() const {
    if (!(theta > 0.0) || !(theta < 1.0))
        throw InvariantError("reaction: theta must be in (0, 1)");
    if (family == ReactionFamily::QuadraticBump) {
        // amplitude 0 switches the reaction off (linear-evolution diagnostics)
        if (!(amplitude >= 0.0)) throw InvariantError("reaction: amplitude must be nonnegative");
        return;
    }
    if (table.size() < 2) throw InvariantError("tabulated reaction: need >= 2 samples");
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& [u, f] = table[i];
        if (!(u >= 0.0) || !(u <= 1.0))
            throw InvariantError("tabulated reaction: u samples must lie in [0, 1]");
        if (i > 0 && !(u > table[i - 1].first))
            throw InvariantError("tabulated reaction: u samples must be strictly increasing");
        if (f < 0.0) throw InvariantError("tabulated reaction: f must be nonnegative");
        if (u <= theta && f != 0.0)
            throw InvariantError("tabulated reaction: f must vanish on [0, theta]");
    }
    if (table.back().first == 1.0 && table.back().second != 0.0)
        throw InvariantError("tabulated reaction: f(1) must be 0");
}

IgnitionNonlinearity quadratic_bump(double theta, double amplitude) {
    IgnitionNonlinearity nl;
    nl.family = ReactionFamily::QuadraticBump;
    nl.theta = theta;
    nl.amplitude = amplitude;
    nl.validate();
    return nl;
}

IgnitionNonlinearity tabulated_reaction(double theta,
                                        std::vector<std::pair<double, double>> table) {
    IgnitionNonlinearity nl;
    nl.family = ReactionFamily::Tabulated;
    nl.theta = theta;
    nl.table = std::move(table);
    std::sort(nl.table.begin(), nl.table.end());
    nl.validate();
    return nl;
}

IgnitionNonlinearity tabulated_reaction_from_csv(double theta, const std::string& path) {
    return tabulated_reaction(theta, read_two_column_csv(path));
}

double eval_f(const IgnitionNonlinearity& nl, double u) {
    constexpr double clamp_tol = 1e-8;
    if (u < -clamp_tol || u > 1.0 + clamp_tol)
        throw DomainError("eval_f: u outside [0, 1] beyond clamp tolerance (solver overshoot?)");
    u = std::clamp(u, 0.0, 1.0);
    if (u <= nl.theta) return 0.0;
    if (nl.family == ReactionFamily::QuadraticBump)
        return nl.amplitude * (u - nl.theta) * (1.0 - u);
    return interp_table(nl.table, u);
}

double min_on_interval(const IgnitionNonlinearity& nl, double lo, double hi) {
    if (!(lo > nl.theta))
        throw DomainError("min_on_interval: lo must exceed theta (else the minimum is 0)");
    if (!(lo <= hi) || !(hi <= 1.0)) throw DomainError("min_on_interval: need lo <= hi <= 1");
    if (nl.family == ReactionFamily::QuadraticBump)
        return std::min(eval_f(nl, lo), eval_f(nl, hi));  // concave parabola
    double m = std::min(eval_f(nl, lo), eval_f(nl, hi));
    for (const auto& [u, f] : nl.table)
        if (u > lo && u < hi) m = std::min(m, eval_f(nl, u));
    return m;
}

double max_of_f(const IgnitionNonlinearity& nl) {
    if (nl.family == ReactionFamily::QuadraticBump) {
        const double peak = 0.5 * (nl.theta + 1.0);
        return eval_f(nl, peak);
    }
    double m = 0.0;
    for (const auto& [u, f] : nl.table) m = std::max(m, f);
    return m;
}

double lipschitz_bound(const IgnitionNonlinearity& nl) {
    if (nl.family == ReactionFamily::QuadraticBump)
        return nl.amplitude * (1.0 - nl.theta);
    double lip = 0.0;
    double prev_u = 0.0, prev_f = 0.0;
    bool first = true;
    for (const auto& [u, f] : nl.table) {
        if (!first && u > prev_u) lip = std::max(lip, std::abs(f - prev_f) / (u - prev_u));
        prev_u = u;
        prev_f = f;
        first = false;
    }
    return lip;
}

}  // namespace fracfront
