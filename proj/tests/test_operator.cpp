#include <doctest.h>

#include <cmath>

#include "fracfront/errors.hpp"
#include "fracfront/kernel.hpp"
#include "fracfront/nonlocal_operator.hpp"
#include "fracfront/numerics.hpp"
#include "support/oracles.hpp"

using namespace fracfront;

namespace {

Profile constant_profile(double value, double x0, double dx, std::size_t n) {
    Profile p;
    p.x0 = x0;
    p.dx = dx;
    p.values.assign(n, value);
    p.left_state = value;
    p.right_state = value;
    return p;
}

// 0.5 + 0.4 sin(xi x) on a window with edges at multiples of 2 pi / xi,
// so the far-field states equal the mean exactly.
Profile sine_profile(double xi, double dx, double half_width) {
    const double period = 2.0 * M_PI / xi;
    const double L = std::ceil(half_width / period) * period;
    Profile p;
    p.dx = dx;
    const auto half = static_cast<std::size_t>(std::llround(L / dx));
    p.x0 = -static_cast<double>(half) * dx;
    p.values.resize(2 * half + 1);
    for (std::size_t i = 0; i < p.values.size(); ++i)
        p.values[i] = 0.5 + 0.4 * std::sin(xi * p.x_at(static_cast<std::ptrdiff_t>(i)));
    p.left_state = p.values.front();
    p.right_state = p.values.back();
    return p;
}

}  // namespace

TEST_CASE("constant profile maps to exactly zero") {
    const auto spec = fractional_pure(0.25, 1.0);
    const auto p = constant_profile(0.7, -20.0, 0.5, 101);
    const auto d = apply_all(spec, p);
    for (double v : d) CHECK(v == 0.0);
}

TEST_CASE("apply_all agrees with pointwise apply exactly") {
    const auto spec = fractional_pure(0.25, 1.0);
    Profile p = constant_profile(0.0, -30.0, 0.5, 161);
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        const double x = p.x_at(static_cast<std::ptrdiff_t>(i));
        p.values[i] = 0.5 * std::exp(-0.05 * x * x) + 0.2 / (1.0 + x * x);
    }
    p.left_state = p.values.front();
    p.right_state = p.values.back();
    const auto all = apply_all(spec, p, 2);
    OperatorPlan plan(spec, p.dx);
    XorShift64 rng(7);
    for (int k = 0; k < 25; ++k) {
        const auto i = static_cast<std::size_t>(rng.uniform(0.0, 1.0) * 160.0);
        CHECK(all[i] == plan.apply(p, i));
    }
}

TEST_CASE("band-limited profiles reproduce the symbol multiplier within 1%") {
    const auto spec = fractional_pure(0.25, 1.0);
    for (double xi : {0.5, 1.0, 2.0}) {
        const double dx = std::min(0.1, 2.0 * M_PI / xi / 60.0);
        const auto p = sine_profile(xi, dx, 180.0);
        const double W = symbol(spec, xi).value;
        OperatorPlan plan(spec, dx);
        // evaluate where |sin| is large: nearest node to pi/(2 xi)
        const auto i = static_cast<std::size_t>(
            std::llround((M_PI / (2.0 * xi) - p.x0) / dx));
        const double expected = 0.4 * W * std::sin(xi * p.x_at(static_cast<std::ptrdiff_t>(i)));
        const double got = plan.apply(p, i);
        CHECK(got == doctest::Approx(expected).epsilon(0.01));
    }
}

TEST_CASE("step profile far field matches the analytic tail estimate") {
    // u = 1 left of 0, 0 right of 0; far to the right the operator sees
    // (1 - u(x)) times the left-tail mass, within the comparability band.
    const auto spec = fractional_pure(0.25, 1.0);
    const double dx = 0.25;
    Profile p;
    p.x0 = -60.0;
    p.dx = dx;
    p.values.resize(static_cast<std::size_t>(std::llround(240.0 / dx)) + 1);
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        const double x = p.x_at(static_cast<std::ptrdiff_t>(i));
        p.values[i] = x < 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0);
    }
    p.left_state = 1.0;
    p.right_state = 0.0;
    OperatorPlan plan(spec, dx);
    const double x_eval = 120.0;
    const auto i = static_cast<std::size_t>(std::llround((x_eval - p.x0) / dx));
    const double got = plan.apply(p, i);
    const double leading = 1.0 / (2.0 * 0.25) * std::pow(x_eval, -0.5);  // c/(2s) x^{-2s}
    CHECK(got >= leading / spec.J0 * 0.9);
    CHECK(got <= leading * spec.J0 * 1.1);
}

TEST_CASE("linearity in the profile") {
    const auto spec = fractional_pure(0.3, 1.0);
    const double dx = 0.5;
    const std::size_t n = 161;
    Profile u = constant_profile(0.0, -40.0, dx, n);
    Profile v = u;
    XorShift64 rng(11);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = u.x_at(static_cast<std::ptrdiff_t>(i));
        u.values[i] = 0.4 + 0.3 * std::exp(-0.02 * x * x);
        v.values[i] = 0.3 + 0.2 * std::cos(0.2 * x) * std::exp(-0.01 * x * x);
    }
    u.left_state = u.values.front();
    u.right_state = u.values.back();
    v.left_state = v.values.front();
    v.right_state = v.values.back();

    const double a = 0.6, b = 0.4;
    Profile w = u;
    for (std::size_t i = 0; i < n; ++i) w.values[i] = a * u.values[i] + b * v.values[i];
    w.left_state = a * u.left_state + b * v.left_state;
    w.right_state = a * u.right_state + b * v.right_state;

    OperatorPlan plan(spec, dx);
    for (std::size_t i : {std::size_t{5}, std::size_t{80}, std::size_t{150}}) {
        const double lhs = plan.apply(w, i);
        const double rhs = a * plan.apply(u, i) + b * plan.apply(v, i);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("translation equivariance by whole cells") {
    const auto spec = truncated_power_tail(0.25, 1.0);
    const double dx = 0.5;
    const std::size_t n = 201;
    Profile u = constant_profile(0.0, -50.0, dx, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = u.x_at(static_cast<std::ptrdiff_t>(i));
        u.values[i] = 1.0 / (1.0 + std::exp(1.3 * x));
    }
    u.left_state = u.values.front();
    u.right_state = u.values.back();

    Profile shifted = u;
    shifted.x0 = u.x0 + 4.0 * dx;  // same values, shifted grid

    OperatorPlan plan(spec, dx);
    for (std::size_t i : {std::size_t{30}, std::size_t{100}, std::size_t{170}})
        CHECK(plan.apply(u, i) == plan.apply(shifted, i));
}

TEST_CASE("sign at an interior maximum") {
    const auto spec = fractional_pure(0.25, 1.0);
    const double dx = 0.25;
    const std::size_t n = 321;
    Profile p = constant_profile(0.0, -40.0, dx, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = p.x_at(static_cast<std::ptrdiff_t>(i));
        p.values[i] = 0.2 + 0.6 * std::exp(-0.1 * x * x);
    }
    p.left_state = p.values.front();
    p.right_state = p.values.back();
    OperatorPlan plan(spec, dx);
    const auto imax = static_cast<std::size_t>(std::llround((0.0 - p.x0) / dx));
    CHECK(plan.apply(p, imax) <= 0.0);
}

TEST_CASE("window doubling changes interior values less than the tail closure bound") {
    const auto spec = fractional_pure(0.25, 1.0);
    const double dx = 0.5;
    auto make = [&](double L) {
        Profile p;
        p.x0 = -L;
        p.dx = dx;
        const auto n = static_cast<std::size_t>(std::llround(2.0 * L / dx)) + 1;
        p.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = p.x_at(static_cast<std::ptrdiff_t>(i));
            p.values[i] = 1.0 / (1.0 + std::exp(x));
        }
        p.left_state = 1.0;
        p.right_state = 0.0;
        return p;
    };
    const double L = 40.0;
    const auto small = make(L);
    const auto big = make(2.0 * L);
    OperatorPlan plan(spec, dx);
    const auto off = static_cast<std::ptrdiff_t>(std::llround(L / dx));
    // analytic closure bound: both sides, c/(2s L^{2s}) each
    const double bound = 2.0 * (1.0 / (2.0 * 0.25)) * std::pow(L, -0.5);
    for (std::ptrdiff_t i : {off - 30, off, off + 30}) {
        const double a = plan.apply(small, static_cast<std::size_t>(i));
        const double b = plan.apply(big, static_cast<std::size_t>(i + off));
        CHECK(std::abs(a - b) <= bound);
    }
}

TEST_CASE("window smaller than R0 is rejected") {
    auto spec = fractional_pure(0.25, 1.0);
    spec.R0 = 40.0;
    const auto p = constant_profile(0.3, -4.0, 0.5, 17);
    CHECK_THROWS_AS((void)apply(spec, p, 8), ConfigError);
}

TEST_CASE("invalid profile is rejected") {
    const auto spec = fractional_pure(0.25, 1.0);
    auto p = constant_profile(0.3, -20.0, 0.5, 81);
    p.values[40] = 1.5;
    CHECK_THROWS_AS((void)apply(spec, p, 10), InvariantError);
}
