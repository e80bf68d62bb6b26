#include <doctest.h>

#include <cmath>

#include "fracfront/errors.hpp"
#include "fracfront/reaction.hpp"

using namespace fracfront;

TEST_CASE("quadratic bump values") {
    const auto nl = quadratic_bump(0.25, 1.0);
    CHECK(eval_f(nl, 0.25) == 0.0);
    CHECK(eval_f(nl, 0.1) == 0.0);
    CHECK(eval_f(nl, 1.0) == 0.0);
    CHECK(eval_f(nl, 0.6) == doctest::Approx(0.35 * 0.4).epsilon(1e-15));
    CHECK(eval_f(nl, 0.25 + 1e-12) > 0.0);  // continuous ignition at theta+
    CHECK_THROWS_AS((void)eval_f(nl, 1.1), DomainError);
    CHECK_THROWS_AS((void)eval_f(nl, -0.1), DomainError);
    CHECK(eval_f(nl, 1.0 + 5e-9) == 0.0);  // clamped within tolerance
}

TEST_CASE("min_on_interval endpoint minimum for the concave bump") {
    const auto nl = quadratic_bump(0.25, 1.0);
    CHECK(min_on_interval(nl, 0.3, 0.5) == doctest::Approx(0.035).epsilon(1e-12));
    CHECK(min_on_interval(nl, 0.5, 0.5) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK_THROWS_AS((void)min_on_interval(nl, 0.25, 0.5), DomainError);
    CHECK_THROWS_AS((void)min_on_interval(nl, 0.5, 0.3), DomainError);

    // property: the reported min is below every dense sample
    const double m = min_on_interval(nl, 0.3, 0.9);
    for (int i = 0; i <= 6000; ++i) {
        const double u = 0.3 + (0.9 - 0.3) * i / 6000.0;
        CHECK(m <= eval_f(nl, u) + 1e-12);
    }
}

TEST_CASE("tabulated family: interpolation and dense-scan minimum oracle") {
    std::vector<std::pair<double, double>> rows;
    const double theta = 0.2;
    for (int i = 0; i <= 50; ++i) {
        const double u = i / 50.0;
        const double f = (u > theta) ? 0.7 * (u - theta) * (1.0 - u) * (1.2 + std::sin(5.0 * u))
                                     : 0.0;
        rows.emplace_back(u, std::max(f, 0.0));
    }
    const auto nl = tabulated_reaction(theta, rows);
    CHECK(eval_f(nl, 0.1) == 0.0);
    CHECK(eval_f(nl, 1.0) == 0.0);

    const double lo = 0.31, hi = 0.83;
    const double fast = min_on_interval(nl, lo, hi);
    double brute = 1e300;
    for (int i = 0; i <= 20000; ++i) {
        const double u = lo + (hi - lo) * i / 20000.0;
        brute = std::min(brute, eval_f(nl, u));
    }
    CHECK(std::abs(fast - brute) <= 1e-9);
}

TEST_CASE("lipschitz and max bounds") {
    const auto nl = quadratic_bump(0.25, 2.0);
    CHECK(lipschitz_bound(nl) == doctest::Approx(2.0 * 0.75).epsilon(1e-14));
    CHECK(max_of_f(nl) == doctest::Approx(2.0 * (0.625 - 0.25) * 0.375).epsilon(1e-14));
}

TEST_CASE("reaction validation") {
    CHECK_THROWS_AS((void)quadratic_bump(0.0, 1.0), InvariantError);
    CHECK_THROWS_AS((void)quadratic_bump(1.0, 1.0), InvariantError);
    CHECK_THROWS_AS((void)quadratic_bump(0.3, -1.0), InvariantError);
    CHECK(eval_f(quadratic_bump(0.3, 0.0), 0.6) == 0.0);  // reaction switched off
    // tabulated f must vanish below theta
    std::vector<std::pair<double, double>> bad{{0.0, 0.1}, {0.5, 0.2}, {1.0, 0.0}};
    CHECK_THROWS_AS((void)tabulated_reaction(0.25, bad), InvariantError);
}
