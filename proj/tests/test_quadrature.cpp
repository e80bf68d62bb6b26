#include <doctest.h>

#include <cmath>

#include "fracfront/errors.hpp"
#include "fracfront/quadrature.hpp"
#include "support/oracles.hpp"

using namespace fracfront;

TEST_CASE("gk15 integrates smooth functions") {
    auto r = quad::gk15([](double x) { return std::exp(-x * x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(0.7468241328124271).epsilon(1e-12));
}

TEST_CASE("adaptive integrate handles peaked integrands and reports error") {
    auto f = [](double x) { return 1.0 / (1e-4 + x * x); };
    auto r = quad::integrate(f, -1.0, 1.0, {1e-12, 1e-12, 20000});
    const double exact = 2.0 * std::atan(100.0) / 1e-2;
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-10));
    CHECK(std::abs(r.value - exact) <= 10.0 * std::max(r.error, 1e-14 * exact));
}

TEST_CASE("integrate throws on absurd budget") {
    quad::Options opt;
    opt.abs_tol = 1e-16;
    opt.rel_tol = 1e-16;
    opt.max_panels = 4;
    auto f = [](double x) { return std::cos(30.0 * x) / (0.01 + x * x); };
    CHECK_THROWS_AS((void)quad::integrate(f, -2.0, 2.0, opt), ToleranceError);
}

TEST_CASE("integrate_log resolves algebraic endpoint singularities") {
    // Integral_0^1 z^{-1/2} dz restricted to [1e-14, 1]
    auto f = [](double z) { return 1.0 / std::sqrt(z); };
    auto r = quad::integrate_log(f, 1e-14, 1.0, {1e-12, 1e-12, 20000});
    CHECK(r.value == doctest::Approx(2.0 - 2e-7).epsilon(1e-10));
}

TEST_CASE("oscillatory_cos matches closed forms across frequencies") {
    // Integral_0^1 cos(w x) dx = sin(w)/w
    for (double w : {0.5, 3.0, 40.0, 400.0, 4000.0}) {
        auto r = quad::oscillatory_cos([](double) { return 1.0; }, 0.0, 1.0, w, 1e-12, 1e-6);
        CHECK(r.value == doctest::Approx(std::sin(w) / w).epsilon(1e-9));
    }
    // Integral_0^inf e^{-x} cos(w x) dx = 1/(1+w^2), truncated at 60
    for (double w : {1.0, 12.0, 150.0}) {
        auto r = quad::oscillatory_cos([](double x) { return std::exp(-x); }, 0.0, 60.0, w,
                                       1e-13, 1e-6);
        CHECK(r.value == doctest::Approx(1.0 / (1.0 + w * w)).epsilon(1e-8));
    }
}

TEST_CASE("oscillatory_cos agrees with the Simpson oracle on a power-law tail") {
    auto F = [](double z) { return std::pow(z, -1.5); };
    const double w = 7.0;
    auto r = quad::oscillatory_cos(F, 0.5, 200.0, w, 1e-12, 1e-4);
    auto ref = oracles::integrate([&](double z) { return F(z) * std::cos(w * z); }, 0.5, 200.0,
                                  1e-13);
    CHECK(r.value == doctest::Approx(ref).epsilon(1e-9));
}
