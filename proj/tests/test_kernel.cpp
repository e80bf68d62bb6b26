#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fracfront/csv.hpp"
#include "fracfront/errors.hpp"
#include "fracfront/kernel.hpp"
#include "fracfront/numerics.hpp"
#include "support/oracles.hpp"

using namespace fracfront;

namespace {

std::vector<double> default_samples() { return logspace(1e-4, 1e4, 160); }

}  // namespace

TEST_CASE("eval_kernel pure power values and symmetry") {
    const auto cauchy = fractional_pure(0.5, 1.0 / M_PI);
    // c |z|^{-1-2s} at z = 2: (1/pi) * 2^{-2}
    CHECK(eval_kernel(cauchy, 2.0) == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-15));
    CHECK(eval_kernel(cauchy, -2.0) == eval_kernel(cauchy, 2.0));
    CHECK_THROWS_AS((void)eval_kernel(cauchy, 0.0), DomainError);

    const auto trunc = truncated_power_tail(0.25, 2.0);
    CHECK(eval_kernel(trunc, 0.5) == doctest::Approx(2.0));
    CHECK(eval_kernel(trunc, 10.0) == doctest::Approx(2.0 * std::pow(10.0, -1.5)));
    // within the two-sided comparability band at z = 10
    const double lo = std::pow(10.0, -1.5) / trunc.J0;
    const double hi = trunc.J0 * std::pow(10.0, -1.5);
    CHECK(eval_kernel(trunc, 10.0) >= lo);
    CHECK(eval_kernel(trunc, 10.0) <= hi);
}

TEST_CASE("tabulated kernel interpolates log-log and extends by the declared tail") {
    std::vector<std::pair<double, double>> rows;
    for (double z : logspace(0.01, 100.0, 40)) rows.emplace_back(z, std::pow(z, -1.5));
    const auto tab = tabulated_kernel(0.25, rows);
    // exact power data reproduces the power everywhere, including beyond the table
    for (double z : {0.005, 0.3, 7.0, 500.0})
        CHECK(eval_kernel(tab, z) == doctest::Approx(std::pow(z, -1.5)).epsilon(1e-12));
}

TEST_CASE("partial_moment closed forms") {
    const auto pure = fractional_pure(0.25, 1.0);
    // Integral_0^1 z^2 z^{-1.5} dz = 2/3
    CHECK(partial_moment(pure, 2, 0.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    // tail mass c/(2s Z^{2s})
    CHECK(partial_moment(pure, 0, 4.0, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(1.0 / (0.5 * 2.0)).epsilon(1e-14));
    CHECK_THROWS_AS((void)partial_moment(pure, 0, 0.0, 1.0), DomainError);

    // s = 1/2 logarithmic first moment
    const auto cau = fractional_pure(0.5, 1.0);
    CHECK(partial_moment(cau, 1, 1.0, 10.0) == doctest::Approx(std::log(10.0)).epsilon(1e-14));

    const auto uni = truncated_power_tail_unit_mass(0.25);
    CHECK(total_mass(uni) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(has_finite_mass(uni));
    CHECK_FALSE(has_finite_mass(pure));
}

TEST_CASE("verify_hypothesis flags") {
    SUBCASE("pure kernel with J0 = 1 + 1e-9 passes everything") {
        auto spec = fractional_pure(0.25, 1.0);
        spec.J0 = 1.0 + 1e-9;
        const auto rep = verify_hypothesis(spec, default_samples());
        CHECK(rep.symmetric);
        CHECK(rep.moment_bound);
        CHECK(rep.tail_upper);
        CHECK(rep.tail_lower);
        CHECK(rep.all());
    }
    SUBCASE("moment bound true iff J1 >= 2/3 (quadrature vs antiderivative)") {
        auto spec = fractional_pure(0.25, 1.0);
        spec.J1 = 2.0 / 3.0 + 1e-9;
        CHECK(verify_hypothesis(spec, default_samples()).moment_bound);
        spec.J1 = 2.0 / 3.0 * (1.0 - 1e-3);
        const auto rep = verify_hypothesis(spec, default_samples());
        CHECK_FALSE(rep.moment_bound);
        REQUIRE(rep.witness_moment.has_value());
        // witness records the two-sided moment, 4/3 by the exact antiderivative
        CHECK(*rep.witness_moment == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    }
    SUBCASE("deliberately asymmetric table is caught") {
        std::vector<std::pair<double, double>> rows;
        for (double z : logspace(0.01, 100.0, 24)) {
            rows.emplace_back(z, std::pow(z, -1.5));
            rows.emplace_back(-z, 2.0 * std::pow(z, -1.5));
        }
        auto spec = tabulated_kernel(0.25, rows);
        const auto rep = verify_hypothesis(spec, default_samples());
        CHECK_FALSE(rep.symmetric);
        CHECK(rep.witness_symmetric.has_value());
    }
    SUBCASE("violated upper tail is caught with a witness") {
        auto spec = fractional_pure(0.25, 1.0);
        spec.J0 = 0.5;  // J = z^{-1.5} > 0.5 z^{-1.5}
        const auto rep = verify_hypothesis(spec, default_samples());
        CHECK_FALSE(rep.tail_upper);
        CHECK(rep.witness_tail_upper.has_value());
    }
}

TEST_CASE("symbol basics: zero frequency, sign, evenness") {
    const auto spec = fractional_pure(0.25, 1.0);
    CHECK(symbol(spec, 0.0).value == 0.0);
    for (double xi : {1e-3, 0.1, 1.0, 30.0}) {
        const double w = symbol(spec, xi).value;
        CHECK(w < 0.0);
        CHECK(symbol(spec, -xi).value == w);  // |xi| path
    }
}

TEST_CASE("Cauchy symbol equals -|xi| against the Simpson oracle") {
    const auto cauchy = fractional_pure(0.5, 1.0 / M_PI);
    const auto sv = symbol(cauchy, 1.0);
    CHECK(sv.value == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(sv.value + 1.0) <= 20.0 * std::max(sv.error, 1e-13));

    // independent oracle: adaptive Simpson of 2 (cos y - 1)/(pi y^2) on (0, Y]
    // plus the analytic tail -2/(pi Y); the oscillatory tail residue is O(1/Y^2)
    auto integrand = [](double y) { return 2.0 * (std::cos(y) - 1.0) / (M_PI * y * y); };
    const double Y = 500.0;
    const double ref = oracles::integrate(integrand, 1e-9, Y, 1e-13) - 2.0 / (M_PI * Y);
    CHECK(sv.value == doctest::Approx(ref).epsilon(1e-4));

    for (double xi : {0.25, 2.0, 8.0})
        CHECK(symbol(cauchy, xi).value == doctest::Approx(-xi).epsilon(1e-9));
}

TEST_CASE("pure symbol matches the closed-form stable constant across s") {
    for (double s : {0.1, 0.25, 0.4, 0.5}) {
        const auto spec = fractional_pure(s, 1.0);
        const double K = oracles::stable_constant(s);
        for (double xi : {0.01, 1.0, 5.0}) {
            const double expected = -K * std::pow(xi, 2.0 * s);
            CHECK(symbol(spec, xi).value == doctest::Approx(expected).epsilon(1e-8));
        }
    }
}

TEST_CASE("scale invariance of the pure power symbol") {
    const auto spec = fractional_pure(0.25, 1.0);
    XorShift64 rng(42);
    for (int i = 0; i < 8; ++i) {
        const double xi = rng.uniform(0.02, 2.0);
        const double lam = rng.uniform(0.5, 8.0);
        const auto a = symbol(spec, lam * xi);
        const auto b = symbol(spec, xi);
        const double predicted = std::pow(lam, 0.5) * b.value;
        CHECK(std::abs(a.value - predicted) <=
              10.0 * (a.error + std::pow(lam, 0.5) * b.error) + 1e-10 * std::abs(predicted));
    }
}

TEST_CASE("refinement: tightening the tolerance moves W less than the reported bound") {
    const auto spec = truncated_power_tail(0.3, 1.0);
    for (double xi : {0.05, 1.3}) {
        const auto coarse = symbol(spec, xi, 1e-8);
        const auto fine = symbol(spec, xi, 5e-11);
        CHECK(std::abs(coarse.value - fine.value) <= coarse.error + fine.error + 1e-15);
    }
}

TEST_CASE("integrable kernel symbol tends to minus the mass at large xi") {
    const auto uni = truncated_power_tail_unit_mass(0.25);
    const double w = symbol(uni, 4000.0).value;
    CHECK(w == doctest::Approx(-1.0).epsilon(2e-2));
}

TEST_CASE("fit_small_freq_exponent recovers 2s") {
    SUBCASE("s = 0.25 slope near 0.5") {
        const auto fit = fit_small_freq_exponent(fractional_pure(0.25, 1.0), 1e-3, 1e-2);
        CHECK(fit.slope == doctest::Approx(0.5).epsilon(0.02));
    }
    SUBCASE("s = 0.5 slope near 1 with the Cauchy closed form") {
        const auto fit = fit_small_freq_exponent(fractional_pure(0.5, 1.0 / M_PI), 1e-3, 1e-2);
        CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.01));
        CHECK(fit.constant == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("all built-in families stay within the +-0.02 band") {
        const double s = 0.35;
        std::vector<KernelSpec> specs{fractional_pure(s, 1.0), truncated_power_tail(s, 1.0)};
        std::vector<std::pair<double, double>> rows;
        for (double z : logspace(1e-4, 1e3, 60)) rows.emplace_back(z, std::pow(z, -1.0 - 2.0 * s));
        specs.push_back(tabulated_kernel(s, rows));
        for (const auto& spec : specs) {
            const auto fit = fit_small_freq_exponent(spec, 1e-3, 1e-2);
            CHECK(fit.slope >= 2.0 * s - 0.02);
            CHECK(fit.slope <= 2.0 * s + 0.02);
        }
    }
}

TEST_CASE("symbol_table carries the fitted small-frequency constant") {
    const auto spec = fractional_pure(0.25, 1.0);
    const auto table = symbol_table(spec, logspace(1e-3, 10.0, 24));
    REQUIRE(table.xi_grid.size() == 24);
    for (double w : table.W_values) CHECK(w <= 0.0);
    CHECK(table.small_freq_constant ==
          doctest::Approx(oracles::stable_constant(0.25)).epsilon(0.05));
}

TEST_CASE("kernel spec validation") {
    CHECK_THROWS_AS((void)fractional_pure(0.7, 1.0), InvariantError);
    CHECK_THROWS_AS((void)fractional_pure(0.25, -1.0), InvariantError);
    KernelSpec bad;
    bad.family = KernelFamily::TabulatedSymmetric;
    bad.table = {{1.0, 1.0}};
    CHECK_THROWS_AS(bad.validate(), InvariantError);
}

TEST_CASE("tabulated kernel round-trips through its CSV interface") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "fracfront_kernel_csv";
    fs::create_directories(dir);
    const auto path = (dir / "k.csv").string();
    {
        std::ofstream out(path);
        out << "z,J\n";
        for (double z : logspace(0.01, 50.0, 30))
            out << format_double(z) << ',' << format_double(0.7 * std::pow(z, -1.5)) << '\n';
    }
    const auto spec = tabulated_kernel_from_csv(0.25, path);
    CHECK(eval_kernel(spec, 2.0) == doctest::Approx(0.7 * std::pow(2.0, -1.5)).epsilon(1e-12));
    CHECK(eval_kernel(spec, 500.0) ==
          doctest::Approx(0.7 * std::pow(500.0, -1.5)).epsilon(1e-12));
    CHECK(verify_hypothesis(spec, logspace(1e-3, 1e3, 80)).all());

    // loader rejects nonpositive z
    const auto bad = (dir / "bad.csv").string();
    {
        std::ofstream out(bad);
        out << "z,J\n-1.0,0.5\n2.0,0.1\n";
    }
    CHECK_THROWS_AS((void)tabulated_kernel_from_csv(0.25, bad), ConfigError);
}
