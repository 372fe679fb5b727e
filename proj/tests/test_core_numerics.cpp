#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "subscatter/closed_forms.hpp"
#include "subscatter/derivative.hpp"
#include "subscatter/grid.hpp"
#include "subscatter/quadrature.hpp"
#include "subscatter/rootfind.hpp"
#include "subscatter/stationary.hpp"

using namespace subscatter;
using Catch::Approx;

TEST_CASE("grid invariants", "[grid]") {
    CHECK_THROWS_AS(UniformGrid(0.0, 1.0, 4), ConfigError);
    CHECK_THROWS_AS(UniformGrid(0.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(UniformGrid(1.0, 1.0, 5), ConfigError);
    UniformGrid g(0.0, 1.0, 101);
    CHECK(g.spacing() == Approx(0.01));
    CHECK(g.point(100) == Approx(1.0));
    CHECK(odd_count(10) == 11);
    CHECK(odd_count(11) == 11);
}

TEST_CASE("simpson integration", "[quadrature]") {
    SECTION("constant integrand is exact") {
        UniformGrid g(0.0, 1.0, 101);
        std::vector<double> v(101, 1.0);
        CHECK(integrate(v, g) == Approx(1.0).epsilon(1e-15));
    }
    SECTION("linear integrand is exact") {
        UniformGrid g(0.0, 1.0, 101);
        std::vector<double> v(101);
        for (std::size_t i = 0; i < 101; ++i) v[i] = g.point(i);
        CHECK(integrate(v, g) == Approx(0.5).margin(1e-12));
    }
    SECTION("sin on [0, pi] with 201 nodes") {
        UniformGrid g(0.0, M_PI, 201);
        // oracle: antiderivative -cos gives exactly 2
        const double expected = -std::cos(M_PI) + std::cos(0.0);
        const double got = integrate_fn([](double x) { return std::sin(x); }, g);
        CHECK(got == Approx(expected).margin(1e-8));
    }
    SECTION("length mismatch is a contract violation") {
        UniformGrid g(0.0, 1.0, 101);
        std::vector<double> v(99, 1.0);
        CHECK_THROWS_AS(integrate(v, g), ConfigError);
    }
    SECTION("linearity to 1e-13 relative") {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        UniformGrid g(0.0, 2.0, 257);
        std::vector<Complex> a(g.count), b(g.count), combo(g.count);
        const Complex alpha(1.7, -0.3), beta(-0.8, 2.1);
        for (std::size_t i = 0; i < g.count; ++i) {
            a[i] = Complex(u(rng), u(rng));
            b[i] = Complex(u(rng), u(rng));
            combo[i] = alpha * a[i] + beta * b[i];
        }
        const Complex lhs = integrate(combo, g);
        const Complex rhs = alpha * integrate(a, g) + beta * integrate(b, g);
        CHECK(std::abs(lhs - rhs) <= 1e-13 * std::abs(lhs));
    }
    SECTION("halving the spacing cuts the error by at least 8x") {
        auto f = [](double x) { return std::exp(x) * std::sin(3.0 * x); };
        // reference from a much finer grid
        const double ref = integrate_fn(f, UniformGrid(0.0, 2.0, 16385));
        const double e1 = std::abs(integrate_fn(f, UniformGrid(0.0, 2.0, 65)) - ref);
        const double e2 = std::abs(integrate_fn(f, UniformGrid(0.0, 2.0, 129)) - ref);
        CHECK(e1 / e2 >= 8.0);
    }
}

TEST_CASE("central differences", "[derivative]") {
    SECTION("quadratic is exact") {
        const double d = differentiate([](double k) { return k * k; }, 2.0, 1e-4);
        CHECK(d == Approx(4.0).margin(1e-6));
    }
    SECTION("constant gives zero") {
        CHECK(differentiate([](double) { return 3.7; }, 1.0, 1e-4) == Approx(0.0).margin(1e-12));
    }
    SECTION("arg a_out derivative matches the closed-form effective width") {
        const PhysicalConstants pc;
        const auto bar = BarrierSpec::rectangular(30.0, 42.0, 0.25);
        const double k = 0.45;
        const RectTimes rt = rect_closed_forms(k, bar.as<Rectangular>(), pc);
        // J' = d_eff - x_start for symmetric barriers
        const double jp = phase_derivative(
            [&](double kk) { return StationaryState(bar, kk, pc).coeffs().a_out; }, k,
            1e-4 * k);
        CHECK(jp == Approx(rt.d_eff - rt.x_start).epsilon(1e-4));
    }
    SECTION("phase derivative of a pure rotation") {
        const double a = 7.3;
        const double d = phase_derivative(
            [&](double k) { return std::polar(1.0, a * k); }, 1.0, 1e-5);
        CHECK(d == Approx(a).epsilon(1e-10));
    }
}

TEST_CASE("bisection root finding", "[rootfind]") {
    SECTION("linear root") {
        CHECK(find_root([](double t) { return t - 1.0; }, 0.0, 2.0, 1e-12) ==
              Approx(1.0).margin(1e-11));
    }
    SECTION("sqrt(2) against its oracle") {
        const double tol = 1e-10;
        const double r = find_root([](double t) { return t * t - 2.0; }, 0.0, 2.0, tol);
        CHECK(std::abs(r - std::sqrt(2.0)) <= tol);
        CHECK(r >= 0.0);
        CHECK(r <= 2.0);
    }
    SECTION("no sign change") {
        CHECK_THROWS_AS(find_root([](double) { return 1.0; }, 0.0, 2.0, 1e-8), NoRootError);
    }
    SECTION("bracket shrinks to tolerance") {
        const double tol = 1e-6;
        const double r = find_root([](double t) { return std::cos(t); }, 0.0, 3.0, tol);
        CHECK(std::abs(r - M_PI / 2.0) <= tol);
    }
}

TEST_CASE("physical constants", "[constants]") {
    PhysicalConstants pc;
    CHECK(pc.kinetic_factor() == Approx(0.0380998 / 0.067));
    CHECK(pc.energy(pc.wavenumber(0.05)) == Approx(0.05).epsilon(1e-12));
    CHECK_THROWS_AS(pc.wavenumber(-1.0), DomainError);
    PhysicalConstants bad;
    bad.mass_ratio = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
