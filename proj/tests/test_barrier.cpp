#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "subscatter/closed_forms.hpp"
#include "subscatter/quadrature.hpp"
#include "subscatter/stationary.hpp"

using namespace subscatter;
using Catch::Approx;

namespace {
const PhysicalConstants pc;
}

TEST_CASE("local wavenumber regimes", "[barrier]") {
    const auto at_threshold = local_wavenumber(0.2, 0.2, pc);
    CHECK(at_threshold.regime == Regime::oscillatory);
    CHECK(at_threshold.kappa == 0.0);

    const auto free_region = local_wavenumber(0.0, 0.1, pc);
    CHECK(free_region.regime == Regime::oscillatory);
    CHECK(free_region.kappa == Approx(pc.wavenumber(0.1)));

    const auto tunneling = local_wavenumber(0.2, 0.1, pc);
    CHECK(tunneling.regime == Regime::evanescent);
    CHECK(tunneling.kappa == Approx(std::sqrt(0.1 * 0.067 / 0.0380998)));

    CHECK_THROWS_AS(local_wavenumber(0.2, -0.1, pc), DomainError);
}

TEST_CASE("barrier spec invariants", "[barrier]") {
    CHECK_THROWS_AS(BarrierSpec::rectangular(-1.0, 5.0, 0.2), ConfigError);
    CHECK_THROWS_AS(BarrierSpec::rectangular(5.0, 4.0, 0.2), ConfigError);
    CHECK_THROWS_AS(BarrierSpec::symmetric_piecewise(
                        1.0, {Segment{1.0, 0.2}, Segment{1.0, 0.3}}),
                    ConfigError);
    const auto db = BarrierSpec::double_rect(10.0, 3.0, 4.0, 0.5);
    CHECK(db.width() == Approx(10.0));
    CHECK(db.x_c() == Approx(15.0));
    CHECK(db.potential_at(11.0) == 0.5);
    CHECK(db.potential_at(15.0) == 0.0);
    CHECK(BarrierSpec::delta(3.0, 0.4).width() == 0.0);
}

TEST_CASE("odd/even basis at the midpoint", "[basis]") {
    const auto bar = BarrierSpec::rectangular(10.0, 20.0, 0.3);
    const double k = pc.wavenumber(0.1);
    const double kappa = std::sqrt((0.3 - 0.1) / pc.kinetic_factor());
    const RealBasis rb = eval_basis(bar, k, bar.x_c(), pc);
    CHECK(rb.u == Approx(0.0).margin(1e-14));
    CHECK(rb.v == Approx(1.0).epsilon(1e-14));
    CHECK(rb.du == Approx(kappa).epsilon(1e-12));
    CHECK(rb.dv == Approx(0.0).margin(1e-14));
    CHECK(rb.kappa_norm == Approx(kappa).epsilon(1e-12));
    CHECK_THROWS_AS(eval_basis(bar, k, 9.0, pc), DomainError);
}

TEST_CASE("Wronskian identity and parity", "[basis]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        BarrierSpec bar = [&]() {
            switch (trial % 3) {
                case 0:
                    return BarrierSpec::rectangular(5.0 + 20.0 * u(rng),
                                                    30.0 + 20.0 * u(rng),
                                                    0.05 + 0.9 * u(rng));
                case 1:
                    return BarrierSpec::double_rect(5.0 + 10.0 * u(rng), 1.0 + 6.0 * u(rng),
                                                    1.0 + 6.0 * u(rng), 0.05 + 0.9 * u(rng));
                default:
                    return BarrierSpec::symmetric_piecewise(
                        5.0, {Segment{1.0 + 3.0 * u(rng), 0.5 * u(rng)},
                              Segment{1.0 + 3.0 * u(rng), 0.9 * u(rng)},
                              Segment{0.0, 0.0}});
            }
        }();
        if (bar.is<SymmetricPiecewise>()) {
            auto segs = bar.as<SymmetricPiecewise>().segments;
            segs[2] = segs[0];  // enforce the palindrome
            bar = BarrierSpec::symmetric_piecewise(5.0, segs);
        }
        const double k = 0.05 + 1.2 * u(rng);
        StationaryState st(bar, k, pc);
        const double kap_c = st.coeffs().kappa;
        for (double frac : {0.033, 0.31, 0.5, 0.72, 0.97}) {
            const double x = bar.a() + frac * bar.width();
            const RealBasis rb = st.basis_at(x);
            CHECK(rb.du * rb.v - rb.dv * rb.u ==
                  Approx(kap_c).epsilon(1e-10).margin(1e-14));
            // parity about x_c
            const RealBasis mr = st.basis_at(2.0 * bar.x_c() - x);
            CHECK(mr.u == Approx(-rb.u).margin(1e-12 * (1.0 + std::abs(rb.u))));
            CHECK(mr.v == Approx(rb.v).margin(1e-12 * (1.0 + std::abs(rb.v))));
        }
    }
}

TEST_CASE("double-rect basis against the RK4 oracle", "[basis][oracle]") {
    const auto bar = BarrierSpec::double_rect(12.0, 3.0, 5.0, 0.4);
    const double E = 0.17;
    const double k = pc.wavenumber(E);
    StationaryState st(bar, k, pc);
    const double xc = bar.x_c();
    const double kap_c = st.coeffs().kappa;

    // propagate the basis initial data with RK4 and compare across all four
    // interfaces
    for (double x : {xc + 1.2, xc + 2.5 + 1.5, xc + 2.5 + 3.0, bar.b() - 1e-3, bar.b()}) {
        auto wb = oracles::integrate_schrodinger<double>(bar, E, pc, xc, x, {0.0, 1.0});
        auto vv = oracles::integrate_schrodinger<double>(bar, E, pc, xc, x, {1.0, 0.0});
        const RealBasis rb = st.basis_at(x);
        CHECK(rb.u == Approx(kap_c * wb.f).epsilon(1e-8));
        CHECK(rb.du == Approx(kap_c * wb.fp).epsilon(1e-8));
        CHECK(rb.v == Approx(vv.f).epsilon(1e-8));
        CHECK(rb.dv == Approx(vv.fp).epsilon(1e-8));
        CHECK(rb.du * rb.v - rb.dv * rb.u == Approx(kap_c).epsilon(1e-10));
    }
}

TEST_CASE("edge coefficients Q and P", "[qp]") {
    SECTION("free particle phases") {
        const auto bar = BarrierSpec::rectangular(10.0, 17.0, 0.0);
        const double k = 0.4, d = 7.0;
        const QPCoeffs qp = qp_coeffs(bar, k, pc);
        const Complex qratio = qp.Q / std::conj(qp.Q);
        const Complex pratio = qp.P / std::conj(qp.P);
        CHECK(std::abs(qratio - std::polar(1.0, k * d)) < 1e-12);
        CHECK(std::abs(pratio + std::polar(1.0, k * d)) < 1e-12);
    }
    SECTION("definition restated at x = b") {
        const auto bar = BarrierSpec::rectangular(10.0, 22.0, 0.3);
        const double k = pc.wavenumber(0.12);
        StationaryState st(bar, k, pc);
        const RealBasis rb = st.basis_at(bar.b());
        const QPCoeffs qp = st.qp();
        CHECK(std::abs(qp.Q - Complex(rb.du, k * rb.u)) <= 1e-12 * std::abs(qp.Q));
        CHECK(std::abs(qp.P - Complex(rb.dv, k * rb.v)) <= 1e-12 * std::abs(qp.P));
    }
    SECTION("double-rect Q, P against the RK4 oracle") {
        const auto bar = BarrierSpec::double_rect(12.0, 3.0, 5.0, 0.4);
        const double E = 0.23;
        const double k = pc.wavenumber(E);
        StationaryState st(bar, k, pc);
        const double kap_c = st.coeffs().kappa;
        auto wb = oracles::integrate_schrodinger<double>(bar, E, pc, bar.x_c(), bar.b(),
                                                         {0.0, 1.0});
        auto vv = oracles::integrate_schrodinger<double>(bar, E, pc, bar.x_c(), bar.b(),
                                                         {1.0, 0.0});
        const QPCoeffs qp = st.qp();
        CHECK(std::abs(qp.Q - kap_c * Complex(wb.fp, k * wb.f)) <=
              1e-8 * std::abs(qp.Q));
        CHECK(std::abs(qp.P - Complex(vv.fp, k * vv.f)) <= 1e-8 * std::abs(qp.P));
    }
}

TEST_CASE("scattering coefficients", "[scattering]") {
    SECTION("free propagation") {
        const auto bar = BarrierSpec::rectangular(10.0, 17.0, 0.0);
        const ScatteringCoeffs c = scattering_coeffs(bar, 0.4, pc);
        CHECK(std::abs(c.a_out - std::polar(1.0, 0.4 * 7.0)) < 1e-12);
        CHECK(std::abs(c.b_out) < 1e-14);
        CHECK(c.T == Approx(1.0).epsilon(1e-14));
        CHECK(c.F == 0.0);
    }
    SECTION("sech^2 transmission at E = V0/2 with kappa d = 1") {
        const double V0 = 0.2, E = 0.1;
        const double k = pc.wavenumber(E);
        const double kap = std::sqrt((V0 - E) / pc.kinetic_factor());
        const auto bar = BarrierSpec::rectangular(10.0, 10.0 + 1.0 / kap, V0);
        const ScatteringCoeffs c = scattering_coeffs(bar, k, pc);
        const double sech1 = 1.0 / std::cosh(1.0);
        CHECK(c.T == Approx(sech1 * sech1).epsilon(1e-12));
    }
    SECTION("unitarity over random barriers") {
        std::mt19937_64 rng(123);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 300; ++i) {
            const double V0 = 1e-3 + 0.999 * u(rng);
            const double k = 1e-3 + 1.999 * u(rng);
            BarrierSpec bar = (i % 2 == 0)
                                  ? BarrierSpec::rectangular(5.0, 5.0 + 30.0 * u(rng) + 0.01,
                                                             V0)
                                  : BarrierSpec::double_rect(5.0, 0.1 + 10.0 * u(rng),
                                                             0.1 + 10.0 * u(rng), V0);
            const ScatteringCoeffs c = scattering_coeffs(bar, k, pc);
            REQUIRE(std::abs(c.T + c.R - 1.0) < 1e-10);
            REQUIRE(std::abs(std::norm(c.a_out) + std::norm(c.b_out) - 1.0) < 1e-10);
        }
    }
    SECTION("delta matches the thin-rectangular limit") {
        const double W = 0.35, k = 0.6, w = 1e-6;
        const ScatteringCoeffs cd = scattering_coeffs(BarrierSpec::delta(7.0, W), k, pc);
        const ScatteringCoeffs cr =
            scattering_coeffs(BarrierSpec::rectangular(7.0, 7.0 + w, W / w), k, pc);
        CHECK(std::abs(cd.a_out - cr.a_out) <= 1e-6 * std::abs(cd.a_out));
        CHECK(std::abs(cd.b_out - cr.b_out) <= 1e-6 * std::abs(cd.b_out));
    }
    SECTION("product-form outgoing amplitudes from Q/Q* and P/P*") {
        const auto bar = BarrierSpec::rectangular(20.0, 32.0, 0.3);
        const double k = pc.wavenumber(0.14);
        StationaryState st(bar, k, pc);
        const QPCoeffs qp = st.qp();
        const Complex q = qp.Q / std::conj(qp.Q);
        const Complex p = qp.P / std::conj(qp.P);
        CHECK(std::abs(0.5 * (q - p) - st.coeffs().a_out) < 1e-10);
        CHECK(std::abs(-0.5 * (q + p) - st.coeffs().b_out) < 1e-10);
    }
}

TEST_CASE("conventional phase and dwell times", "[cmt]") {
    const double V0 = 0.3;
    const double E = V0 / 2.0;
    const double k = pc.wavenumber(E);
    const double kap = std::sqrt((V0 - E) / pc.kinetic_factor());

    SECTION("phase time saturates with width") {
        const double t6 = cmt_phase_time(Rectangular{10.0, 10.0 + 6.0 / kap, V0}, k, pc);
        const double t12 = cmt_phase_time(Rectangular{10.0, 10.0 + 12.0 / kap, V0}, k, pc);
        CHECK(std::abs(t12 - t6) / t6 < 0.01);
    }
    SECTION("phase time equals the numerically differentiated phase delay") {
        const Rectangular bar{10.0, 22.0, V0};
        const double jp = phase_derivative(
            [&](double kk) {
                return StationaryState(BarrierSpec(bar), kk, pc).coeffs().a_out;
            },
            k, 1e-4 * k);
        CHECK(cmt_phase_time(bar, k, pc) ==
              Approx(pc.mass() * jp / (pc.hbar * k)).epsilon(1e-4));
    }
    SECTION("dwell time equals the stationary-density quadrature") {
        const Rectangular bar{10.0, 21.0, V0};
        StationaryState st(BarrierSpec(bar), k, pc);
        UniformGrid g(10.0, 21.0, 4001);
        std::vector<double> dens(g.count);
        for (std::size_t i = 0; i < g.count; ++i)
            dens[i] = std::norm(st.full_at(g.point(i)).psi);
        const double quad = integrate(dens, g) / pc.velocity(k);
        CHECK(cmt_dwell_time(bar, k, pc) == Approx(quad).epsilon(1e-6));
    }
    SECTION("dwell closed form needs E < V0") {
        CHECK_THROWS_AS(cmt_dwell_time(Rectangular{10.0, 20.0, 0.1}, pc.wavenumber(0.2), pc),
                        DomainError);
    }
}
