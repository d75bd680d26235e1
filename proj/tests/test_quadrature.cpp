#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ncriesz/errors.hpp"
#include "ncriesz/quadrature.hpp"
#include "ncriesz/util.hpp"

using namespace ncr;

TEST_CASE("gl16 integrates polynomials up to degree 31 exactly") {
    for (int k : {0, 5, 17, 31}) {
        const double got = gl16([k](double x) { return std::pow(x, k); }, 0.0, 1.0);
        CHECK(std::abs(got - 1.0 / (k + 1)) < 1e-14);
    }
    // degree 32 must show truncation error, otherwise the rule is suspect
    const double got32 = gl16([](double x) { return std::pow(x - 0.5, 32); }, 0.0, 1.0);
    const double exact32 = 2.0 * std::pow(0.5, 33) / 33.0;
    CHECK(std::abs(got32 - exact32) > 0.0);
}

TEST_CASE("gl16_composite handles oscillation") {
    const double got = gl16_composite([](double x) { return std::sin(x); }, 0.0, kPi, 8);
    CHECK(std::abs(got - 2.0) < 1e-13);
}

TEST_CASE("integrate_to_tol meets its own error estimate") {
    const QuadResult r = integrate_to_tol([](double x) { return std::sin(x); }, 0.0, kPi, 1e-12);
    CHECK(std::abs(r.value - 2.0) < 1e-11);
    CHECK(r.err_est <= 1e-12);

    // odd frequency: no accidental node symmetry, so coarse panels disagree
    CHECK_THROWS_AS(integrate_to_tol([](double x) { return std::sin(501.0 * x); }, 0.0, kPi, 1e-14, 1, 2),
                    QuadratureFailure);
}

TEST_CASE("si_ci reference values") {
    // reference: scipy.special.sici, covering both sides of the x = 20
    // series/asymptotic switch
    // near the switch the series loses ~7 digits to cancellation and the
    // truncated asymptotic is ~1e-9, so those rows carry a looser tolerance
    struct Row {
        double x, si, ci, tol;
    };
    const Row rows[] = {
        {0.1, 0.09994446110827694, -1.7278683866572966, 1e-12},
        {1.0, 0.9460830703671831, 0.33740392290096816, 1e-12},
        {5.0, 1.549931244944674, -0.1900297496566439, 1e-12},
        {19.9, 1.543775434027924, 0.042148895156095156, 2e-9},
        {20.1, 1.5528890747718291, 0.046224471788976144, 2e-9},
        {50.0, 1.551617072485936, -0.005628386324116305, 1e-12},
        {123.456, 1.5756656354331466, -0.006472076183804898, 1e-12},
    };
    for (const Row& row : rows) {
        double si = 0.0, ci = 0.0;
        si_ci(row.x, si, ci);
        CHECK(std::abs(si - row.si) < row.tol);
        CHECK(std::abs(ci - row.ci) < row.tol);
    }
}

TEST_CASE("si_ci small-x series and large-x limit") {
    double si = 0.0, ci = 0.0;
    si_ci(1e-3, si, ci);
    const double x = 1e-3;
    CHECK(std::abs(si - (x - x * x * x / 18.0)) < 1e-16);
    si_ci(123.456, si, ci);
    CHECK(std::abs(si - kPi / 2.0) < 0.01);
}

TEST_CASE("oscillatory tails match proper integrals over finite windows") {
    // tail(P) - tail(Q) = int_P^Q, which a composite rule can certify
    struct Case {
        double a, psi, P, Q;
    };
    const Case cases[] = {
        {1.0, 0.0, 0.5, 7.0},
        {2.5, 1.1, 1.0, 4.0},
        {0.7, -0.4, 2.0, 30.0},
    };
    for (const Case& c : cases) {
        // 2e-9 absorbs the si_ci accuracy floor when a*Q lands near 20
        const double lhs1 = tail_cos_over_rho(c.a, c.psi, c.P) - tail_cos_over_rho(c.a, c.psi, c.Q);
        const double rhs1 = gl16_composite(
            [&](double rho) { return std::cos(c.a * rho + c.psi) / rho; }, c.P, c.Q, 400);
        CHECK(std::abs(lhs1 - rhs1) < 2e-9);

        const double lhs2 = tail_cos_over_rho2(c.a, c.psi, c.P) - tail_cos_over_rho2(c.a, c.psi, c.Q);
        const double rhs2 = gl16_composite(
            [&](double rho) { return std::cos(c.a * rho + c.psi) / (rho * rho); }, c.P, c.Q, 400);
        CHECK(std::abs(lhs2 - rhs2) < 2e-9);
    }
}

TEST_CASE("tail_cos_over_rho2 closed form at a = 0") {
    for (double psi : {0.0, 0.9, -2.0})
        for (double P : {0.5, 2.0, 11.0})
            CHECK(std::abs(tail_cos_over_rho2(0.0, psi, P) - std::cos(psi) / P) < 1e-14);
}

TEST_CASE("oscillatory tails obey the integration-by-parts envelope") {
    // |int_P^inf cos(a rho + psi)/rho| <= 2/(aP)
    for (double a : {0.5, 3.0})
        for (double P : {1.0, 10.0, 100.0})
            CHECK(std::abs(tail_cos_over_rho(a, 0.3, P)) <= 2.0 / (a * P) + 1e-15);
}
