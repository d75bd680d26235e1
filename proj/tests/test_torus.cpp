#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ncriesz/errors.hpp"
#include "ncriesz/torus.hpp"
#include "ncriesz/util.hpp"

using namespace ncr;

namespace {

Monomial random_monomial(SplitMix64& rng, int d, int bound) {
    Monomial n(d);
    for (int k = 0; k < d; ++k) n[k] = static_cast<int>(rng.next() % (2 * bound + 1)) - bound;
    return n;
}

}  // namespace

TEST_CASE("rational arithmetic") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(1, -2) == Rat(-1, 2));
    CHECK(Rat(1, -2).den == 2);
    CHECK(parse_rational("-1/4") == Rat(-1, 4));
    CHECK(parse_rational("3") == Rat(3, 1));
    CHECK_THROWS_AS(parse_rational(""), BadConfig);
    CHECK_THROWS_AS(parse_rational("0.25"), IrrationalTheta);

    double err = 1.0;
    CHECK(rationalize(0.25, 64, &err) == Rat(1, 4));
    CHECK(err == 0.0);
}

TEST_CASE("phase units are exact on the fourth roots") {
    CHECK(phase_unit(0, 4) == cplx(1.0, 0.0));
    CHECK(phase_unit(1, 4) == cplx(0.0, 1.0));
    CHECK(phase_unit(2, 4) == cplx(-1.0, 0.0));
    CHECK(phase_unit(3, 4) == cplx(0.0, -1.0));
    CHECK(phase_unit(1, 2) == cplx(-1.0, 0.0));
    CHECK(phase_unit(5, 4) == cplx(0.0, 1.0));
    CHECK(phase_unit(-1, 4) == cplx(0.0, -1.0));
}

TEST_CASE("theta matrix parsing and validation") {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    CHECK(theta.d() == 2);
    CHECK(theta.q() == 4);
    CHECK(theta.value(0, 1) == 0.25);
    CHECK(theta.rat(1, 0) == Rat(-1, 4));
    CHECK(theta.is_antisymmetric());
    CHECK(theta.num_over_q(0, 1) == 1);

    const ThetaMatrix bad = ThetaMatrix::parse("0,1/4;1/4,0", false);
    CHECK_FALSE(bad.is_antisymmetric());
    CHECK_THROWS_AS(bad.require_antisymmetric(), BadConfig);
    CHECK_THROWS_AS(ThetaMatrix::parse("0,1/4;1/4,0"), BadConfig);

    CHECK(ThetaMatrix::zero(3).q() == 1);
    const ThetaMatrix up = ThetaMatrix::from_upper(3, Rat(1, 3));
    CHECK(up.value(0, 1) == up.value(0, 2));
    CHECK(up.value(1, 2) == 1.0 / 3.0);
    CHECK(up.is_antisymmetric());
    CHECK(up.q() == 3);
}

TEST_CASE("monomial products carry exact commutation phases") {
    // theta_12 = 1/4: V2 V1 = e^{-i pi/2} V^(1,1), V1 V2 = V^(1,1)
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    auto [ph_21, n_21] = multiply_monomials({0, 1}, {1, 0}, theta);
    CHECK(ph_21 == cplx(0.0, -1.0));
    CHECK(n_21 == Monomial{1, 1});
    auto [ph_12, n_12] = multiply_monomials({1, 0}, {0, 1}, theta);
    CHECK(ph_12 == cplx(1.0, 0.0));
    CHECK(n_12 == Monomial{1, 1});

    CHECK(adjoint_phase({1, 1}, theta) == cplx(0.0, -1.0));
    const TorusPoly v11 = monomial_poly(theta, {1, 1});
    const TorusPoly st = star(v11);
    CHECK(std::abs(fourier_coefficient(st, {-1, -1}) - cplx(0.0, -1.0)) < 1e-15);
    CHECK(st.coeffs.size() == 1);
}

TEST_CASE("monomial multiplication is associative") {
    const ThetaMatrix th2 = ThetaMatrix::parse("0,1/4;-1/4,0");
    const ThetaMatrix th3 = ThetaMatrix::from_upper(3, Rat(1, 3));
    SplitMix64 rng(11u);
    for (int trial = 0; trial < 1000; ++trial) {
        const ThetaMatrix& theta = (trial % 2 == 0) ? th2 : th3;
        const int d = theta.d();
        const Monomial a = random_monomial(rng, d, 6);
        const Monomial b = random_monomial(rng, d, 6);
        const Monomial c = random_monomial(rng, d, 6);
        auto [p_ab, n_ab] = multiply_monomials(a, b, theta);
        auto [p_ab_c, n_abc] = multiply_monomials(n_ab, c, theta);
        auto [p_bc, n_bc] = multiply_monomials(b, c, theta);
        auto [p_a_bc, n_abc2] = multiply_monomials(a, n_bc, theta);
        CHECK(n_abc == n_abc2);
        CHECK(std::abs(p_ab * p_ab_c - p_bc * p_a_bc) < 1e-14);
    }
}

TEST_CASE("polynomial algebra basics") {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    const TorusPoly x = random_poly(101u, theta, 3, 1.0, false);
    const TorusPoly y = random_poly(102u, theta, 2, 1.0, false);

    CHECK(std::abs(trace(monomial_poly(theta, {2, -1}))) == 0.0);
    CHECK(trace(monomial_poly(theta, {0, 0})) == cplx(1.0, 0.0));

    // star is an involution
    CHECK(coeff_distance(star(star(x)), x) < 1e-15);

    // trace is multiplicative-free but linear
    const TorusPoly sum = add(x, scale(y, cplx(2.0, 1.0)));
    CHECK(std::abs(trace(sum) - (trace(x) + cplx(2.0, 1.0) * trace(y))) < 1e-14);

    double sq = 0.0;
    for (const auto& [n, c] : x.coeffs) sq += std::norm(c);
    CHECK(std::abs(plancherel_norm(x) - std::sqrt(sq)) < 1e-13);

    // tau(x* x) = sum |alpha_n|^2 under the exact phase arithmetic
    CHECK(std::abs(trace(multiply(star(x), x)).real() - sq) < 1e-12);

    const ThetaMatrix other = ThetaMatrix::parse("0,1/2;-1/2,0");
    CHECK_THROWS_AS(multiply(x, random_poly(7u, other, 2)), ThetaMismatch);
    CHECK_THROWS_AS(random_poly(1u, theta, -1), BadConfig);
}

TEST_CASE("random polynomials are reproducible and respect flags") {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    const TorusPoly a = random_poly(42u, theta, 5, 0.7, true);
    const TorusPoly b = random_poly(42u, theta, 5, 0.7, true);
    CHECK(coeff_distance(a, b) == 0.0);
    CHECK(a.degree() <= 5);
    CHECK(coeff_distance(star(a), a) < 1e-15);
    const TorusPoly c = random_poly(43u, theta, 5, 0.7, true);
    CHECK(coeff_distance(a, c) > 0.0);
}

TEST_CASE("finite Weyl system represents the torus faithfully") {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    const RationalRep rep = build_rational_rep(theta, 8);
    CHECK(rep.q == 4);
    CHECK(rep.dim == 4);
    CHECK(rep.grid_points == 8);
    CHECK(weyl_relation_residual(rep) < 1e-12);
    CHECK(unitarity_residual(rep) < 1e-12);

    // representation is multiplicative: matrices of a product match the
    // product of matrices, phases included
    SplitMix64 rng(5u);
    for (int trial = 0; trial < 1000; ++trial) {
        const Monomial m = random_monomial(rng, 2, 6);
        const Monomial n = random_monomial(rng, 2, 6);
        auto [phase, sum] = multiply_monomials(m, n, theta);
        const Eigen::MatrixXcd lhs = monomial_matrix(rep, m) * monomial_matrix(rep, n);
        const Eigen::MatrixXcd rhs = phase * monomial_matrix(rep, sum);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("represented trace matches the algebraic trace") {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    const RationalRep rep = build_rational_rep(theta, 16);
    SplitMix64 rng(17u);
    for (int trial = 0; trial < 20; ++trial) {
        const TorusPoly x = random_poly(rng.next(), theta, 6, 0.8, false);
        const auto field = represent(x, rep);
        CHECK(std::abs(represented_trace(field, rep) - trace(x)) < 1e-12);
    }
}

TEST_CASE("q_override and model guards") {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/3;-1/3,0");
    const RationalRep rep6 = build_rational_rep(theta, 8, 6);
    CHECK(rep6.q == 6);
    CHECK(rep6.dim == 6);
    CHECK(weyl_relation_residual(rep6) < 1e-12);
    CHECK_THROWS_AS(build_rational_rep(theta, 8, 5), BadConfig);
    CHECK_THROWS_AS(build_rational_rep(theta, 0), BadConfig);

    CHECK_THROWS_AS(build_rational_rep(ThetaMatrix::parse("0,1/128;-1/128,0"), 8), DenominatorTooLarge);
    CHECK_THROWS_AS(build_rational_rep(ThetaMatrix::from_upper(4, Rat(1, 4)), 8), UnsupportedDimension);

    // lp_norm refuses a grid that cannot resolve the moment, unless allowed
    // to refine it
    const ThetaMatrix th4 = ThetaMatrix::parse("0,1/4;-1/4,0");
    const RationalRep coarse = build_rational_rep(th4, 4);
    const TorusPoly x = random_poly(3u, th4, 4, 1.0, false);
    CHECK_THROWS_AS(lp_norm(x, 4.0, coarse, false), GridTooCoarse);
    CHECK_THROWS_AS(lp_norm(x, 0.5, coarse), BadConfig);
    CHECK(lp_norm(x, 4.0, coarse, true) > 0.0);
}

TEST_CASE("lp norms on hand-checkable inputs") {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    const RationalRep rep = build_rational_rep(theta, 24);

    // a single monomial is unitary, every norm is 1
    const TorusPoly v = monomial_poly(theta, {2, -1});
    for (double p : {1.0, 2.0, 3.0, 4.0, 10.0})
        CHECK(std::abs(lp_norm(v, p, rep) - 1.0) < 1e-9);

    // orthogonal monomials with weights 3 and 4: the 2-norm is 5
    const TorusPoly pyth = add(monomial_poly(theta, {1, 0}, {3.0, 0.0}), monomial_poly(theta, {0, 1}, {4.0, 0.0}));
    CHECK(std::abs(lp_norm(pyth, 2.0, rep) - 5.0) < 1e-10);
    CHECK(std::abs(plancherel_norm(pyth) - 5.0) < 1e-14);
}

TEST_CASE("p = 2 norm equals the Plancherel norm") {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    const RationalRep rep = build_rational_rep(theta, 33);
    SplitMix64 rng(23u);
    for (int trial = 0; trial < 100; ++trial) {
        const TorusPoly x = random_poly(rng.next(), theta, 8, 0.6, false);
        CHECK(std::abs(lp_norm(x, 2.0, rep) - plancherel_norm(x)) < 1e-8);
    }
}

TEST_CASE("lp norms are nondecreasing in p") {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    const RationalRep rep = build_rational_rep(theta, 33);
    SplitMix64 rng(29u);
    for (int trial = 0; trial < 10; ++trial) {
        const TorusPoly x = random_poly(rng.next(), theta, 4, 0.8, false);
        const double n2 = lp_norm(x, 2.0, rep);
        const double n4 = lp_norm(x, 4.0, rep);
        const double n8 = lp_norm(x, 8.0, rep);
        CHECK(n2 <= n4 + 1e-9);
        CHECK(n4 <= n8 + 1e-9);
    }
}

TEST_CASE("four positive parts recombine and are positive") {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    const RationalRep rep = build_rational_rep(theta, 6);
    const TorusPoly x = random_poly(31u, theta, 3, 1.0, false);
    const auto field = represent(x, rep);
    const FourParts parts = four_positive_parts(field);
    for (std::size_t g = 0; g < field.size(); ++g) {
        const Eigen::MatrixXcd rebuilt = (parts.re_plus[g] - parts.re_minus[g]) +
                                         cplx(0.0, 1.0) * (parts.im_plus[g] - parts.im_minus[g]);
        CHECK((rebuilt - field[g]).cwiseAbs().maxCoeff() < 1e-12);
        for (const Eigen::MatrixXcd* part : {&parts.re_plus[g], &parts.re_minus[g], &parts.im_plus[g],
                                             &parts.im_minus[g]}) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(*part);
            CHECK(es.eigenvalues().minCoeff() > -1e-12);
        }
    }
}

TEST_CASE("grid phases are exact roots of unity") {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    const RationalRep rep = build_rational_rep(theta, 8);
    CHECK(rep.grid_size() == 64);
    const Monomial n{3, -2};
    for (std::size_t idx : {std::size_t{0}, std::size_t{17}, std::size_t{63}})
        CHECK(std::abs(std::abs(rep.grid_phase(idx, n)) - 1.0) < 1e-15);
    CHECK(rep.grid_phase(0, n) == cplx(1.0, 0.0));
}
