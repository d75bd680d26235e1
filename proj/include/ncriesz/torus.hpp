#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "ncriesz/theta.hpp"
#include "ncriesz/util.hpp"

namespace ncr {

using Monomial = std::vector<int>;

// Finite Fourier polynomial sum_n alpha_n V^n with the ordered convention
// V^n = V_1^{n_1} ... V_d^{n_d}.
struct TorusPoly {
    ThetaMatrix theta;
    std::map<Monomial, cplx> coeffs;

    int d() const { return theta.d(); }
    int degree() const;  // max infinity-norm over the support
    TorusPoly& prune(double tol = 0.0);
};

TorusPoly monomial_poly(const ThetaMatrix& theta, const Monomial& n, cplx coeff = {1.0, 0.0});

// V^m V^n = phase * V^{m+n}; phase = e^{2 pi i sum_{k>l} theta_{kl} m_k n_l},
// evaluated through exact integer exponent arithmetic over the common
// denominator of theta.
std::pair<cplx, Monomial> multiply_monomials(const Monomial& m, const Monomial& n, const ThetaMatrix& theta);

// adjoint phase C_{theta,n} = e^{-2 pi i sum_{k<l} theta_{kl} n_k n_l}
cplx adjoint_phase(const Monomial& n, const ThetaMatrix& theta);

TorusPoly star(const TorusPoly& x);
TorusPoly multiply(const TorusPoly& x, const TorusPoly& y);
TorusPoly add(const TorusPoly& x, const TorusPoly& y);
TorusPoly scale(const TorusPoly& x, cplx c);

cplx trace(const TorusPoly& x);
cplx fourier_coefficient(const TorusPoly& x, const Monomial& n);
double plancherel_norm(const TorusPoly& x);

double coeff_distance(const TorusPoly& x, const TorusPoly& y);  // max over union support

TorusPoly random_poly(std::uint64_t seed, const ThetaMatrix& theta, int degree, double density = 1.0,
                      bool self_adjoint = false);

// Finite Weyl system for rational theta: generators act on (Z/qZ)^{d-1} as a
// coordinate shift times a character; the lost scalar torus is restored by an
// auxiliary uniform grid on T^d so that the represented trace is faithful on
// polynomials of degree < grid/2.
struct RationalRep {
    ThetaMatrix theta;
    long long q = 1;
    int dim = 1;                              // q^{d-1}
    std::vector<Eigen::MatrixXcd> gen_mats;   // A_1..A_d
    int grid_points = 1;                      // G, points per torus axis
    double trace_normalization = 1.0;         // 1/dim

    int d() const { return theta.d(); }
    std::size_t grid_size() const;            // G^d
    // e^{2 pi i <t,n>} at grid node `idx`, exact phase arithmetic
    cplx grid_phase(std::size_t idx, const Monomial& n) const;
};

// q_override: modulus for the clock/shift pair, any positive multiple of the
// common denominator of theta (0 picks the denominator itself)
RationalRep build_rational_rep(const ThetaMatrix& theta, int grid_points, long long q_override = 0);

double weyl_relation_residual(const RationalRep& rep);  // max over generator pairs
double unitarity_residual(const RationalRep& rep);

// A^n = A_1^{n_1} ... A_d^{n_d} (matrix part of represent(V^n))
Eigen::MatrixXcd monomial_matrix(const RationalRep& rep, const Monomial& n);

// matrix field over the t_grid, index order = row-major over axes
std::vector<Eigen::MatrixXcd> represent(const TorusPoly& x, const RationalRep& rep);

cplx represented_trace(const std::vector<Eigen::MatrixXcd>& field, const RationalRep& rep);

// (tau |x|^p)^{1/p} through the representation; even integer p uses exact
// trapezoid quadrature (requires grid > degree * p), other p stabilize by
// grid doubling until the value moves < 1e-8.
double lp_norm(const TorusPoly& x, double p, const RationalRep& rep, bool allow_refine = true);

struct FourParts {
    std::vector<Eigen::MatrixXcd> re_plus, re_minus, im_plus, im_minus;
};

FourParts four_positive_parts(const std::vector<Eigen::MatrixXcd>& field);

}  // namespace ncr
