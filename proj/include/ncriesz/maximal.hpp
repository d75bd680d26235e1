#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ncriesz/util.hpp"

namespace ncr {

// Finite family of Hermitian matrix fields over a shared grid. members[k][g]
// is the k-th field at grid node g; labels are the family parameters (eps or
// r), strictly increasing.
struct SelfAdjointFamily {
    std::vector<std::vector<Eigen::MatrixXcd>> members;
    std::vector<double> labels;
    int dim = 0;
    std::size_t grid = 0;

    void validate() const;  // throws NotHermitian / BadConfig
};

struct SolverConfig {
    double p = 2.0;
    double tol_feas = 1e-8;
    double tol_obj = 1e-6;
    int max_iter = 5000;
    double step_shrink = 0.5;  // backtracking factor
};

struct MajorantSolution {
    std::vector<Eigen::MatrixXcd> a;     // PSD majorant field
    double objective = 0.0;              // achieved ||a||_p, normalized trace
    double feasibility_residual = 0.0;   // most negative eigenvalue of a -+ x
    long long iterations = 0;
    bool converged = true;
};

// Single grid point: minimize ||a||_p over the spectrahedron
// {a : -a <= x_k <= a for all k}. p=2 is the exact Frobenius projection of 0
// (Dykstra); p=inf has the closed form (max_k ||x_k||_op) I; other p run
// projected gradient with Dykstra feasibility projections. The returned value
// is always a certified upper bound: the final iterate is shifted by the
// residual so the constraints hold exactly.
struct PointSolve {
    Eigen::MatrixXcd a;
    double value = 0.0;  // (tr(a^p)/dim)^{1/p} or lambda_max for p=inf
    int iterations = 0;
    bool converged = true;
};

PointSolve pointwise_majorant_solve(const std::vector<Eigen::MatrixXcd>& mats, const SolverConfig& cfg,
                                    const Eigen::MatrixXcd* warm_start = nullptr);

MajorantSolution maximal_norm_upper(const SelfAdjointFamily& family, const SolverConfig& cfg);

// Certified lower bound: diagonal dominance in each member's eigenbasis plus
// majorization of the diagonal by the spectrum (Schur convexity of t^p).
// Subsumes max_k ||x_k||_p.
double maximal_norm_lower(const SelfAdjointFamily& family, double p);

// Non-self-adjoint families: split into Hermitian and skew parts, bound each
// by its own majorant solve, and add (the four-positive-parts reduction
// recombined so a self-adjoint family reproduces maximal_norm_upper).
double maximal_norm_general(const std::vector<std::vector<Eigen::MatrixXcd>>& members, const SolverConfig& cfg);

// ||x||_p of one Hermitian field under the normalized trace + grid mean
double field_lp_norm(const std::vector<Eigen::MatrixXcd>& field, double p, int dim);

double family_feasibility_residual(const SelfAdjointFamily& family, const std::vector<Eigen::MatrixXcd>& a);

}  // namespace ncr
