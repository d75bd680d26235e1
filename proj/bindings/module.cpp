#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "ncriesz/maximal.hpp"
#include "ncriesz/qeuclidean.hpp"
#include "ncriesz/symbol.hpp"
#include "ncriesz/theta.hpp"
#include "ncriesz/torus.hpp"
#include "ncriesz/transforms.hpp"

namespace py = pybind11;
using namespace ncr;

namespace {

// One-call trial: sample a self-adjoint polynomial, compare the maximal norm
// of its truncated transforms against the norm of the full transform.
py::dict torus_maximal_ratio(std::uint64_t seed, const std::string& theta_spec, double p, int degree,
                             int eps_count, int grid, long long q) {
    const ThetaMatrix theta = theta_spec == "zero" ? ThetaMatrix::zero(2) : ThetaMatrix::parse(theta_spec);
    const int pint = std::isinf(p) ? 4 : static_cast<int>(std::ceil(p));
    const int G = grid > 0 ? grid : 2 * degree * pint + 1;
    const RationalRep rep = build_rational_rep(theta, G, q);
    const auto table = shared_symbol_table(theta.d());

    const TorusPoly x = random_poly(seed, theta, degree, 1.0, true);
    const double riesz_norm = lp_norm(riesz_transform(1, x), p, rep);

    SelfAdjointFamily fam;
    fam.dim = rep.dim;
    fam.grid = rep.grid_size();
    for (int i = 0; i < eps_count; ++i) {
        const double eps = std::pow(2.0, i - 0.5 * (eps_count - 1));
        fam.members.push_back(represent(apply(MultiplierOp::truncated_riesz(1, eps, table), x), rep));
        fam.labels.push_back(eps);
    }

    SolverConfig cfg;
    cfg.p = p;
    cfg.tol_obj = 1e-5;
    cfg.tol_feas = 1e-8;
    cfg.max_iter = 2000;
    auto sol = maximal_norm_upper(fam, cfg);
    if (!sol.converged) {
        cfg.max_iter *= 4;
        sol = maximal_norm_upper(fam, cfg);
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double bound = (std::isinf(p) || p < 2.0) ? nan : std::pow(96.0 + 2.0 * std::sqrt(2.0), 2.0 / p);
    const double ratio = riesz_norm > 1e-12 ? sol.objective / riesz_norm : nan;

    py::dict out;
    out["seed"] = seed;
    out["p"] = p;
    out["degree"] = degree;
    out["eps_count"] = eps_count;
    out["riesz_norm"] = riesz_norm;
    out["maximal_upper"] = sol.objective;
    out["maximal_lower"] = maximal_norm_lower(fam, p);
    out["ratio"] = ratio;
    out["bound"] = bound;
    out["converged"] = sol.converged;
    return out;
}

}  // namespace

PYBIND11_MODULE(_ncriesz, m) {
    m.doc() = "numerical toolkit for maximal truncated transforms on quantized tori";

    m.def(
        "truncation_symbol",
        [](double x, int d, double quad_tol) { return truncation_symbol(x, DimensionParams::make(d), quad_tol); },
        py::arg("x"), py::arg("d") = 2, py::arg("quad_tol") = 1e-8,
        "radial profile of the truncated-kernel multiplier at |xi| = x");

    m.def(
        "truncation_symbol_derivative",
        [](double x, int d) { return truncation_symbol_derivative(x, DimensionParams::make(d)); }, py::arg("x"),
        py::arg("d") = 2, "derivative of the radial profile");

    m.def(
        "square_function_integral", [](int d) { return square_function_integral(DimensionParams::make(d)); },
        py::arg("d") = 2, "int_0^inf u m'(u)^2 du, bounded by 1/2");

    m.def(
        "phi_l1_norm", [](double t, int d) { return phi_l1_norm(t, DimensionParams::make(d)); }, py::arg("t"),
        py::arg("d") = 2, "L1 mass of the averaged kernel at scale t");

    m.def(
        "weyl_phase",
        [](const std::vector<double>& t, const std::vector<double>& s, const std::string& theta_spec) {
            return weyl_phase(t, s, ThetaMatrix::parse(theta_spec));
        },
        py::arg("t"), py::arg("s"), py::arg("theta"), "cocycle phase e^{(i/2) <t, theta s>}");

    m.def("torus_maximal_ratio", &torus_maximal_ratio, py::arg("seed"), py::arg("theta") = "0,1/4;-1/4,0",
          py::arg("p") = 2.0, py::arg("degree") = 2, py::arg("eps_count") = 5, py::arg("grid") = 0,
          py::arg("q") = 0,
          "run one sampled trial and report the maximal-to-single norm ratio with its certified bound");
}
