#pragma once

#include <functional>

#include "ncriesz/util.hpp"

namespace ncr {

// 16-point Gauss-Legendre panel on [a,b].
double gl16(const std::function<double(double)>& f, double a, double b);

// Composite GL16 with n equal panels.
double gl16_composite(const std::function<double(double)>& f, double a, double b, int n_panels);

struct QuadResult {
    double value;
    double err_est;
};

// Doubles the panel count until successive composite values agree within tol.
// err_est is the last inter-level difference. Throws QuadratureFailure if the
// budget runs out before tol is met.
QuadResult integrate_to_tol(const std::function<double(double)>& f, double a, double b, double tol,
                            int initial_panels = 1, int max_panels = 1 << 20);

// Sine and cosine integrals Si(x) = int_0^x sin(t)/t dt,
// Ci(x) = gamma + log(x) + int_0^x (cos(t)-1)/t dt, x > 0.
// Power series up to x = 20, auxiliary-function asymptotics beyond.
void si_ci(double x, double& si, double& ci);

// int_P^inf cos(a*rho + psi) / rho     d rho, a > 0, P > 0   (via Si/Ci)
double tail_cos_over_rho(double a, double psi, double P);

// int_P^inf cos(a*rho + psi) / rho^2   d rho, a >= 0, P > 0  (one integration by parts)
double tail_cos_over_rho2(double a, double psi, double P);

}  // namespace ncr
