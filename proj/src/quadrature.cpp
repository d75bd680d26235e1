#include "ncriesz/quadrature.hpp"

#include <cmath>

#include "ncriesz/errors.hpp"

namespace ncr {

namespace {

// Abscissae/weights for the positive half of the 16-point rule.
constexpr double kGlX[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

}  // namespace

double gl16(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = h * kGlX[i];
        s += kGlW[i] * (f(c - dx) + f(c + dx));
    }
    return s * h;
}

double gl16_composite(const std::function<double(double)>& f, double a, double b, int n_panels) {
    if (n_panels < 1) n_panels = 1;
    const double h = (b - a) / n_panels;
    std::vector<double> parts(static_cast<std::size_t>(n_panels));
    for (int i = 0; i < n_panels; ++i) parts[static_cast<std::size_t>(i)] = gl16(f, a + i * h, a + (i + 1) * h);
    return pairwise_sum(parts);
}

QuadResult integrate_to_tol(const std::function<double(double)>& f, double a, double b, double tol,
                            int initial_panels, int max_panels) {
    int n = initial_panels < 1 ? 1 : initial_panels;
    double prev = gl16_composite(f, a, b, n);
    while (n <= max_panels) {
        n *= 2;
        const double cur = gl16_composite(f, a, b, n);
        const double diff = std::abs(cur - prev);
        if (diff <= tol) return {cur, diff};
        prev = cur;
    }
    throw QuadratureFailure("panel doubling exhausted before reaching tolerance");
}

void si_ci(double x, double& si, double& ci) {
    constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
    if (x <= 0.0) throw QuadratureFailure("si_ci requires x > 0");
    if (x <= 20.0) {
        // Si: sum (-1)^k x^{2k+1} / ((2k+1)(2k+1)!), Cin: sum (-1)^k x^{2k} / (2k (2k)!), k >= 1.
        double s = 0.0;
        double t_si = x;  // x^{2k+1}/(2k+1)!
        for (int k = 0;; ++k) {
            const double add = t_si / (2.0 * k + 1.0);
            s += add;
            if (std::abs(add) < 1e-18 * std::abs(s) + 1e-300) break;
            t_si *= -x * x / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            if (k > 80) break;
        }
        si = s;
        double cin = 0.0;
        double t_ci = -x * x / 2.0;  // (-1)^k x^{2k}/(2k)! starting at k=1
        for (int k = 1;; ++k) {
            const double add = t_ci / (2.0 * k);
            cin += add;
            if (std::abs(add) < 1e-18 * std::abs(cin) + 1e-300) break;
            t_ci *= -x * x / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
            if (k > 80) break;
        }
        ci = kEulerGamma + std::log(x) + cin;
        return;
    }
    // Auxiliary functions: Si = pi/2 - f cos - g sin, Ci = f sin - g cos with
    // f ~ (1/x) sum (-1)^k (2k)!/x^{2k}, g ~ (1/x^2) sum (-1)^k (2k+1)!/x^{2k}.
    double f = 0.0, g = 0.0, fk = 1.0, gk = 1.0;
    const double x2 = x * x;
    for (int k = 0; k < 10; ++k) {
        f += fk;
        g += gk;
        fk *= -(2.0 * k + 1.0) * (2.0 * k + 2.0) / x2;
        gk *= -(2.0 * k + 2.0) * (2.0 * k + 3.0) / x2;
    }
    f /= x;
    g /= x2;
    si = 0.5 * kPi - f * std::cos(x) - g * std::sin(x);
    ci = f * std::sin(x) - g * std::cos(x);
}

double tail_cos_over_rho(double a, double psi, double P) {
    // cos(a rho + psi) = cos(psi) cos(a rho) - sin(psi) sin(a rho);
    // int_P^inf cos(u)/u du = -Ci(aP), int_P^inf sin(u)/u du = pi/2 - Si(aP).
    if (a <= 0.0) throw QuadratureFailure("tail_cos_over_rho requires positive frequency");
    double si, ci;
    si_ci(a * P, si, ci);
    return -std::cos(psi) * ci - std::sin(psi) * (0.5 * kPi - si);
}

double tail_cos_over_rho2(double a, double psi, double P) {
    if (a == 0.0) return std::cos(psi) / P;
    if (a < 0.0) return tail_cos_over_rho2(-a, -psi, P);
    // by parts with d(-1/rho): cos(aP+psi)/P - a * int_P^inf sin(a rho + psi)/rho
    double si, ci;
    si_ci(a * P, si, ci);
    const double int_sin_over_rho = std::cos(psi) * (0.5 * kPi - si) - std::sin(psi) * ci;
    return std::cos(a * P + psi) / P - a * int_sin_over_rho;
}

}  // namespace ncr
