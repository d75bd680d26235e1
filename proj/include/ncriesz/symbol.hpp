#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "ncriesz/util.hpp"

namespace ncr {

// Dimension d >= 2 plus the kernel constant Gamma((d+1)/2) / pi^((d+1)/2).
struct DimensionParams {
    int d;
    double c_d;

    static DimensionParams make(int d);
};

// Riesz multiplier -i xi_j / |xi|; 0 at xi = 0 (constants are annihilated). j is 1-based.
cplx riesz_symbol(const std::vector<double>& xi, int j);

// exp(-4 pi^2 t xi_j^2)
double heat_multiplier(double t, double xi_j);

// c_d * x_j / |x|^{d+1} outside the ball |x| > eps, 0 inside.
double truncated_kernel(const std::vector<double>& x, int j, double eps, const DimensionParams& params);

// I_d(r) = int_{-1}^{1} e^{irs} (1-s^2)^{(d-1)/2} ds.
// Direct route: adaptive quadrature after s = sin(u), which makes the
// integrand entire; the imaginary part is computed, not assumed zero.
cplx inner_oscillatory_integral(double r, const DimensionParams& params, double quad_tol = 1e-10);

// Same integral through I_d(r) = sqrt(pi) Gamma((d+1)/2) (2/r)^{d/2} J_{d/2}(r);
// series limit below r = 1e-4. This is the hot-path form.
double inner_oscillatory_bessel(double r, const DimensionParams& params);

// m(x) = (1/pi) int_{2 pi x}^inf I_d(r) dr, evaluated through the equivalent
// proper integral 1 - (2/pi) int_0^1 (1-s^2)^{(d-1)/2} sin(2 pi x s)/s ds.
double truncation_symbol(double x, const DimensionParams& params, double quad_tol = 1e-8);

struct DirectSymbolResult {
    double value;
    double err_bound;    // quadrature estimate + certified tail bound
    double tail_cutoff;  // outer truncation radius actually used
};

// The defining improper integral: bulk quadrature to an adaptive cutoff, two
// exact integration-by-parts boundary terms at the cutoff, and an envelope
// bound on the remainder. Throws TailBoundFailure if the bound cannot be
// brought under quad_tol within the cutoff cap.
DirectSymbolResult truncation_symbol_direct(double x, const DimensionParams& params, double quad_tol = 1e-8,
                                            double tail_cutoff = 0.0);

// m'(x) = -2 I_d(2 pi x): differentiation of the outer integral in its lower
// limit (lower limit 2 pi x contributes the chain factor 2 pi against the 1/pi
// normalization). Matches central finite differences of truncation_symbol.
double truncation_symbol_derivative(double x, const DimensionParams& params);

// int_0^inf u m'(u)^2 du = (1/pi^2) int_0^inf r I_d(r)^2 dr.
// density_mult scales the panel density and tightens the tail cutoff; the
// refinement oracle in the tests compares density_mult 1 against 10.
double square_function_integral(const DimensionParams& params, double tol = 1e-4, int density_mult = 1);

// Sampled m and m' with monotone cubic (Fritsch-Carlson) interpolation.
// Grid: x = 0, a geometric section on [1e-5, 1], then a uniform section up to
// xmax. Values come from one anchored quadrature at xmax plus cumulative
// integration of the closed-form derivative; |m(0) - 1| then certifies the
// whole construction and is checked against 10 * quad_tol at build time.
class SymbolTable {
  public:
    static SymbolTable build(const DimensionParams& params, double xmax = 32.0, double quad_tol = 1e-8,
                             double uniform_step = 0.005);
    // same construction with explicit node counts for the two grid sections;
    // rows = 1 + n_geo + n_uni when xmax > 1
    static SymbolTable build_counted(const DimensionParams& params, double xmax, double quad_tol, int n_geo,
                                     int n_uni);

    double m(double x) const;   // interpolation inside, memoized quadrature beyond xmax
    double dm(double x) const;  // same policy for m'
    double err_at(double x) const;

    int d() const { return params_.d; }
    const DimensionParams& params() const { return params_; }
    double xmax() const { return xs_.back(); }
    double quad_tol() const { return quad_tol_; }
    double tail_cutoff() const { return tail_cutoff_; }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& m_vals() const { return m_vals_; }
    const std::vector<double>& dm_vals() const { return dm_vals_; }
    const std::vector<double>& errs() const { return errs_; }

    // CSV with header x,m,dm,err; 17 significant digits.
    void write_csv(std::ostream& os) const;

  private:
    SymbolTable() = default;

    std::size_t interval_of(double x) const;
    double interp(const std::vector<double>& vals, const std::vector<double>& slopes, double x) const;

    DimensionParams params_{};
    std::vector<double> xs_, m_vals_, dm_vals_, errs_;
    std::vector<double> m_slopes_, dm_slopes_;  // Fritsch-Carlson limited derivatives
    double quad_tol_ = 0.0;
    double tail_cutoff_ = 0.0;

    mutable std::unique_ptr<std::mutex> memo_mu_ = std::make_unique<std::mutex>();
    mutable std::map<double, double> m_memo_;  // exact quadrature cache beyond xmax
};

// Process-wide table per dimension (xmax 128), built once, shared by the
// transform modules and the radial profiles.
std::shared_ptr<const SymbolTable> shared_symbol_table(int d);

// Least-squares fit of the large-x oscillation of m:
// m(y) ~ y^{-kappa} [a0 cos(2 pi y) + b0 sin(2 pi y)]
//      + y^{-kappa-1} [a1 cos(2 pi y) + b1 sin(2 pi y)],  kappa = (d+1)/2.
struct SymbolAsymptoticFit {
    int d;
    double kappa;
    double a0, b0, a1, b1;
    double max_residual;  // over the fit window, absolute
};

SymbolAsymptoticFit fit_symbol_asymptotics(const SymbolTable& table, double y_lo = 32.0, double y_hi = 0.0);

struct RadialProfile {
    int d;
    std::vector<double> radii;
    std::vector<double> values;
    std::string kind;  // "phi" or "h"
    double fit_C = 0.0;      // sup of |value| * r^{d+1} over the fit range
    double fit_slope = 0.0;  // log-log slope on radii >= 2
    int sign_changes = 0;
};

// phi_t(x) = int m(t|xi|) e^{2 pi i <x,xi>} d xi at |x| = r, d in {2,3}.
// Bulk radial quadrature to an r-dependent cutoff plus the analytic
// oscillatory tail assembled from the asymptotic fit via Si/Ci.
double phi_point(double t, double r, const SymbolTable& table, const SymbolAsymptoticFit& fit);

RadialProfile phi_profile(double t, const DimensionParams& params, const std::vector<double>& radii);

// h is phi_1: hhat = m(|.|).
RadialProfile h_profile(const DimensionParams& params, const std::vector<double>& radii);

struct PhiL1Report {
    double l1;           // int |phi_t|
    double signed_mass;  // int phi_t (equals hhat-at-0 consistency, ~1)
    int sign_changes;
    double tail_mass;    // analytic contribution beyond the radial grid
    double fit_C;
};

PhiL1Report phi_l1_report(double t, const DimensionParams& params);

// The contractual scalar: ||phi_t||_{L1}, d in {2,3}.
double phi_l1_norm(double t, const DimensionParams& params);

// Radial Fourier transform of a sampled profile at frequency |xi| = rho
// (trapezoid over the profile grid plus fitted-decay tail); used by the
// h round-trip oracle.
double profile_fourier_value(const RadialProfile& profile, double rho);

}  // namespace ncr
