#pragma once

// Frequency-side model of the quantized Euclidean space: elements are fields
// of Fourier coefficients on a uniform grid [-R, R]^d with spacing h, acted
// upon by Weyl translations. All operations here are diagonal in frequency,
// so the deformation enters only through the phase cocycle weyl_phase.

#include <functional>
#include <string>
#include <vector>

#include "ncriesz/theta.hpp"
#include "ncriesz/util.hpp"

namespace ncr {

struct FrequencyField {
    int d = 2;
    double R = 8.0;   // grid half-width per axis
    double h = 0.125; // grid spacing; N = 2*(R/h)+1 points per axis
    std::vector<std::vector<double>> theta; // dense antisymmetric deformation matrix
    std::vector<cplx> samples;              // row-major over the d-dim grid

    static FrequencyField make(int d, double R, double h);

    int points_per_axis() const;
    std::size_t size() const { return samples.size(); }
    // frequency of grid index i along one axis
    double xi_of(int i) const { return -R + i * h; }
    std::size_t flat(const std::vector<int>& idx) const;
    std::vector<int> coords(std::size_t flat_idx) const;
    // zero out the outermost index ring on every axis (band-limit guard)
    void zero_boundary_ring();
    bool boundary_ring_is_zero() const;
};

// evaluation at frequency 0; throws OriginNotOnGrid if no grid point is 0
cplx qes_trace(const FrequencyField& f);

// h^{d/2} * l2 norm of the samples (discretized Plancherel norm)
double qes_l2_norm(const FrequencyField& f);

// modulation by e^{2 pi i <t, xi>}: frequency-side form of translation by t
FrequencyField qes_translate(const FrequencyField& f, const std::vector<double>& t);

// pointwise multiply by a frequency multiplier psi_hat
FrequencyField qes_convolve(const std::function<cplx(const std::vector<double>&)>& psi_hat,
                            const FrequencyField& f);

// multiplier m(t|xi|) built from the shared truncation-symbol table
FrequencyField qes_a_t(double t, const FrequencyField& f);

// Riesz multiplier -i xi_j / |xi| (0 at the origin), and its truncation
FrequencyField qes_riesz(int j, const FrequencyField& f);
FrequencyField qes_truncated_riesz(int j, double eps, const FrequencyField& f);

// max pointwise residual of qes_truncated_riesz vs qes_a_t . qes_riesz
double qes_factorization_residual(int j, double eps, const FrequencyField& f);

// e^{(i/2) <t, theta s>}
cplx weyl_phase(const std::vector<double>& t, const std::vector<double>& s, const ThetaMatrix& theta);

// residual of U(t)U(s)g = weyl_phase(s,t) U(t+s)g where
// (U(t)f)(r) = e^{-(i/2)<t, theta r>} f(r - t); throws OffGridShift if any
// component of t or s is not an integer multiple of h
double unitary_action_check(const std::vector<double>& t, const std::vector<double>& s,
                            const FrequencyField& g, const ThetaMatrix& theta);

// deterministic band-limited test field with zero boundary ring
FrequencyField random_field(int d, double R, double h, std::uint64_t seed);

std::string field_to_json(const FrequencyField& f);
FrequencyField field_from_json(const std::string& text);

// CSV slice along axis j through the origin: header "xi,re,im"
std::string field_axis_csv(const FrequencyField& f, int j);

}  // namespace ncr
