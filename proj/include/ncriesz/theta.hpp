#pragma once

#include <string>
#include <vector>

#include "ncriesz/util.hpp"

namespace ncr {

// Reduced fraction, den > 0. The torus phase arithmetic keeps all commutation
// exponents as exact integers over a common denominator so that repeated
// products never accumulate rounding.
struct Rat {
    long long num = 0;
    long long den = 1;

    Rat() = default;
    Rat(long long n, long long d);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    std::string str() const;
};

Rat parse_rational(const std::string& text);

// continued-fraction convergent with denominator <= max_den; used to flag
// irrational inputs as experimental approximations
Rat rationalize(double value, long long max_den, double* err = nullptr);

// e^{2 pi i e/den}; exact +-1, +-i when the reduced denominator divides 4
cplx phase_unit(long long e, long long den);

class ThetaMatrix {
  public:
    static ThetaMatrix zero(int d);
    // "0,1/4;-1/4,0": rows split by ';', entries by ','; validate=false keeps
    // a non-antisymmetric matrix so the harness can exercise the negative test
    static ThetaMatrix parse(const std::string& text, bool validate = true);
    static ThetaMatrix from_upper(int d, const Rat& upper);  // theta_{kl} = upper for all k < l

    int d() const { return d_; }
    const Rat& rat(int k, int l) const { return ent_[static_cast<std::size_t>(k * d_ + l)]; }
    double value(int k, int l) const { return rat(k, l).value(); }
    long long q() const;  // common denominator (lcm of entry denominators)
    bool is_antisymmetric() const;
    void require_antisymmetric() const;  // throws BadConfig
    bool operator==(const ThetaMatrix& o) const { return d_ == o.d_ && ent_ == o.ent_; }
    std::string str() const;

    // numerator of theta_{kl} over the common denominator q()
    long long num_over_q(int k, int l) const;

  private:
    ThetaMatrix() = default;
    int d_ = 0;
    std::vector<Rat> ent_;
};

}  // namespace ncr
