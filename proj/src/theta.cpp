#include "ncriesz/theta.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ncriesz/errors.hpp"

namespace ncr {

Rat::Rat(long long n, long long d) {
    if (d == 0) throw BadConfig("Rat: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    num = (g == 0) ? 0 : n / g;
    den = (g == 0) ? 1 : d / g;
    if (num == 0) den = 1;
}

std::string Rat::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Rat parse_rational(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty()) throw BadConfig("parse_rational: empty entry");
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            if (s.find('.') != std::string::npos)
                throw IrrationalTheta("decimal entries are not accepted; use p/q rationals: " + s);
            return Rat(std::stoll(s), 1);
        }
        return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw BadConfig("parse_rational: cannot parse '" + text + "'");
    } catch (const std::out_of_range&) {
        throw BadConfig("parse_rational: entry out of range '" + text + "'");
    }
}

Rat rationalize(double value, long long max_den, double* err) {
    if (!std::isfinite(value)) throw BadConfig("rationalize: non-finite value");
    // Stern-Brocot / continued fraction expansion, stopping at max_den
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = value;
    for (int it = 0; it < 64; ++it) {
        const double fa = std::floor(x);
        const long long a = static_cast<long long>(fa);
        const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double frac = x - fa;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    if (q1 == 0) throw BadConfig("rationalize: no convergent within denominator bound");
    const Rat r(p1, q1);
    if (err) *err = std::abs(value - r.value());
    return r;
}

cplx phase_unit(long long e, long long den) {
    if (den <= 0) throw BadConfig("phase_unit: denominator must be positive");
    e %= den;
    if (e < 0) e += den;
    if (e == 0) return {1.0, 0.0};
    const long long g = std::gcd(e, den);
    const long long e2 = e / g, d2 = den / g;
    if (d2 == 1) return {1.0, 0.0};
    if (d2 == 2) return {-1.0, 0.0};
    if (d2 == 4) return (e2 == 1) ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
    return std::polar(1.0, kTwoPi * static_cast<double>(e2) / static_cast<double>(d2));
}

ThetaMatrix ThetaMatrix::zero(int d) {
    if (d < 2) throw BadConfig("ThetaMatrix: d must be >= 2");
    ThetaMatrix t;
    t.d_ = d;
    t.ent_.assign(static_cast<std::size_t>(d) * d, Rat());
    return t;
}

ThetaMatrix ThetaMatrix::parse(const std::string& text, bool validate) {
    std::vector<std::vector<Rat>> rows;
    std::stringstream row_stream(text);
    std::string row;
    while (std::getline(row_stream, row, ';')) {
        std::vector<Rat> entries;
        std::stringstream ent_stream(row);
        std::string ent;
        while (std::getline(ent_stream, ent, ',')) entries.push_back(parse_rational(ent));
        rows.push_back(std::move(entries));
    }
    const int d = static_cast<int>(rows.size());
    if (d < 2) throw BadConfig("ThetaMatrix::parse: need at least 2 rows");
    ThetaMatrix t;
    t.d_ = d;
    t.ent_.reserve(static_cast<std::size_t>(d) * d);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != d) throw BadConfig("ThetaMatrix::parse: matrix is not square");
        for (const Rat& e : r) t.ent_.push_back(e);
    }
    if (validate) t.require_antisymmetric();
    return t;
}

ThetaMatrix ThetaMatrix::from_upper(int d, const Rat& upper) {
    ThetaMatrix t = zero(d);
    for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l) {
            t.ent_[static_cast<std::size_t>(k * d + l)] = upper;
            t.ent_[static_cast<std::size_t>(l * d + k)] = Rat(-upper.num, upper.den);
        }
    return t;
}

long long ThetaMatrix::q() const {
    long long q = 1;
    for (const Rat& e : ent_) q = std::lcm(q, e.den);
    return q;
}

bool ThetaMatrix::is_antisymmetric() const {
    for (int k = 0; k < d_; ++k) {
        if (rat(k, k).num != 0) return false;
        for (int l = k + 1; l < d_; ++l) {
            const Rat &a = rat(k, l), &b = rat(l, k);
            if (a.num != -b.num || a.den != b.den) return false;
        }
    }
    return true;
}

void ThetaMatrix::require_antisymmetric() const {
    if (!is_antisymmetric()) throw BadConfig("theta matrix must be antisymmetric with zero diagonal");
}

std::string ThetaMatrix::str() const {
    std::string s;
    for (int k = 0; k < d_; ++k) {
        if (k) s += ';';
        for (int l = 0; l < d_; ++l) {
            if (l) s += ',';
            s += rat(k, l).str();
        }
    }
    return s;
}

long long ThetaMatrix::num_over_q(int k, int l) const {
    const Rat& r = rat(k, l);
    return r.num * (q() / r.den);
}

}  // namespace ncr
