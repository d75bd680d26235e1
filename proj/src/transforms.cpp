#include "ncriesz/transforms.hpp"

#include <cmath>
#include <numeric>

#include "ncriesz/errors.hpp"

namespace ncr {

namespace {

long long norm_sq(const Monomial& n) {
    long long s = 0;
    for (int nk : n) s += static_cast<long long>(nk) * nk;
    return s;
}

}  // namespace

MultiplierOp MultiplierOp::riesz(int j) {
    if (j < 1) throw BadConfig("riesz: j must be >= 1");
    MultiplierOp op;
    op.kind_ = "riesz";
    op.j_ = j;
    return op;
}

MultiplierOp MultiplierOp::truncated_riesz(int j, double eps, std::shared_ptr<const SymbolTable> table) {
    if (j < 1 || eps <= 0.0) throw BadConfig("truncated_riesz: need j >= 1 and eps > 0");
    MultiplierOp op;
    op.kind_ = "truncated_riesz";
    op.j_ = j;
    op.scalar_ = eps;
    op.table_ = std::move(table);
    return op;
}

MultiplierOp MultiplierOp::a_t(double t, std::shared_ptr<const SymbolTable> table) {
    if (t <= 0.0) throw BadConfig("a_t: t must be > 0");
    MultiplierOp op;
    op.kind_ = "a_t";
    op.scalar_ = t;
    op.table_ = std::move(table);
    return op;
}

MultiplierOp MultiplierOp::heat(int j, double t) {
    if (j < 1 || t < 0.0) throw BadConfig("heat: need j >= 1 and t >= 0");
    MultiplierOp op;
    op.kind_ = "heat";
    op.j_ = j;
    op.scalar_ = t;
    return op;
}

MultiplierOp MultiplierOp::rotation(std::vector<double> z) {
    MultiplierOp op;
    op.kind_ = "rotation";
    op.z_ = std::move(z);
    return op;
}

MultiplierOp MultiplierOp::laplacian() {
    MultiplierOp op;
    op.kind_ = "laplacian";
    return op;
}

cplx MultiplierOp::symbol(const Monomial& n) const {
    const long long S = norm_sq(n);
    if (kind_ == "riesz") {
        if (S == 0) return {0.0, 0.0};
        return cplx(0.0, -1.0) *
               (static_cast<double>(n[static_cast<std::size_t>(j_ - 1)]) / std::sqrt(static_cast<double>(S)));
    }
    if (kind_ == "truncated_riesz") {
        if (S == 0) return {0.0, 0.0};
        const double mag = std::sqrt(static_cast<double>(S));
        double m;
        try {
            m = table_->m(scalar_ * mag);
        } catch (const std::exception& e) {
            throw SymbolEvaluationFailure(e.what());
        }
        return cplx(0.0, -1.0) * (static_cast<double>(n[static_cast<std::size_t>(j_ - 1)]) / mag) * m;
    }
    if (kind_ == "a_t") {
        if (S == 0) return {1.0, 0.0};  // m(0) = 1
        try {
            return {table_->m(scalar_ * std::sqrt(static_cast<double>(S))), 0.0};
        } catch (const std::exception& e) {
            throw SymbolEvaluationFailure(e.what());
        }
    }
    if (kind_ == "heat") {
        const double nj = static_cast<double>(n[static_cast<std::size_t>(j_ - 1)]);
        return {std::exp(-4.0 * kPi * kPi * scalar_ * nj * nj), 0.0};
    }
    if (kind_ == "rotation") {
        double phase = 0.0;
        for (std::size_t k = 0; k < z_.size(); ++k) phase += z_[k] * n[k];
        return std::polar(1.0, kTwoPi * phase);
    }
    // laplacian
    return {-4.0 * kPi * kPi * static_cast<double>(S), 0.0};
}

TorusPoly apply(const MultiplierOp& op, const TorusPoly& x) {
    TorusPoly out{x.theta, {}};
    for (const auto& [n, c] : x.coeffs) {
        const cplx s = op.symbol(n);
        if (s != cplx{0.0, 0.0}) out.coeffs.emplace(n, s * c);
    }
    return out;
}

TorusPoly riesz_transform(int j, const TorusPoly& x) { return apply(MultiplierOp::riesz(j), x); }

TorusPoly truncated_riesz(int j, double eps, const TorusPoly& x) {
    return apply(MultiplierOp::truncated_riesz(j, eps, shared_symbol_table(x.d())), x);
}

double riesz_laplacian_identity_check(const TorusPoly& x, int j) {
    if (j < 1 || j > x.d()) throw BadConfig("riesz_laplacian_identity_check: bad j");
    double worst = 0.0;
    for (const auto& [n, c] : x.coeffs) {
        const long long S = norm_sq(n);
        const long long nj = n[static_cast<std::size_t>(j - 1)];
        // left side (-i n_j/|n|)^2 (-4 pi^2 |n|^2): the (-i)^2 and the two
        // minus signs cancel and the rational factor (nj^2/S)*S is reduced in
        // integer arithmetic, so no |n| ever goes through a square root
        const long long num = nj * nj * S;
        const long long den = (S == 0) ? 1 : S;
        const long long g = std::gcd(num < 0 ? -num : num, den);
        const long long num_r = (g == 0) ? 0 : num / g;
        const long long den_r = (g == 0) ? 1 : den / g;
        const cplx lhs = c * (4.0 * kPi * kPi * (static_cast<double>(num_r) / static_cast<double>(den_r)));
        const cplx rhs = c * (4.0 * kPi * kPi * static_cast<double>(nj * nj));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double rotate_then_transform_check(const TorusPoly& x, const std::vector<double>& z, int j, double eps) {
    const auto table = shared_symbol_table(x.d());
    const MultiplierOp rot = MultiplierOp::rotation(z);
    const MultiplierOp trunc = MultiplierOp::truncated_riesz(j, eps, table);
    return coeff_distance(apply(rot, apply(trunc, x)), apply(trunc, apply(rot, x)));
}

}  // namespace ncr
