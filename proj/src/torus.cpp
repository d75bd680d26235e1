#include "ncriesz/torus.hpp"

#include <algorithm>
#include <cmath>

#include "ncriesz/errors.hpp"

namespace ncr {

namespace {

void require_same_theta(const ThetaMatrix& a, const ThetaMatrix& b) {
    if (!(a == b)) throw ThetaMismatch("operands live on different quantum tori");
}

long long ipow(long long base, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

int TorusPoly::degree() const {
    int deg = 0;
    for (const auto& [n, c] : coeffs)
        for (int nk : n) deg = std::max(deg, std::abs(nk));
    return deg;
}

TorusPoly& TorusPoly::prune(double tol) {
    for (auto it = coeffs.begin(); it != coeffs.end();) {
        if (std::abs(it->second.real()) <= tol && std::abs(it->second.imag()) <= tol)
            it = coeffs.erase(it);
        else
            ++it;
    }
    return *this;
}

TorusPoly monomial_poly(const ThetaMatrix& theta, const Monomial& n, cplx coeff) {
    if (static_cast<int>(n.size()) != theta.d()) throw BadConfig("monomial_poly: index length != d");
    TorusPoly x{theta, {}};
    x.coeffs.emplace(n, coeff);
    return x;
}

std::pair<cplx, Monomial> multiply_monomials(const Monomial& m, const Monomial& n, const ThetaMatrix& theta) {
    const int d = theta.d();
    if (static_cast<int>(m.size()) != d || static_cast<int>(n.size()) != d)
        throw BadConfig("multiply_monomials: index length != d");
    const long long q = theta.q();
    long long e = 0;
    for (int k = 1; k < d; ++k)
        for (int l = 0; l < k; ++l) e += theta.num_over_q(k, l) * m[k] * n[l];
    Monomial sum(m.size());
    for (int k = 0; k < d; ++k) sum[k] = m[k] + n[k];
    return {phase_unit(e, q), sum};
}

cplx adjoint_phase(const Monomial& n, const ThetaMatrix& theta) {
    const int d = theta.d();
    const long long q = theta.q();
    long long e = 0;
    for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l) e -= theta.num_over_q(k, l) * n[k] * n[l];
    return phase_unit(e, q);
}

TorusPoly star(const TorusPoly& x) {
    TorusPoly out{x.theta, {}};
    for (const auto& [n, c] : x.coeffs) {
        Monomial neg(n.size());
        for (std::size_t k = 0; k < n.size(); ++k) neg[k] = -n[k];
        out.coeffs[neg] = std::conj(c) * adjoint_phase(n, x.theta);
    }
    return out;
}

TorusPoly multiply(const TorusPoly& x, const TorusPoly& y) {
    require_same_theta(x.theta, y.theta);
    TorusPoly out{x.theta, {}};
    for (const auto& [m, a] : x.coeffs)
        for (const auto& [n, b] : y.coeffs) {
            auto [phase, sum] = multiply_monomials(m, n, x.theta);
            out.coeffs[sum] += a * b * phase;
        }
    return out.prune();
}

TorusPoly add(const TorusPoly& x, const TorusPoly& y) {
    require_same_theta(x.theta, y.theta);
    TorusPoly out = x;
    for (const auto& [n, c] : y.coeffs) out.coeffs[n] += c;
    return out;
}

TorusPoly scale(const TorusPoly& x, cplx c) {
    TorusPoly out = x;
    for (auto& [n, v] : out.coeffs) v *= c;
    return out;
}

cplx trace(const TorusPoly& x) {
    const Monomial zero(static_cast<std::size_t>(x.d()), 0);
    const auto it = x.coeffs.find(zero);
    return it == x.coeffs.end() ? cplx{0.0, 0.0} : it->second;
}

cplx fourier_coefficient(const TorusPoly& x, const Monomial& n) {
    // literal tau((V^n)* x); consistency with the stored coefficient is the
    // contract that validates the phase conventions
    return trace(multiply(star(monomial_poly(x.theta, n)), x));
}

double plancherel_norm(const TorusPoly& x) {
    std::vector<double> sq;
    sq.reserve(x.coeffs.size());
    for (const auto& [n, c] : x.coeffs) sq.push_back(std::norm(c));
    return std::sqrt(pairwise_sum(sq));
}

double coeff_distance(const TorusPoly& x, const TorusPoly& y) {
    double worst = 0.0;
    for (const auto& [n, c] : x.coeffs) {
        const auto it = y.coeffs.find(n);
        const cplx other = it == y.coeffs.end() ? cplx{0.0, 0.0} : it->second;
        worst = std::max(worst, std::abs(c - other));
    }
    for (const auto& [n, c] : y.coeffs)
        if (x.coeffs.find(n) == x.coeffs.end()) worst = std::max(worst, std::abs(c));
    return worst;
}

TorusPoly random_poly(std::uint64_t seed, const ThetaMatrix& theta, int degree, double density,
                      bool self_adjoint) {
    if (degree < 0 || density <= 0.0 || density > 1.0) throw BadConfig("random_poly: bad degree/density");
    SplitMix64 rng(seed);
    const int d = theta.d();
    TorusPoly x{theta, {}};
    Monomial n(static_cast<std::size_t>(d), -degree);
    // lexicographic walk over the degree box keeps the draw order fixed
    bool done = false;
    while (!done) {
        const double u = rng.uniform();
        const cplx c = rng.complex_gaussian();
        if (u < density) x.coeffs[n] = c;
        int k = d - 1;
        while (k >= 0) {
            if (n[k] < degree) {
                ++n[k];
                break;
            }
            n[k] = -degree;
            --k;
        }
        done = (k < 0);
    }
    if (self_adjoint) x = scale(add(x, star(x)), 0.5);
    return x.prune();
}

// ---------------------------------------------------------------------------
// rational representation

std::size_t RationalRep::grid_size() const {
    std::size_t s = 1;
    for (int k = 0; k < d(); ++k) s *= static_cast<std::size_t>(grid_points);
    return s;
}

cplx RationalRep::grid_phase(std::size_t idx, const Monomial& n) const {
    const int dd = d();
    long long e = 0;
    std::size_t rest = idx;
    for (int k = dd - 1; k >= 0; --k) {
        const long long ik = static_cast<long long>(rest % static_cast<std::size_t>(grid_points));
        rest /= static_cast<std::size_t>(grid_points);
        e += ik * n[static_cast<std::size_t>(k)];
    }
    return phase_unit(e, grid_points);
}

RationalRep build_rational_rep(const ThetaMatrix& theta, int grid_points, long long q_override) {
    theta.require_antisymmetric();
    const int d = theta.d();
    if (d > 3) throw UnsupportedDimension("matrix models are built for d <= 3 only");
    if (grid_points < 1) throw BadConfig("build_rational_rep: grid_points must be >= 1");
    long long q = theta.q();
    if (q_override != 0) {
        if (q_override < q || q_override % q != 0)
            throw BadConfig("build_rational_rep: q_override must be a positive multiple of the theta denominator");
        q = q_override;
    }
    if (q > 64) throw DenominatorTooLarge("common denominator " + std::to_string(q) + " exceeds 64");

    const int dim = static_cast<int>(ipow(q, d - 1));
    RationalRep rep{theta, q, dim, {}, grid_points, 1.0 / dim};

    const long long mul = q / theta.q();  // exponent rescale for an override modulus
    const int nb = d - 1;  // basis coordinates, w in (Z/qZ)^{d-1}
    const auto flat = [&](const std::vector<long long>& w) {
        std::size_t idx = 0;
        for (int k = 0; k < nb; ++k) idx = idx * static_cast<std::size_t>(q) + static_cast<std::size_t>(w[k]);
        return idx;
    };

    // A_k e_w = omega^{<r_k, w>} e_{w + e_k} for k < d, A_d e_w = omega^{<r_d, w>} e_w,
    // with r_k chosen lower-triangular from the theta numerators so that
    // A_k A_l = e^{2 pi i theta_{kl}} A_l A_k.
    rep.gen_mats.assign(static_cast<std::size_t>(d), Eigen::MatrixXcd::Zero(rep.dim, rep.dim));
    for (int k = 0; k < d; ++k) {
        std::vector<long long> r(static_cast<std::size_t>(nb), 0);
        for (int l = 0; l < nb; ++l) {
            if (k < nb && l < k) r[l] = mul * theta.num_over_q(k, l);
            if (k == d - 1) r[l] = mul * theta.num_over_q(d - 1, l);
        }
        std::vector<long long> w(static_cast<std::size_t>(nb), 0);
        for (std::size_t src = 0; src < static_cast<std::size_t>(rep.dim); ++src) {
            long long e = 0;
            for (int l = 0; l < nb; ++l) e += r[l] * w[l];
            std::vector<long long> w2 = w;
            if (k < nb) w2[k] = (w2[k] + 1) % q;
            rep.gen_mats[k](static_cast<Eigen::Index>(flat(w2)), static_cast<Eigen::Index>(src)) =
                phase_unit(e, q);
            for (int l = nb - 1; l >= 0; --l) {
                if (w[l] + 1 < q) {
                    ++w[l];
                    break;
                }
                w[l] = 0;
            }
        }
    }
    return rep;
}

double weyl_relation_residual(const RationalRep& rep) {
    double worst = 0.0;
    const int d = rep.d();
    for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l) {
            const cplx phase = phase_unit((rep.q / rep.theta.q()) * rep.theta.num_over_q(k, l), rep.q);
            const Eigen::MatrixXcd lhs = rep.gen_mats[k] * rep.gen_mats[l];
            const Eigen::MatrixXcd rhs = phase * (rep.gen_mats[l] * rep.gen_mats[k]);
            worst = std::max(worst, (lhs - rhs).norm());
        }
    return worst;
}

double unitarity_residual(const RationalRep& rep) {
    double worst = 0.0;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
    for (const auto& A : rep.gen_mats) worst = std::max(worst, (A.adjoint() * A - id).norm());
    return worst;
}

Eigen::MatrixXcd monomial_matrix(const RationalRep& rep, const Monomial& n) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
    for (int k = 0; k < rep.d(); ++k) {
        const int e = n[static_cast<std::size_t>(k)];
        const Eigen::MatrixXcd base = e >= 0 ? rep.gen_mats[k] : Eigen::MatrixXcd(rep.gen_mats[k].adjoint());
        for (int i = 0; i < std::abs(e); ++i) M = M * base;
    }
    return M;
}

std::vector<Eigen::MatrixXcd> represent(const TorusPoly& x, const RationalRep& rep) {
    require_same_theta(x.theta, rep.theta);
    // per-axis power cache so each support monomial costs d-1 products
    const int d = rep.d();
    const int deg = x.degree();
    std::vector<std::vector<Eigen::MatrixXcd>> powers(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        auto& pk = powers[static_cast<std::size_t>(k)];
        pk.assign(static_cast<std::size_t>(2 * deg + 1), Eigen::MatrixXcd());
        pk[static_cast<std::size_t>(deg)] = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
        for (int e = 1; e <= deg; ++e) {
            pk[static_cast<std::size_t>(deg + e)] = pk[static_cast<std::size_t>(deg + e - 1)] * rep.gen_mats[k];
            pk[static_cast<std::size_t>(deg - e)] =
                pk[static_cast<std::size_t>(deg - e + 1)] * rep.gen_mats[k].adjoint();
        }
    }
    std::vector<std::pair<Monomial, cplx>> support(x.coeffs.begin(), x.coeffs.end());
    std::vector<Eigen::MatrixXcd> mats(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
        Eigen::MatrixXcd M = powers[0][static_cast<std::size_t>(deg + support[i].first[0])];
        for (int k = 1; k < d; ++k) M = M * powers[static_cast<std::size_t>(k)][static_cast<std::size_t>(deg + support[i].first[static_cast<std::size_t>(k)])];
        mats[i] = M;
    }

    std::vector<Eigen::MatrixXcd> field(rep.grid_size());
    parallel_for(field.size(), global_thread_count(), [&](std::size_t idx) {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
        for (std::size_t i = 0; i < support.size(); ++i)
            M += (support[i].second * rep.grid_phase(idx, support[i].first)) * mats[i];
        field[idx] = std::move(M);
    });
    return field;
}

cplx represented_trace(const std::vector<Eigen::MatrixXcd>& field, const RationalRep& rep) {
    std::vector<cplx> traces(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) traces[i] = field[i].trace() * rep.trace_normalization;
    return pairwise_sum(traces) / static_cast<double>(field.size());
}

namespace {

bool is_even_integer(double p) { return p > 0 && std::floor(p) == p && std::fmod(p, 2.0) == 0.0 && p <= 64; }

Eigen::MatrixXcd psd_int_power(const Eigen::MatrixXcd& B, int e) {
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(B.rows(), B.cols());
    Eigen::MatrixXcd base = B;
    int k = e;
    while (k > 0) {
        if (k & 1) result = result * base;
        base = base * base;
        k >>= 1;
    }
    return result;
}

double lp_norm_once(const std::vector<Eigen::MatrixXcd>& field, double p, int dim) {
    if (std::isinf(p)) {
        double worst = 0.0;
        for (const auto& M : field) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M.adjoint() * M, Eigen::EigenvaluesOnly);
            worst = std::max(worst, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
        }
        return worst;
    }
    std::vector<double> vals(field.size());
    if (is_even_integer(p)) {
        const int half = static_cast<int>(p) / 2;
        for (std::size_t i = 0; i < field.size(); ++i) {
            const Eigen::MatrixXcd B = field[i].adjoint() * field[i];
            vals[i] = psd_int_power(B, half).trace().real() / dim;
        }
    } else {
        for (std::size_t i = 0; i < field.size(); ++i) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(field[i].adjoint() * field[i],
                                                               Eigen::EigenvaluesOnly);
            double s = 0.0;
            for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
                s += std::pow(std::sqrt(std::max(0.0, es.eigenvalues()(j))), p);
            vals[i] = s / dim;
        }
    }
    return std::pow(pairwise_sum(vals) / static_cast<double>(vals.size()), 1.0 / p);
}

}  // namespace

double lp_norm(const TorusPoly& x, double p, const RationalRep& rep, bool allow_refine) {
    if (p < 1.0) throw BadConfig("lp_norm: p must be >= 1");
    const int deg = x.degree();
    if (std::isinf(p)) return lp_norm_once(represent(x, rep), p, rep.dim);
    if (is_even_integer(p)) {
        RationalRep use = rep;
        if (use.grid_points <= static_cast<int>(deg * p)) {
            if (!allow_refine) throw GridTooCoarse("grid does not reach exactness for degree*p");
            use.grid_points = static_cast<int>(deg * p) + 1;
        }
        return lp_norm_once(represent(x, use), p, use.dim);
    }
    // no exactness theory: stabilize by grid doubling
    RationalRep use = rep;
    double prev = lp_norm_once(represent(x, use), p, use.dim);
    for (int round = 0; round < 4; ++round) {
        RationalRep finer = use;
        finer.grid_points = 2 * use.grid_points;
        const double next = lp_norm_once(represent(x, finer), p, finer.dim);
        if (std::abs(next - prev) < 1e-8 * std::max(1.0, std::abs(next))) return next;
        if (!allow_refine) throw GridTooCoarse("norm did not stabilize and refinement is disabled");
        use = finer;
        prev = next;
    }
    throw GridTooCoarse("lp_norm did not stabilize after 4 grid doublings");
}

FourParts four_positive_parts(const std::vector<Eigen::MatrixXcd>& field) {
    FourParts parts;
    parts.re_plus.resize(field.size());
    parts.re_minus.resize(field.size());
    parts.im_plus.resize(field.size());
    parts.im_minus.resize(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        const Eigen::MatrixXcd H = 0.5 * (field[i] + field[i].adjoint());
        const Eigen::MatrixXcd K = (field[i] - field[i].adjoint()) / cplx(0.0, 2.0);
        const auto split = [](const Eigen::MatrixXcd& M, Eigen::MatrixXcd& plus, Eigen::MatrixXcd& minus) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
            const Eigen::VectorXd lam = es.eigenvalues();
            plus = es.eigenvectors() * lam.cwiseMax(0.0).asDiagonal() * es.eigenvectors().adjoint();
            minus = es.eigenvectors() * (-lam).cwiseMax(0.0).asDiagonal() * es.eigenvectors().adjoint();
        };
        split(H, parts.re_plus[i], parts.re_minus[i]);
        split(K, parts.im_plus[i], parts.im_minus[i]);
    }
    return parts;
}

}  // namespace ncr
