// Release gate: twelve numbered numerical contracts, one CRITERION line each.
// Exit 0 iff every selected criterion passes. --only k restricts the run and
// may be repeated.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ncriesz/maximal.hpp"
#include "ncriesz/qeuclidean.hpp"
#include "ncriesz/quadrature.hpp"
#include "ncriesz/symbol.hpp"
#include "ncriesz/theta.hpp"
#include "ncriesz/torus.hpp"
#include "ncriesz/transforms.hpp"
#include "ncriesz/util.hpp"

using namespace ncr;
using Eigen::MatrixXcd;

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Gate {
    std::set<int> only;
    bool all_pass = true;

    bool want(int k) const { return only.empty() || only.count(k) > 0; }

    void report(int k, bool pass, const std::string& text) {
        if (!pass) all_pass = false;
        std::printf("CRITERION %d %s: %s\n", k, pass ? "PASS" : "FAIL", text.c_str());
        std::fflush(stdout);
    }
};

// ---- 1: truncation symbol is 1 at the origin ----
void criterion_1(Gate& g) {
    double worst = 0.0;
    for (int d = 2; d <= 8; ++d)
        worst = std::max(worst, std::abs(truncation_symbol(1e-4, DimensionParams::make(d)) - 1.0));
    g.report(1, worst <= 1e-3, "symbol at 1e-4 within 1e-3 of 1 for d in 2..8 (worst dev " + fmt(worst) + ")");
}

// ---- 2: square-function integral bounded by 1/2 ----
void criterion_2(Gate& g) {
    double top = 0.0;
    for (int d = 2; d <= 8; ++d) top = std::max(top, square_function_integral(DimensionParams::make(d)));
    g.report(2, top <= 0.5 + 1e-4, "int u m'(u)^2 du <= 1/2 + 1e-4 for d in 2..8 (max " + fmt(top) + ")");
}

// ---- 3: averaged kernel has unit L1 mass ----
void criterion_3(Gate& g) {
    double worst = 0.0;
    for (int d : {2, 3})
        for (double t : {0.5, 1.0, 2.0})
            worst = std::max(worst, std::abs(phi_l1_norm(t, DimensionParams::make(d)) - 1.0));
    g.report(3, worst <= 5e-3, "phi_t L1 mass within 5e-3 of 1 for d in {2,3}, t in {1/2,1,2} (worst dev " +
                                   fmt(worst) + ")");
}

// ---- 4: finite Weyl systems satisfy the commutation relations ----
void criterion_4(Gate& g) {
    const ThetaMatrix th4 = ThetaMatrix::parse("0,1/4;-1/4,0");
    const ThetaMatrix th3 = ThetaMatrix::parse("0,1/3;-1/3,0");
    const ThetaMatrix thd3 = ThetaMatrix::from_upper(3, Rat(1, 5));
    const RationalRep reps[] = {build_rational_rep(th4, 8), build_rational_rep(th3, 8, 6),
                                build_rational_rep(thd3, 6)};
    double worst_rel = 0.0;
    for (const RationalRep& rep : reps) {
        worst_rel = std::max(worst_rel, weyl_relation_residual(rep));
        worst_rel = std::max(worst_rel, unitarity_residual(rep));
    }

    double worst_hom = 0.0;
    SplitMix64 rng(401u);
    for (int trial = 0; trial < 1000; ++trial) {
        const RationalRep& rep = reps[trial % 3];
        const int d = rep.d();
        Monomial m(d), n(d);
        for (int k = 0; k < d; ++k) {
            m[k] = static_cast<int>(rng.next() % 13) - 6;
            n[k] = static_cast<int>(rng.next() % 13) - 6;
        }
        auto [phase, sum] = multiply_monomials(m, n, rep.theta);
        const MatrixXcd lhs = monomial_matrix(rep, m) * monomial_matrix(rep, n);
        const MatrixXcd rhs = phase * monomial_matrix(rep, sum);
        worst_hom = std::max(worst_hom, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    g.report(4, worst_rel <= 1e-12 && worst_hom <= 1e-12,
             "Weyl relations and 1000 represented products exact to 1e-12 (relation " + fmt(worst_rel) +
                 ", product " + fmt(worst_hom) + ")");
}

// ---- 5: trace norm at p = 2 equals the Plancherel norm ----
void criterion_5(Gate& g) {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    const RationalRep rep = build_rational_rep(theta, 33);
    SplitMix64 rng(501u);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const TorusPoly x = random_poly(rng.next(), theta, 8, 0.6, false);
        worst = std::max(worst, std::abs(lp_norm(x, 2.0, rep) - plancherel_norm(x)));
    }
    g.report(5, worst <= 1e-8, "p=2 trace norm vs Plancherel on 100 random polynomials (worst dev " +
                                   fmt(worst) + ")");
}

// ---- 6: truncated transforms factor through the symbol multiplier ----
void criterion_6(Gate& g) {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    const auto table = shared_symbol_table(2);
    SplitMix64 rng(601u);
    double worst_torus = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const TorusPoly x = random_poly(rng.next(), theta, 6, 0.7, false);
        for (int j : {1, 2})
            for (double eps : {0.25, 1.0}) {
                const TorusPoly direct = truncated_riesz(j, eps, x);
                const TorusPoly chained = apply(MultiplierOp::a_t(eps, table), riesz_transform(j, x));
                worst_torus = std::max(worst_torus, coeff_distance(direct, chained));
            }
    }
    double worst_qes = 0.0;
    const FrequencyField f = random_field(2, 4.0, 0.25, 602u);
    for (int j : {1, 2})
        for (double eps : {0.25, 1.0})
            worst_qes = std::max(worst_qes, qes_factorization_residual(j, eps, f));
    g.report(6, worst_torus <= 1e-14 && worst_qes <= 1e-14,
             "factorization residual on torus and frequency grid (torus " + fmt(worst_torus) + ", grid " +
                 fmt(worst_qes) + ")");
}

// ---- 7: squares of the transform invert the Laplacian ----
void criterion_7(Gate& g) {
    const ThetaMatrix theta = ThetaMatrix::parse("0,1/4;-1/4,0");
    SplitMix64 rng(701u);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const TorusPoly x = random_poly(rng.next(), theta, 7, 0.6, false);
        for (int j : {1, 2}) worst = std::max(worst, riesz_laplacian_identity_check(x, j));
    }
    g.report(7, worst <= 1e-12, "transform squares resolve the Laplacian on 20 random polynomials (worst " +
                                    fmt(worst) + ")");
}

// ---- shared torus trial for criteria 8 and 9 ----
struct TorusTrial {
    double riesz_norm = 0.0;
    double upper = 0.0;
    double ratio = std::numeric_limits<double>::quiet_NaN();
    bool converged = true;
    bool sane = true;
    double classical_mismatch = 0.0;
};

TorusTrial torus_trial(std::uint64_t seed, const ThetaMatrix& theta, const RationalRep& rep,
                       const std::shared_ptr<const SymbolTable>& table, double p, int degree,
                       const std::vector<double>& eps_grid, bool classical_check) {
    TorusTrial t;
    const TorusPoly x = random_poly(seed, theta, degree, 1.0, true);
    t.riesz_norm = lp_norm(riesz_transform(1, x), p, rep);

    SelfAdjointFamily fam;
    fam.dim = rep.dim;
    fam.grid = rep.grid_size();
    for (const double eps : eps_grid) {
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
    t.converged = sol.converged;
    t.upper = sol.objective;
    const double smallest = field_lp_norm(fam.members.front(), p, rep.dim);
    t.sane = t.upper >= smallest - 1e-6 * std::max(1.0, t.upper);
    if (t.riesz_norm > 1e-12) t.ratio = t.upper / t.riesz_norm;

    if (classical_check) {
        std::vector<double> powsum(fam.grid, 0.0);
        for (std::size_t s = 0; s < fam.grid; ++s) {
            double m = 0.0;
            for (const auto& mem : fam.members) m = std::max(m, std::abs(mem[s](0, 0)));
            powsum[s] = std::pow(m, p);
        }
        const double classical = std::pow(pairwise_sum(powsum) / static_cast<double>(fam.grid), 1.0 / p);
        t.classical_mismatch = std::abs(classical - t.upper);
    }
    return t;
}

std::vector<double> dyadic_grid(int count) {
    std::vector<double> eps(count);
    for (int i = 0; i < count; ++i) eps[i] = std::pow(2.0, i - 0.5 * (count - 1));
    return eps;
}

// ---- 8: the commutative limit matches sup-then-integrate ----
void criterion_8(Gate& g) {
    const ThetaMatrix theta = ThetaMatrix::zero(2);
    const auto table = shared_symbol_table(2);
    const RationalRep rep = build_rational_rep(theta, 33);
    const std::vector<double> eps = dyadic_grid(5);
    SplitMix64 rng(801u);
    std::vector<std::uint64_t> seeds(50);
    for (auto& s : seeds) s = rng.next();
    double worst = 0.0;
    bool ok = true;
    std::vector<TorusTrial> trials(seeds.size());
    parallel_for(seeds.size(), global_thread_count(), [&](std::size_t i) {
        trials[i] = torus_trial(seeds[i], theta, rep, table, (i % 2 == 0) ? 2.0 : 4.0, 4, eps, true);
    });
    for (const TorusTrial& t : trials) {
        worst = std::max(worst, t.classical_mismatch);
        ok = ok && t.converged && t.sane;
    }
    g.report(8, ok && worst <= 1e-6,
             "zero-deformation pipeline vs classical evaluation on 50 instances (worst dev " + fmt(worst) + ")");
}

// ---- 9: the maximal transform obeys the certified ratio bound ----
void criterion_9(Gate& g) {
    struct Combo {
        const char* theta;
        long long q;
        double p;
        int degree;
    };
    const Combo combos[] = {
        {"0,1/4;-1/4,0", 0, 2.0, 3}, {"0,1/4;-1/4,0", 0, 4.0, 2}, {"0,1/4;-1/4,0", 0, 8.0, 1},
        {"0,1/3;-1/3,0", 6, 2.0, 3}, {"0,1/3;-1/3,0", 6, 4.0, 2}, {"0,1/3;-1/3,0", 6, 8.0, 1},
    };
    const auto table = shared_symbol_table(2);
    const std::vector<double> eps = dyadic_grid(9);
    bool ok = true;
    std::string detail;
    for (const Combo& combo : combos) {
        const ThetaMatrix theta = ThetaMatrix::parse(combo.theta);
        const int grid = 2 * combo.degree * static_cast<int>(combo.p) + 1;
        const RationalRep rep = build_rational_rep(theta, grid, combo.q);
        const double bound = std::pow(96.0 + 2.0 * std::sqrt(2.0), 2.0 / combo.p);

        SplitMix64 rng(901u + static_cast<std::uint64_t>(combo.p));
        std::vector<std::uint64_t> seeds(100);
        for (auto& s : seeds) s = rng.next();
        std::vector<TorusTrial> trials(seeds.size());
        parallel_for(seeds.size(), global_thread_count(), [&](std::size_t i) {
            trials[i] = torus_trial(seeds[i], theta, rep, table, combo.p, combo.degree, eps, false);
        });

        double top_ratio = 0.0;
        for (const TorusTrial& t : trials) {
            ok = ok && t.converged && t.sane;
            if (!std::isnan(t.ratio)) top_ratio = std::max(top_ratio, t.ratio);
        }
        ok = ok && top_ratio <= bound + 1e-6;
        if (!detail.empty()) detail += ", ";
        detail += "q" + std::to_string(rep.q) + " p" + fmt(combo.p) + ": " + fmt(top_ratio) + "/" + fmt(bound);
    }
    g.report(9, ok, "maximal-to-single ratio under (96+2*sqrt(2))^(2/p) on 100 trials per combination (" +
                        detail + ")");
}

// ---- 10: averaged fields stay under the fixed constant times the input ----
cplx avg_multiplier(int k, double r) {
    if (k == 0) return {1.0, 0.0};
    constexpr double kGamma = 0.57721566490153286;
    const double w = kTwoPi * std::abs(k) * r;
    double si = 0.0, ci = 0.0;
    si_ci(w, si, ci);
    const cplx lam(si / w, -(kGamma + std::log(w) - ci) / w);
    return k > 0 ? lam : std::conj(lam);
}

void criterion_10(Gate& g) {
    const int N = 64, m = 4, D = 8;
    std::vector<double> radii;
    for (int j = 6; j >= 1; --j) radii.push_back(std::pow(2.0, -j));

    SplitMix64 seeder(1001u);
    std::vector<std::uint64_t> seeds(50);
    for (auto& s : seeds) s = seeder.next();

    struct Row {
        double ratio = 0.0;
        bool pass = true;
        bool converged = true;
    };
    std::vector<Row> rows(seeds.size());
    parallel_for(seeds.size(), global_thread_count(), [&](std::size_t i) {
        SplitMix64 rng(seeds[i]);
        std::vector<MatrixXcd> ghat(2 * D + 1);
        for (int k = -D; k <= D; ++k) {
            MatrixXcd c(m, m);
            for (int r = 0; r < m; ++r)
                for (int cc = 0; cc < m; ++cc) c(r, cc) = rng.complex_gaussian() / (1.0 + k * k);
            ghat[k + D] = c;
        }
        std::vector<MatrixXcd> f_field(N);
        for (int x = 0; x < N; ++x) {
            MatrixXcd G = MatrixXcd::Zero(m, m);
            for (int k = -D; k <= D; ++k)
                G += std::polar(1.0, kTwoPi * k * x / static_cast<double>(N)) * ghat[k + D];
            f_field[x] = G.adjoint() * G;
        }
        std::vector<MatrixXcd> fhat(4 * D + 1, MatrixXcd::Zero(m, m));
        for (int k = -2 * D; k <= 2 * D; ++k) {
            for (int x = 0; x < N; ++x)
                fhat[k + 2 * D] += std::polar(1.0, -kTwoPi * k * x / static_cast<double>(N)) * f_field[x];
            fhat[k + 2 * D] /= static_cast<double>(N);
        }
        SelfAdjointFamily fam;
        fam.dim = m;
        fam.grid = static_cast<std::size_t>(N);
        for (const double r : radii) {
            std::vector<MatrixXcd> avg(N, MatrixXcd::Zero(m, m));
            for (int x = 0; x < N; ++x) {
                for (int k = -2 * D; k <= 2 * D; ++k)
                    avg[x] += avg_multiplier(k, r) * std::polar(1.0, kTwoPi * k * x / static_cast<double>(N)) *
                              fhat[k + 2 * D];
                avg[x] = 0.5 * (avg[x] + avg[x].adjoint()).eval();
            }
            fam.members.push_back(std::move(avg));
            fam.labels.push_back(r);
        }
        SolverConfig cfg;
        auto sol = maximal_norm_upper(fam, cfg);
        if (!sol.converged) {
            cfg.max_iter *= 4;
            sol = maximal_norm_upper(fam, cfg);
        }
        const double f2 = field_lp_norm(f_field, 2.0, m);
        rows[i].converged = sol.converged;
        rows[i].ratio = sol.objective / f2;
        rows[i].pass = sol.objective <= 96.0 * f2 + 1e-9;
    });

    bool ok = true;
    double top = 0.0;
    for (const Row& r : rows) {
        ok = ok && r.pass && r.converged;
        top = std::max(top, r.ratio);
    }
    g.report(10, ok, "maximal averaged field under 96 times the input norm on 50 instances (worst ratio " +
                         fmt(top) + ")");
}

// ---- 11: solver agrees with exhaustive search and keeps its invariants ----
double brute_force_2x2(const std::vector<MatrixXcd>& mats, double p) {
    double scale = 0.0;
    for (const auto& x : mats) scale = std::max(scale, x.operatorNorm());
    scale *= 1.6;
    double lo_a = 0, hi_a = scale, lo_d = 0, hi_d = scale, lo_b = -scale, hi_b = scale;
    double best = 1e300, ba = 0, bd = 0, bb = 0;
    double step = scale / 40.0;
    for (int level = 0; level < 4; ++level) {
        for (double al = lo_a; al <= hi_a + 1e-15; al += step)
            for (double de = lo_d; de <= hi_d + 1e-15; de += step)
                for (double be = lo_b; be <= hi_b + 1e-15; be += step) {
                    bool feas = true;
                    for (const auto& x : mats) {
                        for (double s : {1.0, -1.0}) {
                            const double a11 = al - s * x(0, 0).real();
                            const double a22 = de - s * x(1, 1).real();
                            const double a12 = be - s * x(0, 1).real();
                            if (a11 + a22 < -1e-12 || a11 * a22 - a12 * a12 < -1e-12) {
                                feas = false;
                                break;
                            }
                        }
                        if (!feas) break;
                    }
                    if (!feas) continue;
                    const double mean = 0.5 * (al + de);
                    const double rad = std::sqrt(0.25 * (al - de) * (al - de) + be * be);
                    const double e1 = std::abs(mean + rad), e2 = std::abs(mean - rad);
                    const double val = std::pow(0.5 * (std::pow(e1, p) + std::pow(e2, p)), 1.0 / p);
                    if (val < best) {
                        best = val;
                        ba = al;
                        bd = de;
                        bb = be;
                    }
                }
        lo_a = ba - 2 * step;
        hi_a = ba + 2 * step;
        lo_d = bd - 2 * step;
        hi_d = bd + 2 * step;
        lo_b = bb - 2 * step;
        hi_b = bb + 2 * step;
        step /= 10.0;
    }
    return best;
}

void criterion_11(Gate& g) {
    MatrixXcd x1(2, 2), x2(2, 2);
    x1 << 1.0, 0.3, 0.3, -0.5;
    x2 << 0.2, -0.7, -0.7, 0.8;
    const std::vector<MatrixXcd> mats{x1, x2};
    double worst_brute = 0.0;
    for (double p : {2.0, 4.0}) {
        SolverConfig cfg;
        cfg.p = p;
        const PointSolve ps = pointwise_majorant_solve(mats, cfg);
        worst_brute = std::max(worst_brute, std::abs(ps.value - brute_force_2x2(mats, p)));
    }

    SplitMix64 rng(1101u);
    int violations = 0;
    double worst_gap = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 2 + static_cast<int>(rng.next() % 3);
        const std::size_t grid = 1 + rng.next() % 2;
        const int k = 1 + static_cast<int>(rng.next() % 3);
        SelfAdjointFamily fam;
        fam.dim = dim;
        fam.grid = grid;
        for (int kk = 0; kk < k; ++kk) {
            std::vector<MatrixXcd> field;
            for (std::size_t gg = 0; gg < grid; ++gg) {
                MatrixXcd mm(dim, dim);
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j) mm(i, j) = rng.complex_gaussian();
                field.push_back(0.5 * (mm + mm.adjoint()).eval());
            }
            fam.members.push_back(std::move(field));
            fam.labels.push_back(kk + 1.0);
        }
        SolverConfig cfg;
        cfg.p = (trial % 2 == 0) ? 2.0 : 4.0;
        const MajorantSolution sol = maximal_norm_upper(fam, cfg);
        const double lower = maximal_norm_lower(fam, cfg.p);
        if (!sol.converged) ++violations;
        if (lower > sol.objective + 1e-8) ++violations;
        if (sol.feasibility_residual < -1e-6) ++violations;
        worst_gap = std::max(worst_gap, lower - sol.objective);
        for (const auto& field : fam.members)
            if (field_lp_norm(field, cfg.p, dim) > sol.objective + 1e-6) ++violations;
    }
    g.report(11, worst_brute <= 1e-4 && violations == 0,
             "exhaustive 2x2 agreement within 1e-4 and 200 random-family invariants (brute dev " +
                 fmt(worst_brute) + ", violations " + std::to_string(violations) + ")");
}

// ---- 12: frequency-grid model keeps its algebraic contracts ----
void criterion_12(Gate& g) {
    const FrequencyField f = random_field(2, 4.0, 0.25, 1201u);
    const double h = f.h;
    double worst_law = 0.0;
    for (const char* spec : {"0,0;0,0", "0,1;-1,0", "0,1/2;-1/2,0"}) {
        const ThetaMatrix theta = ThetaMatrix::parse(spec);
        worst_law = std::max(worst_law, unitary_action_check({2.0 * h, -h}, {h, 2.0 * h}, f, theta));
        worst_law = std::max(worst_law, unitary_action_check({h, 2.0 * h}, {4.0 * h, 0.0}, f, theta));
    }

    double worst_fact = 0.0;
    for (int j : {1, 2})
        for (double eps : {0.25, 1.0}) worst_fact = std::max(worst_fact, qes_factorization_residual(j, eps, f));

    double worst_gauss = 0.0;
    for (int d : {2, 3}) {
        FrequencyField gf = FrequencyField::make(d, 4.0, 0.125);
        for (std::size_t i = 0; i < gf.size(); ++i) {
            double s2 = 0.0;
            const std::vector<int> co = gf.coords(i);
            for (int k = 0; k < d; ++k) {
                const double xi = gf.xi_of(co[k]);
                s2 += xi * xi;
            }
            gf.samples[i] = std::exp(-0.5 * s2);
        }
        worst_gauss = std::max(worst_gauss, std::abs(qes_l2_norm(gf) - std::pow(kPi, d / 4.0)));
    }
    g.report(12, worst_law <= 1e-12 && worst_fact <= 1e-12 && worst_gauss <= 1e-3,
             "composition law " + fmt(worst_law) + ", factorization " + fmt(worst_fact) +
                 ", gaussian quadrature " + fmt(worst_gauss));
}

}  // namespace

int main(int argc, char** argv) {
    Gate gate;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            const int k = std::atoi(argv[++i]);
            if (k < 1 || k > 12) {
                std::fprintf(stderr, "--only expects a criterion number in 1..12\n");
                return 2;
            }
            gate.only.insert(k);
        } else {
            std::fprintf(stderr, "usage: %s [--only k]...\n", argv[0]);
            return 2;
        }
    }

    if (gate.want(1)) criterion_1(gate);
    if (gate.want(2)) criterion_2(gate);
    if (gate.want(3)) criterion_3(gate);
    if (gate.want(4)) criterion_4(gate);
    if (gate.want(5)) criterion_5(gate);
    if (gate.want(6)) criterion_6(gate);
    if (gate.want(7)) criterion_7(gate);
    if (gate.want(8)) criterion_8(gate);
    if (gate.want(9)) criterion_9(gate);
    if (gate.want(10)) criterion_10(gate);
    if (gate.want(11)) criterion_11(gate);
    if (gate.want(12)) criterion_12(gate);

    return gate.all_pass ? 0 : 1;
}
