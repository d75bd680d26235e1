#include "ncriesz/qeuclidean.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "ncriesz/errors.hpp"
#include "ncriesz/symbol.hpp"

namespace ncr {

namespace {

int checked_axis_points(double R, double h) {
    if (!(R > 0.0) || !(h > 0.0)) throw BadConfig("FrequencyField: R and h must be positive");
    const double n = R / h;
    const double nr = std::round(n);
    if (std::abs(n - nr) > 1e-9 || nr < 1.0) throw BadConfig("FrequencyField: R must be a multiple of h");
    return 2 * static_cast<int>(nr) + 1;
}

std::vector<double> grid_point(const FrequencyField& f, std::size_t flat_idx) {
    const std::vector<int> idx = f.coords(flat_idx);
    std::vector<double> xi(f.d);
    for (int k = 0; k < f.d; ++k) xi[k] = f.xi_of(idx[k]);
    return xi;
}

int checked_shift_steps(double tk, double h) {
    const double s = tk / h;
    const double sr = std::round(s);
    if (std::abs(s - sr) > 1e-9) throw OffGridShift("shift is not an integer multiple of the grid spacing");
    return static_cast<int>(sr);
}

// (U(t)f)(r) = e^{-(i/2)<t, theta r>} f(r - t), zero outside the grid
FrequencyField weyl_act(const std::vector<double>& t, const FrequencyField& f, const ThetaMatrix& theta) {
    std::vector<int> steps(f.d);
    for (int k = 0; k < f.d; ++k) steps[k] = checked_shift_steps(t[k], f.h);
    const int N = f.points_per_axis();
    FrequencyField out = f;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::vector<int> idx = f.coords(i);
        std::vector<int> src = idx;
        bool inside = true;
        for (int k = 0; k < f.d; ++k) {
            src[k] -= steps[k];
            if (src[k] < 0 || src[k] >= N) inside = false;
        }
        if (!inside) {
            out.samples[i] = 0.0;
            continue;
        }
        double phase = 0.0;
        for (int k = 0; k < f.d; ++k)
            for (int l = 0; l < f.d; ++l) phase += t[k] * theta.value(k, l) * f.xi_of(idx[l]);
        out.samples[i] = std::polar(1.0, -0.5 * phase) * f.samples[f.flat(src)];
    }
    return out;
}

}  // namespace

FrequencyField FrequencyField::make(int d, double R, double h) {
    if (d < 2 || d > 3) throw UnsupportedDimension("FrequencyField: d must be 2 or 3");
    FrequencyField f;
    f.d = d;
    f.R = R;
    f.h = h;
    const int N = checked_axis_points(R, h);
    f.theta.assign(d, std::vector<double>(d, 0.0));
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(N);
    f.samples.assign(total, cplx(0.0, 0.0));
    return f;
}

int FrequencyField::points_per_axis() const { return checked_axis_points(R, h); }

std::size_t FrequencyField::flat(const std::vector<int>& idx) const {
    const int N = points_per_axis();
    std::size_t out = 0;
    for (int k = 0; k < d; ++k) out = out * N + static_cast<std::size_t>(idx[k]);
    return out;
}

std::vector<int> FrequencyField::coords(std::size_t flat_idx) const {
    const int N = points_per_axis();
    std::vector<int> idx(d);
    for (int k = d - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(flat_idx % N);
        flat_idx /= N;
    }
    return idx;
}

void FrequencyField::zero_boundary_ring() {
    const int N = points_per_axis();
    for (std::size_t i = 0; i < size(); ++i) {
        const std::vector<int> idx = coords(i);
        for (int k = 0; k < d; ++k)
            if (idx[k] == 0 || idx[k] == N - 1) {
                samples[i] = 0.0;
                break;
            }
    }
}

bool FrequencyField::boundary_ring_is_zero() const {
    const int N = points_per_axis();
    for (std::size_t i = 0; i < size(); ++i) {
        const std::vector<int> idx = coords(i);
        for (int k = 0; k < d; ++k)
            if ((idx[k] == 0 || idx[k] == N - 1) && samples[i] != cplx(0.0, 0.0)) return false;
    }
    return true;
}

cplx qes_trace(const FrequencyField& f) {
    const double n = f.R / f.h;
    const double nr = std::round(n);
    if (std::abs(nr * f.h - f.R) > 1e-12) throw OriginNotOnGrid("frequency 0 is not a grid point");
    std::vector<int> idx(f.d, static_cast<int>(nr));
    return f.samples[f.flat(idx)];
}

double qes_l2_norm(const FrequencyField& f) {
    std::vector<double> sq(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) sq[i] = std::norm(f.samples[i]);
    return std::pow(f.h, f.d / 2.0) * std::sqrt(pairwise_sum(sq));
}

FrequencyField qes_translate(const FrequencyField& f, const std::vector<double>& t) {
    if (static_cast<int>(t.size()) != f.d) throw BadConfig("qes_translate: wrong shift dimension");
    FrequencyField out = f;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::vector<double> xi = grid_point(f, i);
        double dot = 0.0;
        for (int k = 0; k < f.d; ++k) dot += t[k] * xi[k];
        out.samples[i] = std::polar(1.0, kTwoPi * dot) * f.samples[i];
    }
    return out;
}

FrequencyField qes_convolve(const std::function<cplx(const std::vector<double>&)>& psi_hat,
                            const FrequencyField& f) {
    FrequencyField out = f;
    for (std::size_t i = 0; i < f.size(); ++i) out.samples[i] = psi_hat(grid_point(f, i)) * f.samples[i];
    return out;
}

FrequencyField qes_a_t(double t, const FrequencyField& f) {
    const auto table = shared_symbol_table(f.d);
    return qes_convolve(
        [&, table](const std::vector<double>& xi) {
            double s = 0.0;
            for (double x : xi) s += x * x;
            return cplx(table->m(t * std::sqrt(s)), 0.0);
        },
        f);
}

FrequencyField qes_riesz(int j, const FrequencyField& f) {
    if (j < 1 || j > f.d) throw BadConfig("qes_riesz: axis out of range");
    return qes_convolve(
        [&](const std::vector<double>& xi) {
            double s = 0.0;
            for (double x : xi) s += x * x;
            if (s == 0.0) return cplx(0.0, 0.0);
            return cplx(0.0, -xi[j - 1] / std::sqrt(s));
        },
        f);
}

FrequencyField qes_truncated_riesz(int j, double eps, const FrequencyField& f) {
    if (!(eps > 0.0)) throw BadConfig("qes_truncated_riesz: eps must be positive");
    const auto table = shared_symbol_table(f.d);
    const int axis = j - 1;
    if (axis < 0 || axis >= f.d) throw BadConfig("qes_truncated_riesz: axis out of range");
    return qes_convolve(
        [&, table](const std::vector<double>& xi) {
            double s = 0.0;
            for (double x : xi) s += x * x;
            if (s == 0.0) return cplx(0.0, 0.0);
            const double mag = std::sqrt(s);
            return cplx(0.0, -xi[axis] / mag * table->m(eps * mag));
        },
        f);
}

double qes_factorization_residual(int j, double eps, const FrequencyField& f) {
    const FrequencyField lhs = qes_truncated_riesz(j, eps, f);
    const FrequencyField rhs = qes_a_t(eps, qes_riesz(j, f));
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(lhs.samples[i] - rhs.samples[i]));
    return worst;
}

cplx weyl_phase(const std::vector<double>& t, const std::vector<double>& s, const ThetaMatrix& theta) {
    if (t.size() != s.size() || static_cast<int>(t.size()) != theta.d()) throw BadConfig("weyl_phase: dimension mismatch");
    double dot = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k)
        for (std::size_t l = 0; l < s.size(); ++l)
            dot += t[k] * theta.value(static_cast<int>(k), static_cast<int>(l)) * s[l];
    return std::polar(1.0, 0.5 * dot);
}

double unitary_action_check(const std::vector<double>& t, const std::vector<double>& s,
                            const FrequencyField& g, const ThetaMatrix& theta) {
    if (static_cast<int>(t.size()) != g.d || static_cast<int>(s.size()) != g.d || theta.d() != g.d)
        throw BadConfig("unitary_action_check: dimension mismatch");
    const FrequencyField lhs = weyl_act(t, weyl_act(s, g, theta), theta);
    std::vector<double> ts(g.d);
    for (int k = 0; k < g.d; ++k) ts[k] = t[k] + s[k];
    FrequencyField rhs = weyl_act(ts, g, theta);
    const cplx phase = weyl_phase(s, t, theta);
    // the two-step route clips content at the intermediate shift that the
    // one-step route keeps; compare only where the intermediate point exists
    std::vector<int> steps_t(g.d);
    for (int k = 0; k < g.d; ++k) steps_t[k] = checked_shift_steps(t[k], g.h);
    const int N = g.points_per_axis();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::vector<int> idx = g.coords(i);
        bool intermediate_exists = true;
        for (int k = 0; k < g.d; ++k) {
            const int mid = idx[k] - steps_t[k];
            if (mid < 0 || mid >= N) intermediate_exists = false;
        }
        if (!intermediate_exists) continue;
        worst = std::max(worst, std::abs(lhs.samples[i] - phase * rhs.samples[i]));
    }
    return worst;
}

FrequencyField random_field(int d, double R, double h, std::uint64_t seed) {
    FrequencyField f = FrequencyField::make(d, R, h);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::vector<double> xi = grid_point(f, i);
        double s = 0.0;
        for (double x : xi) s += x * x;
        f.samples[i] = std::exp(-0.5 * s) * rng.complex_gaussian();
    }
    f.zero_boundary_ring();
    return f;
}

std::string field_to_json(const FrequencyField& f) {
    nlohmann::json j;
    j["d"] = f.d;
    j["R"] = f.R;
    j["h"] = f.h;
    j["theta"] = f.theta;
    std::vector<double> flat(2 * f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        flat[2 * i] = f.samples[i].real();
        flat[2 * i + 1] = f.samples[i].imag();
    }
    j["samples"] = flat;
    return j.dump();
}

FrequencyField field_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    FrequencyField f = FrequencyField::make(j.at("d").get<int>(), j.at("R").get<double>(), j.at("h").get<double>());
    f.theta = j.at("theta").get<std::vector<std::vector<double>>>();
    const std::vector<double> flat = j.at("samples").get<std::vector<double>>();
    if (flat.size() != 2 * f.size()) throw BadConfig("field_from_json: sample count mismatch");
    for (std::size_t i = 0; i < f.size(); ++i) f.samples[i] = cplx(flat[2 * i], flat[2 * i + 1]);
    return f;
}

std::string field_axis_csv(const FrequencyField& f, int j) {
    if (j < 1 || j > f.d) throw BadConfig("field_axis_csv: axis out of range");
    const int N = f.points_per_axis();
    const int origin = (N - 1) / 2;
    std::ostringstream os;
    os << "# nc-riesz v1 schema\n"
       << "xi,re,im\n"
       << std::scientific << std::setprecision(16);
    std::vector<int> idx(f.d, origin);
    for (int i = 0; i < N; ++i) {
        idx[j - 1] = i;
        const cplx v = f.samples[f.flat(idx)];
        os << f.xi_of(i) << "," << v.real() << "," << v.imag() << "\n";
    }
    return os.str();
}

}  // namespace ncr
