#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ncr {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

using cplx = std::complex<double>;

// splitmix64: the per-trial seed derivation and the portable Gaussian source.
// std::normal_distribution is implementation defined, so random data that must
// be bit-identical across platforms and thread counts is produced here.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53-bit mantissa
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Box-Muller; one value per call, no cached state so streams stay simple.
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    cplx complex_gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
        double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
    }
};

// Deterministic reduction: fixed-order pairwise summation over the index
// order of v, independent of how the entries were produced.
template <typename T>
T pairwise_sum(const std::vector<T>& v, std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo;
    if (n == 0) return T{};
    if (n <= 8) {
        T s = v[lo];
        for (std::size_t i = lo + 1; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(v, 0, v.size());
}

// Runs fn(i) for i in [0,n) on up to nthreads threads, contiguous chunks.
// Callers write results into preallocated slots indexed by i and reduce
// serially afterwards, so thread count never changes any output bit.
inline void parallel_for(std::size_t n, int nthreads, const std::function<void(std::size_t)>& fn) {
    if (nthreads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(nthreads), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline int default_thread_count() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace detail {
inline int& thread_count_slot() {
    static int count = 0;  // 0 = unresolved
    return count;
}
}  // namespace detail

// Worker count used by the parallel loops: --threads flag beats the
// NC_RIESZ_THREADS env var beats hardware concurrency. Outputs are
// bit-identical for every setting; this only controls wall time.
inline void set_global_thread_count(int n) { detail::thread_count_slot() = n > 0 ? n : 0; }

inline int global_thread_count() {
    int& slot = detail::thread_count_slot();
    if (slot > 0) return slot;
    if (const char* env = std::getenv("NC_RIESZ_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            slot = n;
            return slot;
        }
    }
    slot = default_thread_count();
    return slot;
}

}  // namespace ncr
