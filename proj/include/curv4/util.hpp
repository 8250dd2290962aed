#pragma once

#include <array>
#include <cstdint>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace curv4 {

// SplitMix64, used to spawn independent deterministic streams from one seed.
inline std::uint64_t split_mix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro256** with explicit state; identical sequences on every platform,
// unlike std::normal_distribution whose algorithm is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = split_mix64(sm);
        have_gauss_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Marsaglia polar method; caches the second deviate.
    double gaussian() {
        if (have_gauss_) {
            have_gauss_ = false;
            return cached_;
        }
        double u, v, q;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            q = u * u + v * v;
        } while (q >= 1.0 || q == 0.0);
        const double f = std::sqrt(-2.0 * std::log(q) / q);
        cached_ = v * f;
        have_gauss_ = true;
        return u * f;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool have_gauss_;
};

// Derives a child seed; `tag` separates independent uses of the same user seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t sm = seed ^ (0x5851f42d4c957f2dull * (tag + 1));
    return split_mix64(sm);
}

// R_d additive low-discrepancy sequence (generalized golden ratio) in [0,1)^4.
// Deterministic interior samples for sup estimation.
inline std::array<double, 4> quasirandom4(std::size_t n) {
    // Plastic-type constant for d=4: unique positive root of x^5 = x + 1.
    constexpr double phi = 1.1673039782614187;
    static const double a0 = 1.0 / phi;
    static const double a1 = a0 / phi;
    static const double a2 = a1 / phi;
    static const double a3 = a2 / phi;
    auto frac = [](double x) { return x - std::floor(x); };
    const double k = static_cast<double>(n + 1);
    return {frac(0.5 + a0 * k), frac(0.5 + a1 * k), frac(0.5 + a2 * k),
            frac(0.5 + a3 * k)};
}

// Fixed-order pairwise (cascade) summation. The blocking depends only on the
// number of addends, so the result is bit-stable for a fixed input sequence.
class PairwiseSum {
public:
    void add(double x) {
        std::size_t i = count_++;
        block_[i & kMask] = x;
        if ((i & kMask) == kMask) levels_push(reduce_block());
    }

    double total() const {
        double t = 0.0;
        const std::size_t rem = count_ & kMask;
        for (std::size_t i = 0; i < rem; ++i) t += block_[i];
        for (auto it = levels_.rbegin(); it != levels_.rend(); ++it)
            if (it->second) t += it->first;
        return t;
    }

    std::size_t count() const { return count_; }

private:
    static constexpr std::size_t kBlock = 256;
    static constexpr std::size_t kMask = kBlock - 1;

    double reduce_block() {
        for (std::size_t w = kBlock; w > 1; w /= 2)
            for (std::size_t i = 0; i < w / 2; ++i)
                block_[i] = block_[2 * i] + block_[2 * i + 1];
        return block_[0];
    }

    void levels_push(double v) {
        for (auto& [val, full] : levels_) {
            if (!full) {
                val = v;
                full = true;
                return;
            }
            double merged = val + v;
            full = false;
            v = merged;
        }
        levels_.emplace_back(v, true);
    }

    double block_[kBlock] = {};
    std::vector<std::pair<double, bool>> levels_;
    std::size_t count_ = 0;
};

inline double pairwise_sum(const std::vector<double>& xs) {
    PairwiseSum ps;
    for (double x : xs) ps.add(x);
    return ps.total();
}

// Number of worker threads: hardware concurrency capped by CURV4_THREADS.
inline unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("CURV4_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

// Runs fn(i) for i in [0,n). Chunks are fixed, so any per-index output written
// to a preallocated buffer is identical for every thread count. The first
// exception thrown by any worker is rethrown in the caller.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = worker_count();
    if (workers <= 1 || n < 256) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mutex;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn, &error, &error_mutex] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace curv4
