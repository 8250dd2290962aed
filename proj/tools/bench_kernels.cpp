// Micro-benchmark for the plane-sampling kernels: scalar reference vs the
// runtime-selected implementation. Reports million plane evaluations per
// second for the orthonormalize + quadratic-form pipeline.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "curv4/kernels.hpp"
#include "curv4/util.hpp"

using namespace curv4;

namespace {

struct Batch {
    std::vector<double> u[4], v[4], w[6], out;
    explicit Batch(std::size_t n) {
        for (auto& c : u) c.resize(n);
        for (auto& c : v) c.resize(n);
        for (auto& c : w) c.resize(n);
        out.resize(n);
    }
};

double run_once(const kernels::Kernels& k, Batch& b, const double* q6, int reps) {
    double* up[4] = {b.u[0].data(), b.u[1].data(), b.u[2].data(), b.u[3].data()};
    double* vp[4] = {b.v[0].data(), b.v[1].data(), b.v[2].data(), b.v[3].data()};
    double* wp[6] = {b.w[0].data(), b.w[1].data(), b.w[2].data(),
                     b.w[3].data(), b.w[4].data(), b.w[5].data()};
    const std::size_t n = b.out.size();
    const auto t0 = std::chrono::steady_clock::now();
    double sink = 0.0;
    for (int r = 0; r < reps; ++r) {
        k.orthonormalize(up, vp, wp, n);
        k.quad_form(q6, wp, b.out.data(), n);
        sink += b.out[n / 2];
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
    std::printf("  %-8s %8.1f Mplanes/s   (sink %.3g)\n", k.name,
                reps * static_cast<double>(n) / secs / 1e6, sink);
    return secs;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::stoul(argv[1]) : 1 << 16;
    const int reps = argc > 2 ? std::stoi(argv[2]) : 200;

    Rng rng(1);
    Batch b(n);
    double q6[36];
    for (int p = 0; p < 6; ++p)
        for (int q = p; q < 6; ++q) q6[6 * p + q] = q6[6 * q + p] = rng.gaussian();

    std::printf("batch %zu planes, %d repetitions\n", n, reps);
    for (const kernels::Kernels* k : {&kernels::kScalar, &kernels::active()}) {
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& c : b.u) c[i] = rng.gaussian();
            for (auto& c : b.v) c[i] = rng.gaussian();
        }
        run_once(*k, b, q6, reps);
        if (k == &kernels::active() || std::string(kernels::active().name) == "scalar") break;
    }
    return 0;
}
