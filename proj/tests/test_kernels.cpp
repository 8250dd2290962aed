#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
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
    std::size_t size() const { return out.size(); }
};

void fill_random(Batch& b, Rng& rng) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (auto& c : b.u) c[i] = rng.gaussian();
        for (auto& c : b.v) c[i] = rng.gaussian();
    }
}

void run(const kernels::Kernels& k, const double* q6, Batch& b) {
    double* up[4] = {b.u[0].data(), b.u[1].data(), b.u[2].data(), b.u[3].data()};
    double* vp[4] = {b.v[0].data(), b.v[1].data(), b.v[2].data(), b.v[3].data()};
    double* wp[6] = {b.w[0].data(), b.w[1].data(), b.w[2].data(),
                     b.w[3].data(), b.w[4].data(), b.w[5].data()};
    k.orthonormalize(up, vp, wp, b.size());
    k.quad_form(q6, wp, b.out.data(), b.size());
}

}  // namespace

TEST_CASE("scalar kernel: orthonormalization invariants and unit bivectors") {
    Rng rng(3);
    Batch b(1000);
    fill_random(b, rng);
    double q6[36] = {};
    for (int p = 0; p < 6; ++p) q6[6 * p + p] = 1.0;  // identity form -> |w|^2
    run(kernels::kScalar, q6, b);
    for (std::size_t i = 0; i < b.size(); ++i) {
        double un = 0, vn = 0, dot = 0;
        for (int a = 0; a < 4; ++a) {
            un += b.u[a][i] * b.u[a][i];
            vn += b.v[a][i] * b.v[a][i];
            dot += b.u[a][i] * b.v[a][i];
        }
        CHECK(std::abs(un - 1.0) < 1e-12);
        CHECK(std::abs(vn - 1.0) < 1e-12);
        CHECK(std::abs(dot) < 1e-12);
        CHECK(b.out[i] == doctest::Approx(1.0).epsilon(1e-12));  // |u ^ v| = 1
    }
}

TEST_CASE("scalar kernel: degenerate pairs produce zero bivectors, not NaN") {
    Batch b(7);
    Rng rng(9);
    fill_random(b, rng);
    // collinear pair in lane 3
    for (int a = 0; a < 4; ++a) {
        b.u[a][3] = a == 0 ? 1.0 : 0.0;
        b.v[a][3] = a == 0 ? 2.0 : 0.0;
    }
    double q6[36] = {};
    for (int p = 0; p < 6; ++p) q6[6 * p + p] = 1.0;
    run(kernels::kScalar, q6, b);
    CHECK(b.out[3] == 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(!std::isnan(b.out[i]));
}

TEST_CASE("vector kernels agree with the scalar reference") {
    const auto& act = kernels::active();
    INFO("active kernel: ", act.name);
    if (std::string(act.name) == "scalar") {
        MESSAGE("no SIMD kernel available on this host; equivalence trivially holds");
        return;
    }
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        // odd sizes exercise the scalar tail path
        const std::size_t n = 1 + static_cast<std::size_t>(rng.next_u64() % 257);
        Batch a(n), b(n);
        fill_random(a, rng);
        for (int c = 0; c < 4; ++c) {
            b.u[c] = a.u[c];
            b.v[c] = a.v[c];
        }
        double q6[36];
        for (int p = 0; p < 6; ++p)
            for (int q = p; q < 6; ++q) q6[6 * p + q] = q6[6 * q + p] = rng.gaussian();

        run(kernels::kScalar, q6, a);
        run(act, q6, b);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(a.out[i] - b.out[i]) < 1e-13 * (1.0 + std::abs(a.out[i])));
            for (int c = 0; c < 6; ++c)
                CHECK(std::abs(a.w[c][i] - b.w[c][i]) < 1e-13);
        }
    }
}

TEST_CASE("quad form matches a direct double loop") {
    Rng rng(23);
    Batch b(64);
    fill_random(b, rng);
    double q6[36];
    for (int p = 0; p < 6; ++p)
        for (int q = p; q < 6; ++q) q6[6 * p + q] = q6[6 * q + p] = rng.gaussian();
    run(kernels::kScalar, q6, b);
    for (std::size_t i = 0; i < b.size(); ++i) {
        double expect = 0.0;
        for (int p = 0; p < 6; ++p)
            for (int q = 0; q < 6; ++q) expect += q6[6 * p + q] * b.w[p][i] * b.w[q][i];
        CHECK(b.out[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}
