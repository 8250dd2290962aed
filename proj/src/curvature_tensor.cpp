#include "curv4/curvature_tensor.hpp"

#include <cmath>

#include "curv4/util.hpp"

namespace curv4 {

namespace {
constexpr int kPairIndex[4][4] = {
    {-1, 0, 1, 2},
    {0, -1, 3, 4},
    {1, 3, -1, 5},
    {2, 4, 5, -1},
};
}  // namespace

int pair_index(int i, int j) { return kPairIndex[i][j]; }
int pair_sign(int i, int j) { return i < j ? 1 : -1; }

void AlgCurvTensor::set_sym(int i, int j, int k, int l, double v) {
    at(i, j, k, l) = v;
    at(j, i, k, l) = -v;
    at(i, j, l, k) = -v;
    at(j, i, l, k) = v;
    at(k, l, i, j) = v;
    at(l, k, i, j) = -v;
    at(k, l, j, i) = -v;
    at(l, k, j, i) = v;
}

Mat6 AlgCurvTensor::operator_matrix() const {
    Mat6 m;
    for (int p = 0; p < 6; ++p)
        for (int q = 0; q < 6; ++q)
            m(p, q) = (*this)(kPairs[p][0], kPairs[p][1], kPairs[q][0], kPairs[q][1]);
    return m;
}

AlgCurvTensor AlgCurvTensor::from_operator_matrix(const Mat6& m) {
    AlgCurvTensor t;
    for (int p = 0; p < 6; ++p)
        for (int q = p; q < 6; ++q)
            t.set_sym(kPairs[p][0], kPairs[p][1], kPairs[q][0], kPairs[q][1],
                      0.5 * (m(p, q) + m(q, p)));
    return t;
}

AlgCurvTensor AlgCurvTensor::rotated(const Mat4& q) const {
    // Contract one index at a time: cost 4 * 4^5 instead of 4^8.
    std::array<double, 256> a = c_, b{};
    for (int step = 0; step < 4; ++step) {
        b.fill(0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l) {
                        // Rotate the last index, then cycle so each index
                        // passes through the last slot once.
                        double s = 0.0;
                        for (int m = 0; m < 4; ++m)
                            s += a[static_cast<std::size_t>(((i * 4 + j) * 4 + k) * 4 + m)] * q(m, l);
                        b[static_cast<std::size_t>(((j * 4 + k) * 4 + l) * 4 + i)] = s;
                    }
        a = b;
    }
    AlgCurvTensor out;
    out.c_ = a;
    return out;
}

double AlgCurvTensor::quarter_norm_sq() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return 0.25 * s;
}

SymmetryDiagnostics validate(const AlgCurvTensor& t) {
    SymmetryDiagnostics d;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    const double v = t(i, j, k, l);
                    d.antisymmetry = std::max(d.antisymmetry, std::abs(v + t(j, i, k, l)));
                    d.antisymmetry = std::max(d.antisymmetry, std::abs(v + t(i, j, l, k)));
                    d.pair_symmetry = std::max(d.pair_symmetry, std::abs(v - t(k, l, i, j)));
                    d.bianchi = std::max(d.bianchi,
                                         std::abs(v + t(i, k, l, j) + t(i, l, j, k)));
                }
    return d;
}

AlgCurvTensor random_alg_curv(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x7e4f50a1));
    std::array<double, 256> raw;
    for (double& v : raw) v = rng.gaussian();

    auto get = [&raw](int i, int j, int k, int l) {
        return raw[static_cast<std::size_t>(((i * 4 + j) * 4 + k) * 4 + l)];
    };

    // Project onto the antisymmetry + pair symmetry subspace ...
    AlgCurvTensor sym;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    double a = get(i, j, k, l) - get(j, i, k, l) - get(i, j, l, k) +
                               get(j, i, l, k);
                    double b = get(k, l, i, j) - get(l, k, i, j) - get(k, l, j, i) +
                               get(l, k, j, i);
                    sym.at(i, j, k, l) = 0.125 * (a + b);
                }

    // ... then onto the kernel of the first Bianchi map. The cyclic sum of a
    // pair-symmetric tensor is totally antisymmetric, so its own cyclic sum
    // is three times itself and this subtraction is an exact projector.
    AlgCurvTensor out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    double cyc = sym(i, j, k, l) + sym(i, k, l, j) + sym(i, l, j, k);
                    out.at(i, j, k, l) = sym(i, j, k, l) - cyc / 3.0;
                }
    return out;
}

AlgCurvTensor round_sphere_tensor(double radius) {
    const double k = 1.0 / (radius * radius);
    AlgCurvTensor t;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k2 = 0; k2 < 4; ++k2)
                for (int l = 0; l < 4; ++l)
                    t.at(i, j, k2, l) =
                        k * ((i == k2 && j == l ? 1.0 : 0.0) - (i == l && j == k2 ? 1.0 : 0.0));
    return t;
}

AlgCurvTensor product_s2s2_tensor(double r1, double r2) {
    AlgCurvTensor t;
    t.set_sym(0, 1, 0, 1, 1.0 / (r1 * r1));
    t.set_sym(2, 3, 2, 3, 1.0 / (r2 * r2));
    return t;
}

AlgCurvTensor product_s1s3_tensor(double r2) {
    const double k = 1.0 / (r2 * r2);
    AlgCurvTensor t;
    t.set_sym(1, 2, 1, 2, k);
    t.set_sym(1, 3, 1, 3, k);
    t.set_sym(2, 3, 2, 3, k);
    return t;
}

AlgCurvTensor fubini_study_tensor(double scale) {
    // Constant holomorphic sectional curvature 4/scale in the frame
    // (e1, Je1, e3, Je3); sectional curvature ranges over [1,4]/scale.
    const double k = 1.0 / scale;
    AlgCurvTensor t;
    t.set_sym(0, 1, 0, 1, 4.0 * k);
    t.set_sym(2, 3, 2, 3, 4.0 * k);
    t.set_sym(0, 2, 0, 2, k);
    t.set_sym(0, 3, 0, 3, k);
    t.set_sym(1, 2, 1, 2, k);
    t.set_sym(1, 3, 1, 3, k);
    t.set_sym(0, 1, 2, 3, 2.0 * k);
    t.set_sym(0, 2, 1, 3, k);
    t.set_sym(0, 3, 1, 2, -k);
    return t;
}

}  // namespace curv4
